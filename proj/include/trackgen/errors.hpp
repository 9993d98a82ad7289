#pragma once

#include <stdexcept>
#include <string>

namespace trackgen {

/// Base for all library errors. Maps to exit code 1 in the CLI.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Anything traceable to user input (bad arguments, unreadable files,
/// malformed JSON, out-of-range parameters). Maps to exit code 2.
class UserError : public Error {
public:
    explicit UserError(const std::string& what) : Error(what) {}
};

}  // namespace trackgen
