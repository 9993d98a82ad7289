#include "trackgen/rational.hpp"

#include <cstdlib>

namespace trackgen {

Rational Rational::parse(const std::string& text) {
    const auto bad = [&] { return UserError("cannot parse rational '" + text + "'"); };
    if (text.empty()) throw bad();
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const std::int64_t n = std::stoll(text, &used);
            if (used != text.size()) throw bad();
            return Rational(n);
        }
        const std::int64_t n = std::stoll(text.substr(0, slash), &used);
        if (used != slash) throw bad();
        const std::string den_part = text.substr(slash + 1);
        const std::int64_t d = std::stoll(den_part, &used);
        if (used != den_part.size()) throw bad();
        return Rational(n, d);
    } catch (const UserError&) {
        throw;
    } catch (const std::exception&) {
        throw bad();
    }
}

}  // namespace trackgen
