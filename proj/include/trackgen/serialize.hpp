#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "trackgen/model.hpp"

namespace trackgen {

/// Rationals serialize as exact strings ("3/16"); integers and binary-exact
/// floats (0.125) are accepted on input.
nlohmann::json rational_to_json(const Rational& r);
Rational rational_from_json(const nlohmann::json& j, const std::string& context);

/// The annotation format: a full Track document, everything except the
/// audio content of sample cores (which reloads from source_path, resolved
/// against a base directory).
nlohmann::json track_to_json(const Track& track);
Track track_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// A symbolic score: per-part note lists with a loopable core length.
/// Notes without an explicit generator default to their part's preset.
struct ScorePart {
    int core_length_bars = 4;
    std::vector<Note> notes;
};

struct Score {
    std::string key = "C";
    std::string mode = "major";
    int length_bars = 8;
    std::map<std::string, ScorePart> parts;
};

nlohmann::json score_to_json(const Score& score);
Score score_from_json(const nlohmann::json& j);

/// Places each score part into the track as a pattern core looped from
/// measure 0 (copies at 0, L, 2L, ...). Empty generator ids resolve to the
/// part name.
void merge_score(Track& track, const Score& score);

nlohmann::json load_json_file(const std::filesystem::path& path);
void save_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace trackgen
