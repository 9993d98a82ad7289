#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trackgen/model.hpp"
#include "trackgen/preset.hpp"

namespace trackgen {

/// One sound-sheet entry: where a part's audio comes from and how it is
/// placed. Exactly one of source_path / dir / preset / preset_dir is set.
struct SourceSpec {
    std::optional<std::string> source_path;  // fixed one-shot
    std::optional<std::string> dir;          // pool of one-shots, one drawn per occurrence
    std::optional<std::string> type;         // label for dir pools (e.g. "main-fill")
    std::optional<std::string> preset;       // procedural bank: sine|saw|supersaw
    std::optional<std::string> preset_dir;   // per-pitch WAV bank
    std::optional<std::string> id;           // registry id override (default: part name)
    double gain_db = 0.0;
    int every = 1;
    std::optional<int> blank_every;
    std::optional<double> highpass;          // per-source pre-filter, before the channel
    double preset_duration_s = 2.0;
    bool resample = false;
};

struct SoundSheet {
    std::map<std::string, std::vector<SourceSpec>> parts;
    std::vector<std::string> warnings;  // unknown keys etc., never fatal
};

struct ChannelSheet {
    std::map<std::string, std::vector<EffectConfig>> channels;
};

SoundSheet parse_sound_sheet(const std::string& json_text);
SoundSheet sound_sheet_from_json(const nlohmann::json& j);
nlohmann::json sound_sheet_to_json(const SoundSheet& sheet);

ChannelSheet parse_channel_sheet(const std::string& json_text);
ChannelSheet channel_sheet_from_json(const nlohmann::json& j);
nlohmann::json channel_sheet_to_json(const ChannelSheet& sheet);

/// Style overlay: base sheet JSON + RFC 7386 merge patch.
nlohmann::json apply_style_patch(nlohmann::json base, const nlohmann::json& patch);

struct StyleInstance {
    Track track;
    PresetRegistry presets;
    std::vector<std::string> warnings;
};

/// Builds a ready-to-render skeleton: one-shots placed per every/blank_every
/// (dir pools drawn uniformly per occurrence, seeded), presets registered,
/// channels built per sheet, melodic parts left empty awaiting a score.
/// Parts without a channel-sheet entry get a pass-through channel + warning.
/// `reuse_presets` skips the (deterministic) preset build, for batch runs
/// that share one registry across many tracks.
StyleInstance instantiate_style(const SoundSheet& sound, const ChannelSheet& channel,
                                const std::filesystem::path& base_dir, const TimeContext& ctx,
                                int length_bars, std::uint64_t seed,
                                const PresetRegistry* reuse_presets = nullptr);

/// Adds a pass-through channel + routing for a part that lacks one (used
/// when merging scores whose parts the sheets do not mention).
void ensure_part_routed(Track& track, const std::string& part, std::vector<std::string>* warnings);

/// Just the preset registry of a sound sheet (procedural banks + per-pitch
/// directories), without touching placements. Re-rendering an annotation
/// needs this and nothing else from the style.
PresetRegistry build_presets(const SoundSheet& sound, const std::filesystem::path& base_dir,
                             const TimeContext& ctx);

}  // namespace trackgen
