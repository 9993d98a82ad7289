#include "trackgen/sheets.hpp"

#include <algorithm>
#include <array>

#include "trackgen/effects.hpp"
#include "trackgen/render.hpp"
#include "trackgen/rng.hpp"
#include "trackgen/wav.hpp"

namespace trackgen {

namespace {

constexpr std::uint64_t kSaltFxChoice = 0x66786368ULL;  // stream salt for dir draws

const std::array<const char*, 12> kKnownSpecKeys = {
    "source_path", "dir", "type", "preset", "preset_dir", "id",
    "gain", "every", "blank_every", "highpass", "duration", "resample"};

SourceSpec spec_from_json(const nlohmann::json& j, const std::string& context,
                          std::vector<std::string>& warnings) {
    if (!j.is_object()) throw UserError(context + ": source spec must be an object");
    SourceSpec spec;
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(kKnownSpecKeys.begin(), kKnownSpecKeys.end(),
                         [&](const char* k) { return key == k; }) == kKnownSpecKeys.end()) {
            warnings.push_back(context + ": ignoring unknown key '" + key + "'");
        }
        (void)value;
    }
    const auto opt_string = [&](const char* key) -> std::optional<std::string> {
        if (!j.contains(key)) return std::nullopt;
        if (!j[key].is_string()) throw UserError(context + ": '" + std::string(key) + "' must be a string");
        return j[key].get<std::string>();
    };
    spec.source_path = opt_string("source_path");
    spec.dir = opt_string("dir");
    spec.type = opt_string("type");
    spec.preset = opt_string("preset");
    spec.preset_dir = opt_string("preset_dir");
    spec.id = opt_string("id");
    spec.gain_db = j.value("gain", 0.0);
    spec.every = j.value("every", 1);
    if (j.contains("blank_every")) spec.blank_every = j["blank_every"].get<int>();
    if (j.contains("highpass")) spec.highpass = j["highpass"].get<double>();
    spec.preset_duration_s = j.value("duration", 2.0);
    spec.resample = j.value("resample", false);

    const int sources = (spec.source_path ? 1 : 0) + (spec.dir ? 1 : 0) + (spec.preset ? 1 : 0) +
                        (spec.preset_dir ? 1 : 0);
    if (sources != 1) {
        throw UserError(context +
                        ": exactly one of source_path / dir / preset / preset_dir is required");
    }
    if (spec.every < 1) throw UserError(context + ": 'every' must be >= 1");
    if (spec.blank_every && *spec.blank_every < 1) throw UserError(context + ": 'blank_every' must be >= 1");
    if (!std::isfinite(spec.gain_db)) throw UserError(context + ": 'gain' must be finite");
    return spec;
}

nlohmann::json spec_to_json(const SourceSpec& spec) {
    nlohmann::json j = nlohmann::json::object();
    if (spec.source_path) j["source_path"] = *spec.source_path;
    if (spec.dir) j["dir"] = *spec.dir;
    if (spec.type) j["type"] = *spec.type;
    if (spec.preset) j["preset"] = *spec.preset;
    if (spec.preset_dir) j["preset_dir"] = *spec.preset_dir;
    if (spec.id) j["id"] = *spec.id;
    if (spec.gain_db != 0.0) j["gain"] = spec.gain_db;
    if (spec.every != 1) j["every"] = spec.every;
    if (spec.blank_every) j["blank_every"] = *spec.blank_every;
    if (spec.highpass) j["highpass"] = *spec.highpass;
    if (spec.preset && spec.preset_duration_s != 2.0) j["duration"] = spec.preset_duration_s;
    if (spec.resample) j["resample"] = true;
    return j;
}

std::vector<std::filesystem::path> list_wavs(const std::filesystem::path& dir, const std::string& context) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw UserError(context + ": directory '" + dir.string() + "' is not readable");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".wav") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw UserError(context + ": directory '" + dir.string() + "' has no .wav files");
    return files;
}

std::string unique_core_id(const Track& track, const std::string& want) {
    std::string id = want;
    int suffix = 2;
    while (track.sample_cores.contains(id) || track.pattern_cores.contains(id)) {
        id = want + "~" + std::to_string(suffix++);
    }
    return id;
}

/// `rel_path` is kept verbatim as the core's source_path so annotations
/// re-resolve against the same base directory on re-render.
std::string register_one_shot(Track& track, const std::filesystem::path& base_dir,
                              const std::filesystem::path& rel_path, const SourceSpec& spec,
                              const std::string& context) {
    SampleCore core;
    core.source_path = rel_path.generic_string();
    core.gain_db = spec.gain_db;
    try {
        core.audio = read_wav(base_dir / rel_path);
    } catch (const UserError& e) {
        throw UserError(context + ": " + e.what());
    }
    if (core.audio.sample_rate != track.ctx.sample_rate) {
        throw UserError(context + ": '" + rel_path.generic_string() + "' is at " +
                        std::to_string(core.audio.sample_rate) + " Hz, track expects " +
                        std::to_string(track.ctx.sample_rate) + " Hz");
    }
    if (spec.highpass) apply_highpass(core.audio, *spec.highpass);
    core.id = unique_core_id(track, spec.id.value_or(rel_path.stem().string()));
    const std::string id = core.id;
    track.sample_cores.emplace(id, std::move(core));
    return id;
}

}  // namespace

SoundSheet sound_sheet_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw UserError("sound sheet must be a JSON object of parts");
    SoundSheet sheet;
    for (const auto& [part, specs] : j.items()) {
        if (!specs.is_array()) {
            throw UserError("sound sheet part '" + part + "' must hold an array of source specs");
        }
        std::vector<SourceSpec> list;
        for (std::size_t i = 0; i < specs.size(); ++i) {
            list.push_back(spec_from_json(specs[i], "sound sheet part '" + part + "' entry " +
                                                        std::to_string(i),
                                          sheet.warnings));
        }
        sheet.parts.emplace(part, std::move(list));
    }
    return sheet;
}

SoundSheet parse_sound_sheet(const std::string& json_text) {
    try {
        return sound_sheet_from_json(nlohmann::json::parse(json_text));
    } catch (const nlohmann::json::parse_error& e) {
        throw UserError(std::string("malformed sound sheet JSON: ") + e.what());
    }
}

nlohmann::json sound_sheet_to_json(const SoundSheet& sheet) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [part, specs] : sheet.parts) {
        auto& list = j[part] = nlohmann::json::array();
        for (const SourceSpec& spec : specs) list.push_back(spec_to_json(spec));
    }
    return j;
}

ChannelSheet channel_sheet_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw UserError("channel sheet must be a JSON object of parts");
    ChannelSheet sheet;
    for (const auto& [part, effects] : j.items()) {
        if (!effects.is_array()) {
            throw UserError("channel sheet part '" + part + "' must hold an array of effects");
        }
        std::vector<EffectConfig> list;
        for (const auto& e : effects) {
            try {
                list.push_back(effect_from_json(e));
            } catch (const UserError& err) {
                throw UserError("channel sheet part '" + part + "': " + err.what());
            }
        }
        sheet.channels.emplace(part, std::move(list));
    }
    return sheet;
}

ChannelSheet parse_channel_sheet(const std::string& json_text) {
    try {
        return channel_sheet_from_json(nlohmann::json::parse(json_text));
    } catch (const nlohmann::json::parse_error& e) {
        throw UserError(std::string("malformed channel sheet JSON: ") + e.what());
    }
}

nlohmann::json channel_sheet_to_json(const ChannelSheet& sheet) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [part, effects] : sheet.channels) {
        auto& list = j[part] = nlohmann::json::array();
        for (const EffectConfig& e : effects) list.push_back(effect_to_json(e));
    }
    return j;
}

nlohmann::json apply_style_patch(nlohmann::json base, const nlohmann::json& patch) {
    base.merge_patch(patch);
    return base;
}

void ensure_part_routed(Track& track, const std::string& part, std::vector<std::string>* warnings) {
    if (track.routing.contains(part)) return;
    if (!track.channels.contains(part)) {
        track.channels.emplace(part, Channel{part, {}});
        if (warnings) {
            warnings->push_back("part '" + part + "' has no channel-sheet entry; using pass-through");
        }
    }
    track.routing[part] = part;
}

StyleInstance instantiate_style(const SoundSheet& sound, const ChannelSheet& channel,
                                const std::filesystem::path& base_dir, const TimeContext& ctx,
                                int length_bars, std::uint64_t seed,
                                const PresetRegistry* reuse_presets) {
    ctx.validate();
    if (length_bars < 1) throw UserError("track length must be >= 1 bar");

    StyleInstance instance;
    Track& track = instance.track;
    track.ctx = ctx;
    track.length_bars = length_bars;

    for (const auto& [part, effects] : channel.channels) {
        track.channels.emplace(part, Channel{part, effects});
        track.routing[part] = part;
    }

    Rng rng(derive_seed(seed, kSaltFxChoice));

    // std::map iteration makes (part, spec, occurrence) order deterministic,
    // which pins the rng stream for dir draws.
    for (const auto& [part, specs] : sound.parts) {
        for (std::size_t spec_index = 0; spec_index < specs.size(); ++spec_index) {
            const SourceSpec& spec = specs[spec_index];
            const std::string context =
                "sound sheet part '" + part + "' entry " + std::to_string(spec_index);

            if (spec.preset || spec.preset_dir) {
                continue;  // handled by build_presets below
            }
            if (spec.source_path) {
                const std::string core_id =
                    register_one_shot(track, base_dir, *spec.source_path, spec, context);
                place_periodic(track, part, core_id, spec.every, spec.blank_every);
            } else {  // dir pool: one uniform draw per occurrence
                const std::vector<std::filesystem::path> pool = list_wavs(base_dir / *spec.dir, context);
                std::map<std::size_t, std::string> registered;
                for (int measure : periodic_measures(length_bars, spec.every, spec.blank_every)) {
                    const std::size_t pick = rng.uniform_index(pool.size());
                    auto it = registered.find(pick);
                    if (it == registered.end()) {
                        const std::filesystem::path rel =
                            std::filesystem::path(*spec.dir) / pool[pick].filename();
                        it = registered.emplace(pick, register_one_shot(track, base_dir, rel, spec, context))
                                 .first;
                    }
                    track.samples[part].push_back({it->second, measure});
                }
            }
            ensure_part_routed(track, part, &instance.warnings);
        }
    }

    instance.presets = reuse_presets ? *reuse_presets : build_presets(sound, base_dir, ctx);
    for (const auto& [part, specs] : sound.parts) {
        // Preset-backed parts exist so scores can land on them; route now.
        for (const SourceSpec& spec : specs) {
            if (spec.preset || spec.preset_dir) {
                ensure_part_routed(track, part, &instance.warnings);
                break;
            }
        }
    }

    instance.warnings.insert(instance.warnings.end(), sound.warnings.begin(), sound.warnings.end());
    return instance;
}

PresetRegistry build_presets(const SoundSheet& sound, const std::filesystem::path& base_dir,
                             const TimeContext& ctx) {
    PresetRegistry presets;
    for (const auto& [part, specs] : sound.parts) {
        for (std::size_t spec_index = 0; spec_index < specs.size(); ++spec_index) {
            const SourceSpec& spec = specs[spec_index];
            if (!spec.preset && !spec.preset_dir) continue;
            const std::string context =
                "sound sheet part '" + part + "' entry " + std::to_string(spec_index);
            const std::string preset_id = spec.id.value_or(part);
            if (presets.contains(preset_id)) {
                throw UserError(context + ": preset id '" + preset_id + "' already registered");
            }
            Preset preset = spec.preset
                                ? synth_preset(synth_kind_from_string(*spec.preset), ctx,
                                               spec.preset_duration_s, preset_id, spec.gain_db)
                                : load_preset(base_dir / *spec.preset_dir, preset_id, spec.gain_db,
                                              ctx, spec.resample);
            presets.emplace(preset_id, std::move(preset));
        }
    }
    return presets;
}

}  // namespace trackgen
