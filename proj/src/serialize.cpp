#include "trackgen/serialize.hpp"

#include <cmath>
#include <fstream>

#include "trackgen/render.hpp"
#include "trackgen/wav.hpp"

namespace trackgen {

namespace {

constexpr const char* kTrackFormat = "trackgen-track";
constexpr const char* kScoreFormat = "trackgen-score";

const nlohmann::json& require(const nlohmann::json& j, const char* key, const std::string& context) {
    if (!j.contains(key)) throw UserError(context + ": missing required field '" + key + "'");
    return j[key];
}

int require_int(const nlohmann::json& j, const char* key, const std::string& context) {
    const auto& v = require(j, key, context);
    if (!v.is_number_integer()) throw UserError(context + ": field '" + key + "' must be an integer");
    return v.get<int>();
}

Note note_from_json(const nlohmann::json& j, const std::string& context) {
    if (!j.is_object()) throw UserError(context + ": note must be an object");
    const auto& pitch_field = require(j, "pitch", context);
    Pitch pitch = pitch_field.is_string() ? Pitch::from_name(pitch_field.get<std::string>())
                                          : Pitch(pitch_field.get<int>());
    Note note{pitch, rational_from_json(require(j, "value", context), context + " value"),
              rational_from_json(require(j, "start", context), context + " start"),
              j.value("generator", std::string())};
    return note;
}

nlohmann::json note_to_json(const Note& note) {
    nlohmann::json j;
    j["pitch"] = note.pitch.name();
    j["value"] = rational_to_json(note.value);
    j["start"] = rational_to_json(note.start);
    if (!note.generator_id.empty()) j["generator"] = note.generator_id;
    return j;
}

}  // namespace

nlohmann::json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const nlohmann::json& j, const std::string& context) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_float()) {
        const double v = j.get<double>();
        const double scaled = v * 4096.0;
        const double snapped = std::round(scaled);
        if (std::fabs(scaled - snapped) > 1e-6) {
            throw UserError(context + ": " + std::to_string(v) +
                            " is not expressible on the 1/4096 grid; use an exact \"n/d\" string");
        }
        return Rational(static_cast<std::int64_t>(snapped), 4096);
    }
    throw UserError(context + ": expected a rational (\"n/d\" string or number)");
}

nlohmann::json track_to_json(const Track& track) {
    nlohmann::json j;
    j["format"] = kTrackFormat;
    j["version"] = 1;
    j["bpm"] = track.ctx.bpm;
    j["sample_rate"] = track.ctx.sample_rate;
    j["beats_per_bar"] = track.ctx.beats_per_bar;
    j["length_bars"] = track.length_bars;

    auto& cores = j["pattern_cores"] = nlohmann::json::object();
    for (const auto& [id, core] : track.pattern_cores) {
        nlohmann::json c;
        c["length_bars"] = core.length_bars;
        auto& notes = c["notes"] = nlohmann::json::array();
        for (const Note& n : core.notes) notes.push_back(note_to_json(n));
        cores[id] = std::move(c);
    }

    auto& sample_cores = j["sample_cores"] = nlohmann::json::object();
    for (const auto& [id, core] : track.sample_cores) {
        sample_cores[id] = {{"source_path", core.source_path}, {"gain", core.gain_db}};
    }

    auto& patterns = j["patterns"] = nlohmann::json::object();
    for (const auto& [part, occurrences] : track.patterns) {
        auto& list = patterns[part] = nlohmann::json::array();
        for (const Pattern& p : occurrences) list.push_back({{"core", p.core_id}, {"measure", p.measure_index}});
    }
    auto& samples = j["samples"] = nlohmann::json::object();
    for (const auto& [part, occurrences] : track.samples) {
        auto& list = samples[part] = nlohmann::json::array();
        for (const Sample& s : occurrences) list.push_back({{"core", s.core_id}, {"measure", s.measure_index}});
    }

    auto& channels = j["channels"] = nlohmann::json::object();
    for (const auto& [name, channel] : track.channels) {
        auto& effects = channels[name] = nlohmann::json::array();
        for (const EffectConfig& e : channel.effects) effects.push_back(effect_to_json(e));
    }

    j["routing"] = nlohmann::json::object();
    for (const auto& [part, channel] : track.routing) j["routing"][part] = channel;
    return j;
}

Track track_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw UserError("track document must be a JSON object");
    const std::string context = "track";
    if (j.value("format", std::string(kTrackFormat)) != kTrackFormat) {
        throw UserError("not a track document (format '" + j["format"].get<std::string>() + "')");
    }

    Track track;
    track.ctx.bpm = require(j, "bpm", context).get<double>();
    track.ctx.sample_rate = require_int(j, "sample_rate", context);
    track.ctx.beats_per_bar = j.value("beats_per_bar", 4);
    track.length_bars = require_int(j, "length_bars", context);
    track.ctx.validate();

    for (const auto& [id, c] : require(j, "pattern_cores", context).items()) {
        PatternCore core;
        core.id = id;
        core.length_bars = require_int(c, "length_bars", "pattern core '" + id + "'");
        for (const auto& n : require(c, "notes", "pattern core '" + id + "'")) {
            core.notes.push_back(note_from_json(n, "pattern core '" + id + "'"));
            if (core.notes.back().generator_id.empty()) {
                throw UserError("pattern core '" + id + "': note missing generator");
            }
        }
        track.pattern_cores.emplace(id, std::move(core));
    }

    for (const auto& [id, c] : require(j, "sample_cores", context).items()) {
        SampleCore core;
        core.id = id;
        core.source_path = require(c, "source_path", "sample core '" + id + "'").get<std::string>();
        core.gain_db = c.value("gain", 0.0);
        const std::filesystem::path path = base_dir / core.source_path;
        try {
            core.audio = read_wav(path);
        } catch (const UserError& e) {
            throw UserError("sample core '" + id + "': " + e.what());
        }
        track.sample_cores.emplace(id, std::move(core));
    }

    if (j.contains("patterns")) {
        for (const auto& [part, list] : j["patterns"].items()) {
            for (const auto& p : list) {
                track.patterns[part].push_back(
                    {require(p, "core", "pattern in part '" + part + "'").get<std::string>(),
                     require_int(p, "measure", "pattern in part '" + part + "'")});
            }
        }
    }
    if (j.contains("samples")) {
        for (const auto& [part, list] : j["samples"].items()) {
            for (const auto& s : list) {
                track.samples[part].push_back(
                    {require(s, "core", "sample in part '" + part + "'").get<std::string>(),
                     require_int(s, "measure", "sample in part '" + part + "'")});
            }
        }
    }

    for (const auto& [name, effects] : require(j, "channels", context).items()) {
        Channel channel;
        channel.name = name;
        for (const auto& e : effects) {
            try {
                channel.effects.push_back(effect_from_json(e));
            } catch (const UserError& err) {
                throw UserError("channel '" + name + "': " + err.what());
            }
        }
        track.channels.emplace(name, std::move(channel));
    }

    for (const auto& [part, channel] : require(j, "routing", context).items()) {
        track.routing[part] = channel.get<std::string>();
    }
    return track;
}

nlohmann::json score_to_json(const Score& score) {
    nlohmann::json j;
    j["format"] = kScoreFormat;
    j["version"] = 1;
    j["key"] = score.key;
    j["mode"] = score.mode;
    j["length_bars"] = score.length_bars;
    auto& parts = j["parts"] = nlohmann::json::object();
    for (const auto& [name, part] : score.parts) {
        nlohmann::json p;
        p["core_length_bars"] = part.core_length_bars;
        auto& notes = p["notes"] = nlohmann::json::array();
        for (const Note& n : part.notes) notes.push_back(note_to_json(n));
        parts[name] = std::move(p);
    }
    return j;
}

Score score_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw UserError("score document must be a JSON object");
    if (j.value("format", std::string(kScoreFormat)) != kScoreFormat) {
        throw UserError("not a score document (format '" + j["format"].get<std::string>() + "')");
    }
    Score score;
    score.key = j.value("key", score.key);
    score.mode = j.value("mode", score.mode);
    score.length_bars = require_int(j, "length_bars", "score");
    for (const auto& [name, p] : require(j, "parts", "score").items()) {
        ScorePart part;
        part.core_length_bars = require_int(p, "core_length_bars", "score part '" + name + "'");
        if (part.core_length_bars < 1) {
            throw UserError("score part '" + name + "': core_length_bars must be >= 1");
        }
        for (const auto& n : require(p, "notes", "score part '" + name + "'")) {
            part.notes.push_back(note_from_json(n, "score part '" + name + "'"));
        }
        score.parts.emplace(name, std::move(part));
    }
    return score;
}

void merge_score(Track& track, const Score& score) {
    for (const auto& [part, score_part] : score.parts) {
        const std::string core_id = part + "_core";
        if (track.pattern_cores.contains(core_id)) {
            throw UserError("score part '" + part + "' collides with existing core '" + core_id + "'");
        }
        PatternCore core;
        core.id = core_id;
        core.length_bars = score_part.core_length_bars;
        for (Note note : score_part.notes) {
            if (note.generator_id.empty()) note.generator_id = part;
            core.notes.push_back(std::move(note));
        }
        track.pattern_cores.emplace(core_id, std::move(core));
        place_periodic(track, part, core_id, score_part.core_length_bars);
    }
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw UserError("cannot open '" + path.string() + "'");
    try {
        return nlohmann::json::parse(file);
    } catch (const nlohmann::json::parse_error& e) {
        throw UserError("malformed JSON in '" + path.string() + "': " + e.what());
    }
}

void save_json_file(const nlohmann::json& j, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::trunc);
    if (!file) throw UserError("cannot open '" + path.string() + "' for writing");
    file << j.dump(2) << '\n';
    if (!file) throw Error("short write to '" + path.string() + "'");
}

}  // namespace trackgen
