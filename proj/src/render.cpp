#include "trackgen/render.hpp"

#include <algorithm>

#include "trackgen/effects.hpp"

namespace trackgen {

StereoBuffer render_pattern_core(const PatternCore& core, const PresetRegistry& presets,
                                 const TimeContext& ctx) {
    const std::int64_t bar_frames = bar_to_sample_index(Rational(core.length_bars), ctx);
    StereoBuffer out(static_cast<std::size_t>(bar_frames), ctx.sample_rate);

    for (std::size_t i = 0; i < core.notes.size(); ++i) {
        const Note& note = core.notes[i];
        const auto preset_it = presets.find(note.generator_id);
        if (preset_it == presets.end()) {
            throw UserError("core '" + core.id + "' note " + std::to_string(i) +
                            ": generator '" + note.generator_id + "' is not registered");
        }
        try {
            NoteRender r = render_note(preset_it->second, note, ctx);
            out.ensure_frames(static_cast<std::size_t>(r.offset) + r.audio.frames());
            out.add(r.audio, r.offset);
        } catch (const UserError& e) {
            throw UserError("core '" + core.id + "' note " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

void apply_channel(StereoBuffer& buffer, const Channel& channel, const TimeContext& ctx) {
    for (const EffectConfig& effect : channel.effects) {
        try {
            apply_effect(buffer, effect, ctx);
        } catch (const UserError& e) {
            throw UserError("channel '" + channel.name + "': " + e.what());
        }
    }
}

RenderResult render_track(const Track& track, const PresetRegistry& presets) {
    std::set<std::string> generator_ids;
    for (const auto& [id, preset] : presets) generator_ids.insert(id);
    const std::vector<Violation> violations = validate_track(track, generator_ids);
    if (!violations.empty()) {
        std::string msg = "track validation failed:";
        for (const Violation& v : violations) msg += "\n  " + v.entity + ": " + v.message;
        throw UserError(msg);
    }

    const auto total = static_cast<std::size_t>(track.total_frames());
    RenderResult result;
    result.master = StereoBuffer(total, track.ctx.sample_rate);

    // Identical cores render once; one-shot gains bake once.
    std::map<std::string, StereoBuffer> core_renders;
    std::map<std::string, StereoBuffer> sample_renders;

    for (const std::string& part : track.part_names()) {
        StereoBuffer bus(total, track.ctx.sample_rate);

        if (const auto it = track.patterns.find(part); it != track.patterns.end()) {
            for (const Pattern& placement : it->second) {
                auto rendered = core_renders.find(placement.core_id);
                if (rendered == core_renders.end()) {
                    const PatternCore& core = track.pattern_cores.at(placement.core_id);
                    rendered = core_renders.emplace(placement.core_id,
                                                    render_pattern_core(core, presets, track.ctx)).first;
                }
                bus.add(rendered->second, bar_to_sample_index(Rational(placement.measure_index), track.ctx));
            }
        }
        if (const auto it = track.samples.find(part); it != track.samples.end()) {
            for (const Sample& placement : it->second) {
                auto rendered = sample_renders.find(placement.core_id);
                if (rendered == sample_renders.end()) {
                    const SampleCore& core = track.sample_cores.at(placement.core_id);
                    StereoBuffer scaled = core.audio;
                    scaled.scale(db_to_gain(core.gain_db));
                    rendered = sample_renders.emplace(placement.core_id, std::move(scaled)).first;
                }
                bus.add(rendered->second, bar_to_sample_index(Rational(placement.measure_index), track.ctx));
            }
        }

        const auto route = track.routing.find(part);
        if (route == track.routing.end()) {
            throw UserError("part '" + part + "' has no channel routing");
        }
        apply_channel(bus, track.channels.at(route->second), track.ctx);

        result.master.add(bus, 0);
        result.stems.emplace(part, std::move(bus));
    }

    return result;
}

std::vector<int> periodic_measures(int length_bars, int every, std::optional<int> blank_every) {
    if (every < 1) throw UserError("placement period 'every' must be >= 1");
    if (blank_every && *blank_every < 1) throw UserError("'blank_every' must be >= 1");
    std::vector<int> out;
    for (int m = 0; m < length_bars; m += every) {
        if (blank_every && m % *blank_every == *blank_every - 1) continue;
        out.push_back(m);
    }
    return out;
}

void place_periodic(Track& track, const std::string& part, const std::string& core_id, int every,
                    std::optional<int> blank_every) {
    const std::vector<int> measures = periodic_measures(track.length_bars, every, blank_every);
    if (track.sample_cores.contains(core_id)) {
        auto& occurrences = track.samples[part];
        for (int m : measures) occurrences.push_back({core_id, m});
        return;
    }
    if (const auto it = track.pattern_cores.find(core_id); it != track.pattern_cores.end()) {
        auto& occurrences = track.patterns[part];
        for (int m : measures) {
            if (m + it->second.length_bars <= track.length_bars) occurrences.push_back({core_id, m});
        }
        return;
    }
    throw UserError("place_periodic: no sample or pattern core named '" + core_id + "'");
}

}  // namespace trackgen
