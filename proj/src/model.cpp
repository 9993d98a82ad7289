#include "trackgen/model.hpp"

namespace trackgen {

std::set<std::string> Track::part_names() const {
    std::set<std::string> names;
    for (const auto& [part, occurrences] : patterns) {
        if (!occurrences.empty()) names.insert(part);
    }
    for (const auto& [part, occurrences] : samples) {
        if (!occurrences.empty()) names.insert(part);
    }
    return names;
}

std::vector<Violation> validate_track(const Track& track, const std::set<std::string>& generator_ids) {
    std::vector<Violation> out;
    const auto flag = [&out](std::string entity, std::string message) {
        out.push_back({std::move(entity), std::move(message)});
    };

    if (!(track.ctx.bpm > 0.0)) flag("ctx", "bpm must be positive");
    if (track.ctx.sample_rate <= 0) flag("ctx", "sample_rate must be positive");
    if (track.ctx.beats_per_bar != 4) flag("ctx", "only 4/4 time is supported");
    if (track.length_bars < 1) flag("track", "length_bars must be >= 1");

    for (const auto& [id, core] : track.pattern_cores) {
        const std::string entity = "pattern core '" + id + "'";
        if (core.length_bars < 1) flag(entity, "length_bars must be >= 1");
        for (std::size_t i = 0; i < core.notes.size(); ++i) {
            const Note& note = core.notes[i];
            const std::string note_entity = entity + " note " + std::to_string(i);
            if (!(note.value > Rational(0))) flag(note_entity, "note value must be > 0");
            if (note.start < Rational(0)) flag(note_entity, "note start must be >= 0");
            if (note.start + note.value > Rational(core.length_bars)) {
                flag(note_entity, "note extends past the end of the core (start " + note.start.str() +
                                      " + value " + note.value.str() + " > " +
                                      std::to_string(core.length_bars) + " bars)");
            }
            if (!generator_ids.contains(note.generator_id)) {
                flag(note_entity, "generator '" + note.generator_id + "' is not a registered preset");
            }
        }
    }

    for (const auto& [id, core] : track.sample_cores) {
        if (core.audio.empty()) flag("sample core '" + id + "'", "audio buffer is empty");
    }

    for (const auto& [part, occurrences] : track.patterns) {
        for (std::size_t i = 0; i < occurrences.size(); ++i) {
            const Pattern& p = occurrences[i];
            const std::string entity = "part '" + part + "' pattern " + std::to_string(i);
            const auto it = track.pattern_cores.find(p.core_id);
            if (it == track.pattern_cores.end()) {
                flag(entity, "references unknown pattern core '" + p.core_id + "'");
                continue;
            }
            if (p.measure_index < 0) flag(entity, "measure_index must be >= 0");
            if (p.measure_index + it->second.length_bars > track.length_bars) {
                flag(entity, "placement at measure " + std::to_string(p.measure_index) + " of a " +
                                 std::to_string(it->second.length_bars) + "-bar core overruns the " +
                                 std::to_string(track.length_bars) + "-bar track");
            }
        }
    }

    for (const auto& [part, occurrences] : track.samples) {
        for (std::size_t i = 0; i < occurrences.size(); ++i) {
            const Sample& s = occurrences[i];
            const std::string entity = "part '" + part + "' sample " + std::to_string(i);
            if (!track.sample_cores.contains(s.core_id)) {
                flag(entity, "references unknown sample core '" + s.core_id + "'");
                continue;
            }
            // One-shots occupy their placement bar; tails past the track end
            // are truncated at render, so only the bar itself must fit.
            if (s.measure_index < 0) flag(entity, "measure_index must be >= 0");
            if (s.measure_index >= track.length_bars) {
                flag(entity, "placement at measure " + std::to_string(s.measure_index) +
                                 " is outside the " + std::to_string(track.length_bars) + "-bar track");
            }
        }
    }

    for (const auto& [part, channel_name] : track.routing) {
        if (!track.channels.contains(channel_name)) {
            flag("routing '" + part + "'", "routes to unknown channel '" + channel_name + "'");
        }
    }
    for (const std::string& part : track.part_names()) {
        if (!track.routing.contains(part)) {
            flag("part '" + part + "'", "has content but no routing entry");
        }
    }

    return out;
}

}  // namespace trackgen
