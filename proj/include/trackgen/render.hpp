#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trackgen/model.hpp"
#include "trackgen/preset.hpp"

namespace trackgen {

/// Renders a pattern core by overlap-adding each note's render at its offset
/// (pure summation, no normalization). The buffer spans the core's bars and
/// grows to hold release tails of notes ending on the last bar line.
StereoBuffer render_pattern_core(const PatternCore& core, const PresetRegistry& presets,
                                 const TimeContext& ctx);

struct RenderResult {
    StereoBuffer master;
    std::map<std::string, StereoBuffer> stems;  // post-channel, per part
};

/// Applies a channel's effects strictly in list order; errors carry the
/// channel name.
void apply_channel(StereoBuffer& buffer, const Channel& channel, const TimeContext& ctx);

/// Full mixdown: per part, overlap-add its placements into a bus at the
/// global floor of each measure offset, apply its routed channel, then sum
/// the channel outputs. The master is exactly length_bars long, equals the
/// samplewise sum of the stems, and is deterministic.
RenderResult render_track(const Track& track, const PresetRegistry& presets);

/// Measures 0, every, 2*every, ... < length_bars; with blank_every = b, the
/// occurrence whose measure index is b-1 (mod b) is dropped, leaving one
/// silent bar per b-bar group.
std::vector<int> periodic_measures(int length_bars, int every, std::optional<int> blank_every);

/// Places a registered core (sample or pattern) periodically into a part.
/// Pattern placements that would overrun the track end are skipped.
void place_periodic(Track& track, const std::string& part, const std::string& core_id, int every,
                    std::optional<int> blank_every = std::nullopt);

}  // namespace trackgen
