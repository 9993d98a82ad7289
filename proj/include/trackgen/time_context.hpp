#pragma once

#include <cstdint>

#include "trackgen/rational.hpp"

namespace trackgen {

/// Tempo and sample-rate context of a track. Only 4/4 is supported; the
/// beats_per_bar field exists for forward compatibility and anything else
/// is rejected on use.
struct TimeContext {
    double bpm = 128.0;
    int sample_rate = 44100;
    int beats_per_bar = 4;

    std::int64_t samples_per_beat() const;
    std::int64_t samples_per_bar() const;

    /// Throws UserError when bpm/sample_rate are non-positive or the time
    /// signature is not 4/4.
    void validate() const;
};

/// floor(60 * sample_rate / bpm)
std::int64_t samples_per_beat(double bpm, int sample_rate);

/// floor(4 * 60 * sample_rate / bpm). Note this is the floor of the whole
/// product, not 4x the beat floor (at 128 BPM / 44.1 kHz: 82687 vs 82684).
std::int64_t samples_per_bar(double bpm, int sample_rate);

/// floor(position_bars * 4 * 60 * sample_rate / bpm); monotone in position.
std::int64_t bar_to_sample_index(const Rational& position_bars, const TimeContext& ctx);

}  // namespace trackgen
