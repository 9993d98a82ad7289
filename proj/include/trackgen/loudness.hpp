#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "trackgen/audio.hpp"
#include "trackgen/effects.hpp"

namespace trackgen {

/// The two K-weighting stages at a given rate (exposed for conformance tests
/// against the BS.1770-4 48 kHz coefficient table).
Biquad make_k_shelf(double fs);
Biquad make_k_rlb(double fs);

/// ITU-R BS.1770-4 measurement results. integrated is absent ("no-signal")
/// when every 400 ms block fell below the -70 LUFS absolute gate. Silent
/// short-term windows sit at the -100 dB floor.
struct LoudnessReport {
    std::optional<double> integrated_lufs;
    std::vector<double> short_term_series;  // 3 s windows, 1 s hop (empty for < 3 s input)
    std::optional<double> short_term_mean;
    std::optional<double> short_term_std;
};

inline constexpr double kLoudnessFloorDb = -100.0;

/// Applies the two-stage K-weighting (high-shelf pre-filter + RLB high-pass)
/// in place. Coefficients are derived from the analog prototype for the
/// buffer's rate; 44.1 and 48 kHz are supported.
void k_weight(StereoBuffer& buffer);

/// Gated integrated loudness: 400 ms blocks at 75% overlap, -70 LUFS
/// absolute gate, -10 LU relative gate. nullopt when everything is gated.
/// Input must be at least 400 ms long.
std::optional<double> lufs_integrated(const StereoBuffer& buffer);

struct ShortTermLoudness {
    std::vector<double> series;
    double mean = 0.0;
    double stddev = 0.0;
};

/// Ungated 3 s sliding-window loudness at a 1 s hop. Input >= 3 s.
ShortTermLoudness lufs_short_term(const StereoBuffer& buffer);

/// Integrated + short-term in one report (short-term skipped for < 3 s input).
LoudnessReport measure_loudness(const StereoBuffer& buffer);

nlohmann::json loudness_report_to_json(const LoudnessReport& report);

}  // namespace trackgen
