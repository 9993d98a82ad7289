#include "trackgen/loudness.hpp"

#include <cmath>
#include <numbers>

#include "trackgen/effects.hpp"

namespace trackgen {

namespace {

// Analog-prototype constants for the two K-weighting stages (high-shelf
// pre-filter and RLB high-pass), bilinear-transformed at the target rate.
// At 48 kHz this reproduces the BS.1770-4 coefficient table; a unit test
// pins that correspondence, and docs/file-formats.md lists the 44.1 kHz
// values this derivation produces.
constexpr double kShelfGainDb = 3.999843853973347;
constexpr double kShelfFreq = 1681.974450955533;
constexpr double kShelfQ = 0.7071752369554196;
constexpr double kShelfVbExponent = 0.4996667741545416;
constexpr double kRlbFreq = 38.13547087602444;
constexpr double kRlbQ = 0.5003270373238773;

constexpr double kBlockSeconds = 0.4;
constexpr double kHopSeconds = 0.1;  // 75% overlap
constexpr double kAbsoluteGateLufs = -70.0;
constexpr double kRelativeGateLu = -10.0;
constexpr double kOffsetDb = -0.691;

void check_rate(int rate) {
    if (rate != 44100 && rate != 48000) {
        throw UserError("loudness measurement supports 44100/48000 Hz, got " + std::to_string(rate));
    }
}

double block_loudness(double power_sum) {
    return kOffsetDb + 10.0 * std::log10(std::max(power_sum, 1e-30));
}

/// Per-block summed mean-square power of the K-weighted channels.
std::vector<double> block_powers(const StereoBuffer& weighted, std::size_t block, std::size_t hop) {
    const std::size_t n = weighted.frames();
    std::vector<double> powers;
    if (n < block) return powers;

    // Prefix sums of squared samples keep the sweep O(n).
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + weighted.left[i] * weighted.left[i] +
                        weighted.right[i] * weighted.right[i];
    }
    for (std::size_t start = 0; start + block <= n; start += hop) {
        powers.push_back((prefix[start + block] - prefix[start]) / static_cast<double>(block));
    }
    return powers;
}

StereoBuffer weighted_copy(const StereoBuffer& buffer) {
    StereoBuffer weighted = buffer;
    k_weight(weighted);
    return weighted;
}

}  // namespace

Biquad make_k_shelf(double fs) {
    const double K = std::tan(std::numbers::pi * kShelfFreq / fs);
    const double Vh = std::pow(10.0, kShelfGainDb / 20.0);
    const double Vb = std::pow(Vh, kShelfVbExponent);
    const double a0 = 1.0 + K / kShelfQ + K * K;
    return Biquad((Vh + Vb * K / kShelfQ + K * K) / a0, 2.0 * (K * K - Vh) / a0,
                  (Vh - Vb * K / kShelfQ + K * K) / a0, 2.0 * (K * K - 1.0) / a0,
                  (1.0 - K / kShelfQ + K * K) / a0);
}

Biquad make_k_rlb(double fs) {
    const double K = std::tan(std::numbers::pi * kRlbFreq / fs);
    const double a0 = 1.0 + K / kRlbQ + K * K;
    return Biquad(1.0, -2.0, 1.0, 2.0 * (K * K - 1.0) / a0, (1.0 - K / kRlbQ + K * K) / a0);
}

void k_weight(StereoBuffer& buffer) {
    check_rate(buffer.sample_rate);
    for (int c = 0; c < 2; ++c) {
        Biquad shelf = make_k_shelf(buffer.sample_rate);
        Biquad rlb = make_k_rlb(buffer.sample_rate);
        for (double& v : buffer.channel(c)) v = rlb.process(shelf.process(v));
    }
}

std::optional<double> lufs_integrated(const StereoBuffer& buffer) {
    check_rate(buffer.sample_rate);
    const auto block = static_cast<std::size_t>(kBlockSeconds * buffer.sample_rate);
    const auto hop = static_cast<std::size_t>(kHopSeconds * buffer.sample_rate);
    if (buffer.frames() < block) throw UserError("input shorter than one 400 ms gating block");

    const std::vector<double> powers = block_powers(weighted_copy(buffer), block, hop);

    double sum = 0.0;
    std::size_t count = 0;
    for (double z : powers) {
        if (block_loudness(z) > kAbsoluteGateLufs) {
            sum += z;
            ++count;
        }
    }
    if (count == 0) return std::nullopt;

    const double relative_gate = block_loudness(sum / static_cast<double>(count)) + kRelativeGateLu;
    double gated_sum = 0.0;
    std::size_t gated_count = 0;
    for (double z : powers) {
        const double l = block_loudness(z);
        if (l > kAbsoluteGateLufs && l > relative_gate) {
            gated_sum += z;
            ++gated_count;
        }
    }
    if (gated_count == 0) return std::nullopt;
    return block_loudness(gated_sum / static_cast<double>(gated_count));
}

ShortTermLoudness lufs_short_term(const StereoBuffer& buffer) {
    check_rate(buffer.sample_rate);
    const auto window = static_cast<std::size_t>(3 * buffer.sample_rate);
    const auto hop = static_cast<std::size_t>(buffer.sample_rate);
    if (buffer.frames() < window) throw UserError("input shorter than one 3 s short-term window");

    ShortTermLoudness result;
    for (double z : block_powers(weighted_copy(buffer), window, hop)) {
        result.series.push_back(std::max(block_loudness(z), kLoudnessFloorDb));
    }

    double sum = 0.0;
    for (double v : result.series) sum += v;
    result.mean = sum / static_cast<double>(result.series.size());
    double var = 0.0;
    for (double v : result.series) var += (v - result.mean) * (v - result.mean);
    result.stddev = std::sqrt(var / static_cast<double>(result.series.size()));
    return result;
}

LoudnessReport measure_loudness(const StereoBuffer& buffer) {
    LoudnessReport report;
    report.integrated_lufs = lufs_integrated(buffer);
    if (buffer.frames() >= static_cast<std::size_t>(3 * buffer.sample_rate)) {
        const ShortTermLoudness st = lufs_short_term(buffer);
        report.short_term_series = st.series;
        report.short_term_mean = st.mean;
        report.short_term_std = st.stddev;
    }
    return report;
}

nlohmann::json loudness_report_to_json(const LoudnessReport& report) {
    nlohmann::json j;
    j["no_signal"] = !report.integrated_lufs.has_value();
    j["integrated_lufs"] =
        report.integrated_lufs ? nlohmann::json(*report.integrated_lufs) : nlohmann::json(nullptr);
    j["short_term"] = nlohmann::json::object();
    j["short_term"]["series"] = report.short_term_series;
    j["short_term"]["mean"] =
        report.short_term_mean ? nlohmann::json(*report.short_term_mean) : nlohmann::json(nullptr);
    j["short_term"]["std"] =
        report.short_term_std ? nlohmann::json(*report.short_term_std) : nlohmann::json(nullptr);
    return j;
}

}  // namespace trackgen
