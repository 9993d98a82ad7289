#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "trackgen/audio.hpp"
#include "trackgen/time_context.hpp"

namespace trackgen {

// ---------------------------------------------------------------------------
// Effect configurations (the channel-sheet vocabulary)
// ---------------------------------------------------------------------------

struct HighpassConfig {
    double freq = 300.0;
};

struct LowpassConfig {
    double freq = 1000.0;
};

/// Per-beat ducking. `attain` is the fraction of a beat after which the
/// envelope has fully recovered, `interp_order` the power of the recovery
/// ramp, `mag` how much of the ducked signal is mixed in (0 = bypass).
struct SidechainConfig {
    double attain = 0.5;
    int interp_order = 1;
    double mag = 1.0;
};

struct ReverbConfig {
    double dry_level = 1.0;
    double wet_level = 0.0;
};

struct BalanceConfig {
    double gain_db = 0.0;
};

struct GainConfig {
    double gain_db = 0.0;
};

struct LimiterConfig {
    double thres_db = 0.0;
};

/// Feed-forward compressor. Not part of the demo chains but kept in the
/// vocabulary since channel EQ/compression belongs to the mixer model.
struct CompressorConfig {
    double thres_db = -18.0;
    double ratio = 4.0;
    double attack_ms = 5.0;
    double release_ms = 100.0;
};

using EffectConfig = std::variant<HighpassConfig, LowpassConfig, SidechainConfig, ReverbConfig,
                                  BalanceConfig, GainConfig, LimiterConfig, CompressorConfig>;

std::string effect_tag(const EffectConfig& cfg);

/// Parses one channel-sheet entry ({"type": ..., ...}). Unknown tags and
/// out-of-range parameters are errors naming the offender.
EffectConfig effect_from_json(const nlohmann::json& j);
nlohmann::json effect_to_json(const EffectConfig& cfg);

// ---------------------------------------------------------------------------
// Sidechain envelope
// ---------------------------------------------------------------------------

/// One bar of the periodic per-beat ducking envelope: within every beat of
/// N_beat samples, e[n] = (n / (attain*N_beat))^order clamped to 1, so
/// e[0] = 0 (full duck on the kick transient) and e reaches 1 at attain*N_beat.
struct Envelope {
    std::vector<double> samples;  // length = samples_per_bar
    std::int64_t period = 0;      // samples_per_beat
};

Envelope sidechain_envelope(const TimeContext& ctx, double attain, int interp_order);

/// out[n] = (mag*e[n] + (1-mag)) * in[n], envelope broadcast across the two
/// channels and tiled bar-by-bar across the buffer.
void apply_sidechain(StereoBuffer& buffer, const Envelope& envelope, double mag);

// ---------------------------------------------------------------------------
// Filters
// ---------------------------------------------------------------------------

/// One biquad section, direct form II transposed, with its own state.
class Biquad {
public:
    Biquad(double b0, double b1, double b2, double a1, double a2)
        : b0_(b0), b1_(b1), b2_(b2), a1_(a1), a2_(a2) {}

    /// 2nd-order Butterworth (Q = 1/sqrt(2)) via the RBJ cookbook.
    static Biquad highpass(double freq, double sample_rate);
    static Biquad lowpass(double freq, double sample_rate);

    double process(double x) {
        const double y = b0_ * x + z1_;
        z1_ = b1_ * x - a1_ * y + z2_;
        z2_ = b2_ * x - a2_ * y;
        return y;
    }

    void process_buffer(std::vector<double>& samples) {
        for (double& v : samples) v = process(v);
    }

    void reset() { z1_ = z2_ = 0.0; }

    /// Magnitude response at `freq` (used by tests and the K-weighting docs).
    double magnitude_at(double freq, double sample_rate) const;

    double b0() const { return b0_; }
    double b1() const { return b1_; }
    double b2() const { return b2_; }
    double a1() const { return a1_; }
    double a2() const { return a2_; }

private:
    double b0_, b1_, b2_, a1_, a2_;
    double z1_ = 0.0, z2_ = 0.0;
};

void apply_highpass(StereoBuffer& buffer, double freq);
void apply_lowpass(StereoBuffer& buffer, double freq);

// ---------------------------------------------------------------------------
// Other effects
// ---------------------------------------------------------------------------

/// out = dry*in + wet*R(in) with a Schroeder reverberator (4 parallel combs,
/// 2 series allpasses; delays/feedbacks fixed, see docs/file-formats.md).
/// The tail is truncated at the input length.
void apply_reverb(StereoBuffer& buffer, double dry_level, double wet_level);

void apply_balance(StereoBuffer& buffer, double gain_db);

/// Look-ahead brickwall limiter: 5 ms look-ahead, 50 ms exponential release.
/// Guarantees peak <= 10^(thres_db/20).
void apply_limiter(StereoBuffer& buffer, double thres_db);

void apply_compressor(StereoBuffer& buffer, const CompressorConfig& cfg);

void apply_effect(StereoBuffer& buffer, const EffectConfig& cfg, const TimeContext& ctx);

inline double db_to_gain(double db) { return std::pow(10.0, db / 20.0); }
inline double gain_to_db(double gain) { return 20.0 * std::log10(gain); }

}  // namespace trackgen
