#include "trackgen/effects.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <deque>
#include <numbers>

namespace trackgen {

namespace {

double require_number(const nlohmann::json& j, const char* key, const std::string& tag) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw UserError("effect '" + tag + "' is missing numeric field '" + key + "'");
    }
    return j[key].get<double>();
}

double number_or(const nlohmann::json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw UserError("effect field '" + std::string(key) + "' must be a number");
    return j[key].get<double>();
}

void check_unit_range(double v, const char* what, const std::string& tag) {
    if (v < 0.0 || v > 1.0) {
        throw UserError("effect '" + tag + "': " + what + " must be in [0, 1], got " + std::to_string(v));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

std::string effect_tag(const EffectConfig& cfg) {
    struct Visitor {
        std::string operator()(const HighpassConfig&) const { return "highpass"; }
        std::string operator()(const LowpassConfig&) const { return "lowpass"; }
        std::string operator()(const SidechainConfig&) const { return "sidechain"; }
        std::string operator()(const ReverbConfig&) const { return "reverb"; }
        std::string operator()(const BalanceConfig&) const { return "balance"; }
        std::string operator()(const GainConfig&) const { return "gain"; }
        std::string operator()(const LimiterConfig&) const { return "limiter"; }
        std::string operator()(const CompressorConfig&) const { return "compressor"; }
    };
    return std::visit(Visitor{}, cfg);
}

EffectConfig effect_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw UserError("effect entry must be an object with a string 'type'");
    }
    const std::string tag = j["type"].get<std::string>();

    if (tag == "highpass" || tag == "lowpass") {
        const double freq = require_number(j, "freq", tag);
        if (freq <= 0.0) throw UserError("effect '" + tag + "': freq must be positive");
        if (tag == "highpass") return HighpassConfig{freq};
        return LowpassConfig{freq};
    }
    if (tag == "sidechain") {
        SidechainConfig cfg;
        cfg.attain = number_or(j, "attain", cfg.attain);
        cfg.mag = number_or(j, "mag", cfg.mag);
        const double order = number_or(j, "interp_order", 1.0);
        if (order < 1.0 || order != std::floor(order)) {
            throw UserError("effect 'sidechain': interp_order must be a positive integer");
        }
        cfg.interp_order = static_cast<int>(order);
        if (cfg.attain < 0.0 || cfg.attain > 1.0) {
            throw UserError("effect 'sidechain': attain must be in [0, 1]");
        }
        check_unit_range(cfg.mag, "mag", tag);
        return cfg;
    }
    if (tag == "reverb") {
        ReverbConfig cfg;
        cfg.dry_level = number_or(j, "dry_level", cfg.dry_level);
        cfg.wet_level = number_or(j, "wet_level", cfg.wet_level);
        check_unit_range(cfg.dry_level, "dry_level", tag);
        check_unit_range(cfg.wet_level, "wet_level", tag);
        return cfg;
    }
    if (tag == "balance") return BalanceConfig{require_number(j, "gain", tag)};
    if (tag == "gain") return GainConfig{require_number(j, "gain", tag)};
    if (tag == "limiter") {
        const double thres = require_number(j, "thres", tag);
        if (thres > 0.0) throw UserError("effect 'limiter': thres must be <= 0 dB");
        return LimiterConfig{thres};
    }
    if (tag == "compressor") {
        CompressorConfig cfg;
        cfg.thres_db = number_or(j, "thres", cfg.thres_db);
        cfg.ratio = number_or(j, "ratio", cfg.ratio);
        cfg.attack_ms = number_or(j, "attack", cfg.attack_ms);
        cfg.release_ms = number_or(j, "release", cfg.release_ms);
        if (cfg.ratio < 1.0) throw UserError("effect 'compressor': ratio must be >= 1");
        if (cfg.attack_ms <= 0.0 || cfg.release_ms <= 0.0) {
            throw UserError("effect 'compressor': attack/release must be positive");
        }
        return cfg;
    }
    throw UserError("unknown effect type '" + tag + "'");
}

nlohmann::json effect_to_json(const EffectConfig& cfg) {
    nlohmann::json j;
    j["type"] = effect_tag(cfg);
    struct Visitor {
        nlohmann::json& j;
        void operator()(const HighpassConfig& c) const { j["freq"] = c.freq; }
        void operator()(const LowpassConfig& c) const { j["freq"] = c.freq; }
        void operator()(const SidechainConfig& c) const {
            j["attain"] = c.attain;
            j["interp_order"] = c.interp_order;
            j["mag"] = c.mag;
        }
        void operator()(const ReverbConfig& c) const {
            j["dry_level"] = c.dry_level;
            j["wet_level"] = c.wet_level;
        }
        void operator()(const BalanceConfig& c) const { j["gain"] = c.gain_db; }
        void operator()(const GainConfig& c) const { j["gain"] = c.gain_db; }
        void operator()(const LimiterConfig& c) const { j["thres"] = c.thres_db; }
        void operator()(const CompressorConfig& c) const {
            j["thres"] = c.thres_db;
            j["ratio"] = c.ratio;
            j["attack"] = c.attack_ms;
            j["release"] = c.release_ms;
        }
    };
    std::visit(Visitor{j}, cfg);
    return j;
}

// ---------------------------------------------------------------------------
// Sidechain
// ---------------------------------------------------------------------------

Envelope sidechain_envelope(const TimeContext& ctx, double attain, int interp_order) {
    ctx.validate();
    if (attain < 0.0 || attain > 1.0) throw UserError("sidechain attain must be in [0, 1]");
    if (interp_order < 1) throw UserError("sidechain interp_order must be >= 1");

    const std::int64_t n_beat = ctx.samples_per_beat();
    const std::int64_t n_bar = ctx.samples_per_bar();
    Envelope env;
    env.period = n_beat;
    env.samples.resize(static_cast<std::size_t>(n_bar));

    const double reach = attain * static_cast<double>(n_beat);
    for (std::int64_t n = 0; n < n_bar; ++n) {
        const std::int64_t phase = n % n_beat;
        double v = 1.0;  // attain == 0 degenerates to the constant-1 envelope
        if (reach > 0.0 && static_cast<double>(phase) < reach) {
            v = std::pow(static_cast<double>(phase) / reach, static_cast<double>(interp_order));
        }
        env.samples[static_cast<std::size_t>(n)] = v;
    }
    return env;
}

void apply_sidechain(StereoBuffer& buffer, const Envelope& envelope, double mag) {
    if (mag < 0.0 || mag > 1.0) throw UserError("sidechain mag must be in [0, 1]");
    if (envelope.samples.empty()) throw Error("empty sidechain envelope");
    const std::size_t n_bar = envelope.samples.size();
    for (std::size_t i = 0; i < buffer.frames(); ++i) {
        const double e = envelope.samples[i % n_bar];
        const double g = mag * e + (1.0 - mag);
        buffer.left[i] *= g;
        buffer.right[i] *= g;
    }
}

// ---------------------------------------------------------------------------
// Biquads
// ---------------------------------------------------------------------------

namespace {

struct RbjCoeffs {
    double b0, b1, b2, a1, a2;
};

RbjCoeffs rbj(double freq, double sample_rate, bool highpass) {
    if (!(freq > 0.0) || freq >= sample_rate / 2.0) {
        throw UserError("filter cutoff " + std::to_string(freq) + " Hz outside (0, Nyquist) for fs=" +
                        std::to_string(sample_rate));
    }
    const double q = 1.0 / std::numbers::sqrt2;
    const double w0 = 2.0 * std::numbers::pi * freq / sample_rate;
    const double cw = std::cos(w0);
    const double sw = std::sin(w0);
    const double alpha = sw / (2.0 * q);
    const double a0 = 1.0 + alpha;
    RbjCoeffs c{};
    if (highpass) {
        c.b0 = (1.0 + cw) / 2.0 / a0;
        c.b1 = -(1.0 + cw) / a0;
        c.b2 = (1.0 + cw) / 2.0 / a0;
    } else {
        c.b0 = (1.0 - cw) / 2.0 / a0;
        c.b1 = (1.0 - cw) / a0;
        c.b2 = (1.0 - cw) / 2.0 / a0;
    }
    c.a1 = -2.0 * cw / a0;
    c.a2 = (1.0 - alpha) / a0;
    return c;
}

}  // namespace

Biquad Biquad::highpass(double freq, double sample_rate) {
    const RbjCoeffs c = rbj(freq, sample_rate, true);
    return Biquad(c.b0, c.b1, c.b2, c.a1, c.a2);
}

Biquad Biquad::lowpass(double freq, double sample_rate) {
    const RbjCoeffs c = rbj(freq, sample_rate, false);
    return Biquad(c.b0, c.b1, c.b2, c.a1, c.a2);
}

double Biquad::magnitude_at(double freq, double sample_rate) const {
    const double w = 2.0 * std::numbers::pi * freq / sample_rate;
    const std::complex<double> z = std::polar(1.0, -w);
    const std::complex<double> num = b0_ + b1_ * z + b2_ * z * z;
    const std::complex<double> den = 1.0 + a1_ * z + a2_ * z * z;
    return std::abs(num / den);
}

void apply_highpass(StereoBuffer& buffer, double freq) {
    for (int c = 0; c < 2; ++c) {
        Biquad f = Biquad::highpass(freq, buffer.sample_rate);
        f.process_buffer(buffer.channel(c));
    }
}

void apply_lowpass(StereoBuffer& buffer, double freq) {
    for (int c = 0; c < 2; ++c) {
        Biquad f = Biquad::lowpass(freq, buffer.sample_rate);
        f.process_buffer(buffer.channel(c));
    }
}

// ---------------------------------------------------------------------------
// Reverb (Schroeder: 4 parallel combs + 2 series allpasses)
// ---------------------------------------------------------------------------

namespace {

// Classic Schroeder tuning; delays in seconds, identical for both channels
// so the processor stays channel-symmetric.
constexpr std::array<double, 4> kCombDelays = {0.0297, 0.0371, 0.0411, 0.0437};
constexpr std::array<double, 4> kCombFeedback = {0.805, 0.783, 0.764, 0.742};
constexpr std::array<double, 2> kAllpassDelays = {0.0050, 0.0017};
constexpr double kAllpassGain = 0.7;
constexpr double kCombMixScale = 0.25;  // average the four comb outputs

class CombFilter {
public:
    CombFilter(std::size_t delay, double feedback) : line_(delay, 0.0), feedback_(feedback) {}
    double process(double x) {
        const double out = line_[pos_];
        line_[pos_] = x + feedback_ * out;
        pos_ = (pos_ + 1) % line_.size();
        return out;
    }

private:
    std::vector<double> line_;
    double feedback_;
    std::size_t pos_ = 0;
};

class AllpassFilter {
public:
    AllpassFilter(std::size_t delay, double gain) : line_(delay, 0.0), gain_(gain) {}
    double process(double x) {
        const double delayed = line_[pos_];
        const double w = x + gain_ * delayed;
        line_[pos_] = w;
        pos_ = (pos_ + 1) % line_.size();
        return delayed - gain_ * w;
    }

private:
    std::vector<double> line_;
    double gain_;
    std::size_t pos_ = 0;
};

}  // namespace

void apply_reverb(StereoBuffer& buffer, double dry_level, double wet_level) {
    if (dry_level < 0.0 || dry_level > 1.0 || wet_level < 0.0 || wet_level > 1.0) {
        throw UserError("reverb dry/wet levels must be in [0, 1]");
    }
    if (wet_level == 0.0) {
        buffer.scale(dry_level);
        return;
    }
    const double fs = buffer.sample_rate;
    for (int c = 0; c < 2; ++c) {
        std::vector<CombFilter> combs;
        for (std::size_t i = 0; i < kCombDelays.size(); ++i) {
            combs.emplace_back(static_cast<std::size_t>(std::lround(kCombDelays[i] * fs)), kCombFeedback[i]);
        }
        std::vector<AllpassFilter> allpasses;
        for (double d : kAllpassDelays) {
            allpasses.emplace_back(static_cast<std::size_t>(std::lround(d * fs)), kAllpassGain);
        }
        auto& samples = buffer.channel(c);
        for (double& v : samples) {
            double wet = 0.0;
            for (auto& comb : combs) wet += comb.process(v);
            wet *= kCombMixScale;
            for (auto& ap : allpasses) wet = ap.process(wet);
            v = dry_level * v + wet_level * wet;
        }
    }
}

// ---------------------------------------------------------------------------
// Dynamics
// ---------------------------------------------------------------------------

void apply_balance(StereoBuffer& buffer, double gain_db) {
    buffer.scale(db_to_gain(gain_db));
}

void apply_limiter(StereoBuffer& buffer, double thres_db) {
    if (thres_db > 0.0) throw UserError("limiter threshold must be <= 0 dB");
    const std::size_t n = buffer.frames();
    if (n == 0) return;

    const double ceiling = db_to_gain(thres_db);
    const auto lookahead = static_cast<std::size_t>(0.005 * buffer.sample_rate);
    const double release_coeff = 1.0 - std::exp(-1.0 / (0.050 * buffer.sample_rate));

    // Per-sample gain needed to keep |x| at or below the ceiling.
    std::vector<double> needed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::max(std::fabs(buffer.left[i]), std::fabs(buffer.right[i]));
        needed[i] = a > ceiling ? ceiling / a : 1.0;
    }

    // Sliding-window minimum over [i, i+lookahead] so the gain is already
    // down when the peak arrives.
    std::vector<double> window_min(n);
    std::deque<std::size_t> dq;
    for (std::size_t i = n; i-- > 0;) {
        // window for i is [i, i+lookahead]; drop indices beyond it
        while (!dq.empty() && dq.front() > i + lookahead) dq.pop_front();
        while (!dq.empty() && needed[dq.back()] >= needed[i]) dq.pop_back();
        dq.push_back(i);
        window_min[i] = needed[dq.front()];
    }

    double gain = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        gain += release_coeff * (1.0 - gain);       // exponential recovery
        gain = std::min(gain, window_min[i]);       // instant (pre-announced) attack
        buffer.left[i] *= gain;
        buffer.right[i] *= gain;
    }
}

void apply_compressor(StereoBuffer& buffer, const CompressorConfig& cfg) {
    const std::size_t n = buffer.frames();
    if (n == 0) return;
    const double thres = db_to_gain(cfg.thres_db);
    const double attack = 1.0 - std::exp(-1.0 / (cfg.attack_ms * 0.001 * buffer.sample_rate));
    const double release = 1.0 - std::exp(-1.0 / (cfg.release_ms * 0.001 * buffer.sample_rate));

    double env = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::max(std::fabs(buffer.left[i]), std::fabs(buffer.right[i]));
        env += (a > env ? attack : release) * (a - env);
        double gain = 1.0;
        if (env > thres) {
            const double over_db = gain_to_db(env / thres);
            gain = db_to_gain(-over_db * (1.0 - 1.0 / cfg.ratio));
        }
        buffer.left[i] *= gain;
        buffer.right[i] *= gain;
    }
}

void apply_effect(StereoBuffer& buffer, const EffectConfig& cfg, const TimeContext& ctx) {
    struct Visitor {
        StereoBuffer& buffer;
        const TimeContext& ctx;
        void operator()(const HighpassConfig& c) const { apply_highpass(buffer, c.freq); }
        void operator()(const LowpassConfig& c) const { apply_lowpass(buffer, c.freq); }
        void operator()(const SidechainConfig& c) const {
            const Envelope env = sidechain_envelope(ctx, c.attain, c.interp_order);
            apply_sidechain(buffer, env, c.mag);
        }
        void operator()(const ReverbConfig& c) const { apply_reverb(buffer, c.dry_level, c.wet_level); }
        void operator()(const BalanceConfig& c) const { apply_balance(buffer, c.gain_db); }
        void operator()(const GainConfig& c) const { apply_balance(buffer, c.gain_db); }
        void operator()(const LimiterConfig& c) const { apply_limiter(buffer, c.thres_db); }
        void operator()(const CompressorConfig& c) const { apply_compressor(buffer, c); }
    };
    std::visit(Visitor{buffer, ctx}, cfg);
}

}  // namespace trackgen
