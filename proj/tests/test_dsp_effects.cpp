#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "trackgen/effects.hpp"
#include "trackgen/model.hpp"
#include "trackgen/render.hpp"
#include "trackgen/rng.hpp"
#include "test_util.hpp"

using namespace trackgen;
using testutil::make_noise;
using testutil::make_sine;
using testutil::max_abs_diff;

namespace {

const TimeContext kCtx{128.0, 44100, 4};

StereoBuffer two_bar_noise(std::uint64_t seed) {
    return make_noise(static_cast<std::size_t>(2 * kCtx.samples_per_bar()), 44100, seed, 0.8);
}

}  // namespace

TEST_CASE("sidechain envelope shape") {
    SUBCASE("attain 0 degenerates to the constant-1 envelope") {
        const Envelope e = sidechain_envelope(kCtx, 0.0, 3);
        for (double v : e.samples) CHECK(v == 1.0);
    }
    SUBCASE("linear ramp reaches one half midway") {
        const Envelope e = sidechain_envelope(kCtx, 1.0, 1);
        const auto n_beat = static_cast<std::size_t>(kCtx.samples_per_beat());
        CHECK(e.samples[0] == 0.0);
        CHECK(std::fabs(e.samples[n_beat / 2] - 0.5) < 2.0 / static_cast<double>(n_beat));
    }
    SUBCASE("cubic ramp value at a quarter beat (exact grid at 60 BPM)") {
        // 60 BPM / 44.1 kHz puts 0.25*N_beat on an integer sample, making the
        // reference value 0.5^3 exact.
        const TimeContext sixty{60.0, 44100, 4};
        const Envelope e = sidechain_envelope(sixty, 0.5, 3);
        const auto quarter = static_cast<std::size_t>(sixty.samples_per_beat() / 4);
        CHECK(std::fabs(e.samples[quarter] - 0.125) < 1e-9);
        // same configuration at the paper tempo, looser grid tolerance
        const Envelope e128 = sidechain_envelope(kCtx, 0.5, 3);
        const auto q128 = static_cast<std::size_t>(kCtx.samples_per_beat() / 4);
        CHECK(std::fabs(e128.samples[q128] - 0.125) < 1e-3);
    }
    SUBCASE("periodicity, monotonicity, saturation") {
        const Envelope e = sidechain_envelope(kCtx, 0.5, 3);
        const auto n_beat = static_cast<std::size_t>(kCtx.samples_per_beat());
        REQUIRE(e.samples.size() == static_cast<std::size_t>(kCtx.samples_per_bar()));
        for (std::size_t n = 0; n + n_beat < e.samples.size(); ++n) {
            CHECK(e.samples[n + n_beat] == e.samples[n]);
        }
        double max_v = 0.0;
        for (std::size_t n = 1; n < n_beat; ++n) {
            CHECK(e.samples[n] >= e.samples[n - 1]);
            max_v = std::max(max_v, e.samples[n]);
        }
        CHECK(max_v == 1.0);
        CHECK(e.samples[0] == 0.0);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(sidechain_envelope(kCtx, -0.1, 1), UserError);
        CHECK_THROWS_AS(sidechain_envelope(kCtx, 1.1, 1), UserError);
        CHECK_THROWS_AS(sidechain_envelope(kCtx, 0.5, 0), UserError);
    }
}

TEST_CASE("apply_sidechain matches the mix formula") {
    const Envelope e = sidechain_envelope(kCtx, 0.5, 3);
    SUBCASE("mag 0 bypasses") {
        StereoBuffer buf = two_bar_noise(1);
        const StereoBuffer orig = buf;
        apply_sidechain(buf, e, 0.0);
        CHECK(max_abs_diff(buf, orig) == 0.0);
    }
    SUBCASE("constant-1 envelope bypasses") {
        const Envelope flat = sidechain_envelope(kCtx, 0.0, 1);
        StereoBuffer buf = two_bar_noise(2);
        const StereoBuffer orig = buf;
        apply_sidechain(buf, flat, 0.66);
        CHECK(max_abs_diff(buf, orig) == 0.0);
    }
    SUBCASE("elementwise equality with the brute-force loop") {
        StereoBuffer buf = two_bar_noise(3);
        const StereoBuffer orig = buf;
        apply_sidechain(buf, e, 0.66);
        const std::size_t n_bar = e.samples.size();
        double max_err = 0.0;
        for (std::size_t i = 0; i < buf.frames(); ++i) {
            const double g = 0.66 * e.samples[i % n_bar] + 0.34;
            max_err = std::max(max_err, std::fabs(buf.left[i] - g * orig.left[i]));
            max_err = std::max(max_err, std::fabs(buf.right[i] - g * orig.right[i]));
        }
        CHECK(max_err < 1e-12);
    }
    SUBCASE("linearity in the input") {
        const StereoBuffer y1 = two_bar_noise(4);
        const StereoBuffer y2 = two_bar_noise(5);
        const double a = 0.7, b = -1.3;
        StereoBuffer combined(y1.frames(), 44100);
        for (std::size_t i = 0; i < y1.frames(); ++i) {
            combined.left[i] = a * y1.left[i] + b * y2.left[i];
            combined.right[i] = a * y1.right[i] + b * y2.right[i];
        }
        apply_sidechain(combined, e, 0.66);
        StereoBuffer s1 = y1, s2 = y2;
        apply_sidechain(s1, e, 0.66);
        apply_sidechain(s2, e, 0.66);
        double max_err = 0.0;
        for (std::size_t i = 0; i < y1.frames(); ++i) {
            max_err = std::max(max_err,
                               std::fabs(combined.left[i] - (a * s1.left[i] + b * s2.left[i])));
        }
        CHECK(max_err < 1e-12);
    }
}

TEST_CASE("butterworth filters hit their response bands") {
    SUBCASE("highpass rejects DC") {
        StereoBuffer dc(44100, 44100);
        for (std::size_t i = 0; i < dc.frames(); ++i) dc.left[i] = dc.right[i] = 1.0;
        apply_highpass(dc, 300.0);
        double tail_max = 0.0;
        for (std::size_t i = dc.frames() - 4410; i < dc.frames(); ++i) {
            tail_max = std::max(tail_max, std::fabs(dc.left[i]));
        }
        CHECK(tail_max < 1e-3);
    }
    SUBCASE("highpass is -3 dB at cutoff") {
        StereoBuffer sine = make_sine(300.0, 2.0, 44100);
        apply_highpass(sine, 300.0);
        const double out = testutil::rms(sine.left, sine.frames() / 2, sine.frames());
        const double gain_db = 20.0 * std::log10(out / (1.0 / std::sqrt(2.0)));
        CHECK(std::fabs(gain_db - (-3.0)) < 0.5);
    }
    SUBCASE("lowpass passband is flat") {
        StereoBuffer sine = make_sine(100.0, 2.0, 44100);
        apply_lowpass(sine, 1000.0);
        const double out = testutil::rms(sine.left, sine.frames() / 2, sine.frames());
        const double gain_db = 20.0 * std::log10(out / (1.0 / std::sqrt(2.0)));
        CHECK(std::fabs(gain_db) < 0.2);
    }
    SUBCASE("cutoff outside (0, Nyquist) throws") {
        StereoBuffer buf(64, 44100);
        CHECK_THROWS_AS(apply_highpass(buf, 0.0), UserError);
        CHECK_THROWS_AS(apply_highpass(buf, 22050.0), UserError);
        CHECK_THROWS_AS(apply_lowpass(buf, -5.0), UserError);
    }
    SUBCASE("bounded input stays bounded over a million samples") {
        StereoBuffer noise = make_noise(1000000, 44100, 77, 1.0);
        apply_highpass(noise, 300.0);
        apply_lowpass(noise, 5000.0);
        CHECK(noise.peak() < 100.0);
    }
}

TEST_CASE("reverb dry/wet contract") {
    SUBCASE("wet 0, dry 1 is the identity") {
        StereoBuffer buf = two_bar_noise(6);
        const StereoBuffer orig = buf;
        apply_reverb(buf, 1.0, 0.0);
        CHECK(max_abs_diff(buf, orig) < 1e-9);
    }
    SUBCASE("wet 0, dry 0.5 scales exactly") {
        StereoBuffer buf = two_bar_noise(7);
        const StereoBuffer orig = buf;
        apply_reverb(buf, 0.5, 0.0);
        double max_err = 0.0;
        for (std::size_t i = 0; i < buf.frames(); ++i) {
            max_err = std::max(max_err, std::fabs(buf.left[i] - 0.5 * orig.left[i]));
        }
        CHECK(max_err < 1e-12);
    }
    SUBCASE("impulse grows a finite tail past 100 ms") {
        StereoBuffer buf(44100, 44100);
        buf.left[0] = buf.right[0] = 1.0;
        apply_reverb(buf, 0.0, 1.0);
        double tail_energy = 0.0;
        for (std::size_t i = 4410; i < buf.frames(); ++i) tail_energy += buf.left[i] * buf.left[i];
        CHECK(tail_energy > 0.0);
        CHECK(std::isfinite(tail_energy));
        CHECK(buf.peak() < 10.0);
    }
    SUBCASE("levels outside [0,1] are rejected") {
        StereoBuffer buf(64, 44100);
        CHECK_THROWS_AS(apply_reverb(buf, 1.5, 0.0), UserError);
        CHECK_THROWS_AS(apply_reverb(buf, 0.5, -0.1), UserError);
    }
}

TEST_CASE("balance is a pure dB gain") {
    StereoBuffer buf = two_bar_noise(8);
    const StereoBuffer orig = buf;
    SUBCASE("0 dB is the identity") {
        apply_balance(buf, 0.0);
        CHECK(max_abs_diff(buf, orig) == 0.0);
    }
    SUBCASE("+6.0206 dB doubles") {
        apply_balance(buf, 6.0206);
        double max_err = 0.0;
        for (std::size_t i = 0; i < buf.frames(); ++i) {
            max_err = std::max(max_err, std::fabs(buf.left[i] - 2.0 * orig.left[i]));
        }
        CHECK(max_err < 1e-5);
    }
    SUBCASE("+1.5 dB is a 1.1885 factor") {
        apply_balance(buf, 1.5);
        CHECK(std::fabs(buf.left[100] / orig.left[100] - 1.1885) < 1e-4);
    }
}

TEST_CASE("limiter guarantees its ceiling") {
    SUBCASE("all-below-threshold input passes through") {
        StereoBuffer buf = make_sine(440.0, 0.5, 44100, 0.3);
        const StereoBuffer orig = buf;
        apply_limiter(buf, -6.0);
        CHECK(max_abs_diff(buf, orig) < 1e-9);
    }
    SUBCASE("full-scale sine at -6 dB threshold") {
        StereoBuffer buf = make_sine(440.0, 1.0, 44100, 1.0);
        apply_limiter(buf, -6.0);
        CHECK(buf.peak() <= 0.5012);
    }
    SUBCASE("zero input, zero output") {
        StereoBuffer buf(44100, 44100);
        apply_limiter(buf, -6.0);
        CHECK(buf.peak() == 0.0);
    }
    SUBCASE("random loud input never exceeds threshold + 1e-6") {
        StereoBuffer buf = make_noise(100000, 44100, 9, 2.0);
        apply_limiter(buf, -3.0);
        CHECK(buf.peak() <= db_to_gain(-3.0) + 1e-6);
    }
    SUBCASE("positive threshold rejected") {
        StereoBuffer buf(64, 44100);
        CHECK_THROWS_AS(apply_limiter(buf, 1.0), UserError);
    }
}

TEST_CASE("compressor reduces crest without exceeding unity gain") {
    StereoBuffer buf = make_sine(100.0, 1.0, 44100, 1.0);
    const StereoBuffer orig = buf;
    CompressorConfig cfg;
    cfg.thres_db = -12.0;
    cfg.ratio = 4.0;
    apply_compressor(buf, cfg);
    CHECK(buf.peak() < orig.peak());
    for (std::size_t i = 0; i < buf.frames(); ++i) {
        CHECK(std::fabs(buf.left[i]) <= std::fabs(orig.left[i]) + 1e-12);
    }
}

TEST_CASE("every effect is channel symmetric") {
    StereoBuffer base = two_bar_noise(10);
    for (std::size_t i = 0; i < base.frames(); ++i) base.right[i] *= 0.5;  // make L/R distinct

    const std::vector<EffectConfig> effects = {
        HighpassConfig{500.0},   LowpassConfig{3000.0}, SidechainConfig{0.5, 3, 0.66},
        ReverbConfig{0.5, 0.8},  BalanceConfig{1.5},    GainConfig{-2.0},
        LimiterConfig{-6.0},     CompressorConfig{},
    };
    for (const EffectConfig& cfg : effects) {
        CAPTURE(effect_tag(cfg));
        StereoBuffer direct = base;
        apply_effect(direct, cfg, kCtx);
        StereoBuffer swapped = base;
        swapped.swap_channels();
        apply_effect(swapped, cfg, kCtx);
        swapped.swap_channels();
        CHECK(max_abs_diff(direct, swapped) < 1e-12);
    }
}

TEST_CASE("apply_channel composes effects in order") {
    SUBCASE("empty chain is the identity") {
        StereoBuffer buf = two_bar_noise(11);
        const StereoBuffer orig = buf;
        apply_channel(buf, Channel{"thru", {}}, kCtx);
        CHECK(max_abs_diff(buf, orig) == 0.0);
    }
    SUBCASE("inverse gains cancel") {
        StereoBuffer buf = two_bar_noise(12);
        const StereoBuffer orig = buf;
        apply_channel(buf, Channel{"pair", {BalanceConfig{6.0206}, BalanceConfig{-6.0206}}}, kCtx);
        CHECK(max_abs_diff(buf, orig) < 1e-9);
    }
    SUBCASE("the reference lead chain equals manual sequential application") {
        StereoBuffer buf = make_sine(440.0, 2.0, 44100, 0.9);
        StereoBuffer manual = buf;

        const Channel lead{"lead",
                           {HighpassConfig{300.0}, SidechainConfig{0.5, 3, 0.66}, ReverbConfig{0.5, 0.8},
                            BalanceConfig{1.5}, LimiterConfig{-6.0}}};
        apply_channel(buf, lead, kCtx);

        apply_highpass(manual, 300.0);
        apply_sidechain(manual, sidechain_envelope(kCtx, 0.5, 3), 0.66);
        apply_reverb(manual, 0.5, 0.8);
        apply_balance(manual, 1.5);
        apply_limiter(manual, -6.0);

        CHECK(max_abs_diff(buf, manual) == 0.0);
    }
    SUBCASE("errors carry the channel name") {
        StereoBuffer buf(64, 44100);
        try {
            apply_channel(buf, Channel{"broken", {HighpassConfig{-1.0}}}, kCtx);
            FAIL("expected UserError");
        } catch (const UserError& e) {
            CHECK(std::string(e.what()).find("broken") != std::string::npos);
        }
    }
}

TEST_CASE("effect config parsing mirrors the channel sheet vocabulary") {
    const auto sidechain = effect_from_json(
        nlohmann::json{{"type", "sidechain"}, {"attain", 0.5}, {"interp_order", 3}, {"mag", 0.66}});
    const auto* sc = std::get_if<SidechainConfig>(&sidechain);
    REQUIRE(sc != nullptr);
    CHECK(sc->attain == 0.5);
    CHECK(sc->interp_order == 3);
    CHECK(sc->mag == 0.66);

    CHECK_THROWS_AS(effect_from_json(nlohmann::json{{"type", "flanger"}}), UserError);
    CHECK_THROWS_AS(effect_from_json(nlohmann::json{{"type", "highpass"}}), UserError);  // no freq
    CHECK_THROWS_AS(effect_from_json(nlohmann::json{{"type", "limiter"}, {"thres", 3.0}}), UserError);
    CHECK_THROWS_AS(effect_from_json(nlohmann::json{{"type", "reverb"}, {"dry_level", 2.0}}), UserError);

    // round-trip through JSON preserves the tag and parameters
    for (const EffectConfig& cfg :
         {EffectConfig(HighpassConfig{300.0}), EffectConfig(SidechainConfig{0.5, 3, 0.66}),
          EffectConfig(ReverbConfig{0.5, 0.8}), EffectConfig(BalanceConfig{1.5}),
          EffectConfig(GainConfig{-4.0}), EffectConfig(LimiterConfig{-6.0}),
          EffectConfig(LowpassConfig{2000.0}), EffectConfig(CompressorConfig{-18.0, 3.0, 10.0, 80.0})}) {
        const EffectConfig back = effect_from_json(effect_to_json(cfg));
        CHECK(effect_to_json(back) == effect_to_json(cfg));
    }
}
