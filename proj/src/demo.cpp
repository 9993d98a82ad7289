#include "trackgen/demo.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "trackgen/effects.hpp"
#include "trackgen/rng.hpp"
#include "trackgen/serialize.hpp"
#include "trackgen/symbolic_gen.hpp"
#include "trackgen/wav.hpp"

namespace trackgen {

namespace {

constexpr int kRate = 44100;
constexpr double kBpm = 128.0;

StereoBuffer mono_to_stereo(std::vector<double> samples) {
    StereoBuffer buf(samples.size(), kRate);
    buf.left = samples;
    buf.right = std::move(samples);
    return buf;
}

void normalize_peak(StereoBuffer& buf, double target) {
    const double p = buf.peak();
    if (p > 0.0) buf.scale(target / p);
}

std::vector<double> exp_noise_burst(Rng& rng, std::size_t frames, double tau_s) {
    std::vector<double> out(frames);
    for (std::size_t i = 0; i < frames; ++i) {
        const double t = static_cast<double>(i) / kRate;
        out[i] = (2.0 * rng.next_double() - 1.0) * std::exp(-t / tau_s);
    }
    return out;
}

StereoBuffer make_kick_hit() {
    const auto frames = static_cast<std::size_t>(0.45 * kRate);
    std::vector<double> mono(frames, 0.0);
    double phase = 0.0;
    for (std::size_t i = 0; i < frames; ++i) {
        const double t = static_cast<double>(i) / kRate;
        const double freq = 45.0 + 115.0 * std::exp(-t / 0.045);
        phase += 2.0 * std::numbers::pi * freq / kRate;
        const double body = std::sin(phase) * std::exp(-t / 0.16);
        const double click = 0.35 * std::sin(2.0 * std::numbers::pi * 1350.0 * t) * std::exp(-t / 0.004);
        mono[i] = body + click;
    }
    StereoBuffer buf = mono_to_stereo(std::move(mono));
    normalize_peak(buf, 0.95);
    return buf;
}

StereoBuffer make_clap_hit(std::uint64_t seed, double center_freq) {
    Rng rng(seed);
    const auto frames = static_cast<std::size_t>(0.35 * kRate);
    std::vector<double> mono(frames, 0.0);
    for (double onset_ms : {0.0, 11.0, 23.0}) {
        const auto at = static_cast<std::size_t>(onset_ms * 0.001 * kRate);
        const auto burst = exp_noise_burst(rng, frames - at, onset_ms == 23.0 ? 0.07 : 0.012);
        for (std::size_t i = 0; i < burst.size(); ++i) mono[at + i] += burst[i];
    }
    StereoBuffer buf = mono_to_stereo(std::move(mono));
    apply_highpass(buf, 600.0);
    apply_lowpass(buf, center_freq);
    normalize_peak(buf, 0.9);
    return buf;
}

StereoBuffer make_hat_hit(std::uint64_t seed) {
    Rng rng(seed);
    StereoBuffer buf = mono_to_stereo(exp_noise_burst(rng, static_cast<std::size_t>(0.07 * kRate), 0.018));
    apply_highpass(buf, 7000.0);
    normalize_peak(buf, 0.85);
    return buf;
}

/// One bar with copies of `hit` at the given beat offsets (fractions of a bar).
StereoBuffer make_loop(const StereoBuffer& hit, const std::vector<double>& positions_bars) {
    const TimeContext ctx{kBpm, kRate, 4};
    StereoBuffer loop(static_cast<std::size_t>(ctx.samples_per_bar()), kRate);
    for (double pos : positions_bars) {
        const auto offset = static_cast<std::int64_t>(
            std::floor(pos * 4.0 * 60.0 * kRate / kBpm));
        loop.add(hit, offset);
    }
    return loop;
}

StereoBuffer make_fill(std::uint64_t seed, double tone_freq) {
    const TimeContext ctx{kBpm, kRate, 4};
    const auto bar = static_cast<std::size_t>(ctx.samples_per_bar());
    Rng rng(seed);
    StereoBuffer buf(bar, kRate);
    // 16th-note roll that ramps into the next bar.
    for (int j = 0; j < 16; ++j) {
        const auto at = static_cast<std::size_t>(std::floor(j / 16.0 * static_cast<double>(bar)));
        const double amp = 0.15 + 0.85 * (j + 1) / 16.0;
        const auto burst = exp_noise_burst(rng, static_cast<std::size_t>(0.05 * kRate), 0.01);
        for (std::size_t i = 0; i < burst.size() && at + i < bar; ++i) {
            buf.left[at + i] += amp * burst[i];
            buf.right[at + i] += amp * burst[i];
        }
    }
    apply_highpass(buf, tone_freq);
    normalize_peak(buf, 0.8);
    return buf;
}

StereoBuffer make_downlifter(double start_freq) {
    const auto frames = static_cast<std::size_t>(3.75 * kRate);  // two bars at 128 BPM
    std::vector<double> mono(frames, 0.0);
    double phase = 0.0;
    for (std::size_t i = 0; i < frames; ++i) {
        const double t = static_cast<double>(i) / kRate;
        const double k = t / 3.75;
        const double freq = start_freq * std::pow(70.0 / start_freq, k);
        phase += 2.0 * std::numbers::pi * freq / kRate;
        const double fade = std::min(1.0, 10.0 * std::min(k, 1.0 - k));
        mono[i] = fade * (0.8 * std::sin(phase) + 0.2 * std::sin(2.0 * phase));
    }
    StereoBuffer buf = mono_to_stereo(std::move(mono));
    normalize_peak(buf, 0.7);
    return buf;
}

Score make_demo_score() {
    Score score;
    score.key = "A";
    score.mode = "minor";
    score.length_bars = 8;

    const Pitch chord_root = Pitch::from_name("A3");
    const Pitch bass_root = Pitch::from_name("A1");
    const std::vector<int> progression = {1, 6, 3, 7};  // Am F C G

    ScorePart chords;
    chords.core_length_bars = 4;
    chords.notes = chords_to_notes(progression, chord_root, Mode::Minor, Rational(1), 4);
    {
        // octave doublings of root and fifth fatten the pad
        const std::vector<Note> triads = chords.notes;
        for (std::size_t i = 0; i < triads.size(); i += 3) {
            chords.notes.push_back({Pitch(triads[i].pitch.midi() + 12), triads[i].value, triads[i].start, ""});
            chords.notes.push_back(
                {Pitch(triads[i + 2].pitch.midi() + 12), triads[i + 2].value, triads[i + 2].start, ""});
        }
    }

    ScorePart bass;
    bass.core_length_bars = 4;
    const std::array<int, 7> minor = {0, 2, 3, 5, 7, 8, 10};
    for (int bar = 0; bar < 4; ++bar) {
        const Pitch root(bass_root.midi() + minor[static_cast<std::size_t>(progression[bar] - 1)]);
        for (int k = 0; k < 8; ++k) {
            bass.notes.push_back({root, Rational(1, 8), Rational(bar) + Rational(k, 8), ""});
            bass.notes.push_back(
                {Pitch(root.midi() + 12), Rational(1, 8), Rational(bar) + Rational(k, 8), ""});
        }
    }

    ScorePart lead;
    lead.core_length_bars = 4;
    struct Step {
        const char* pitch;
        int num, den;       // start within the bar
        int vnum, vden;     // value
    };
    const std::array<std::vector<Step>, 4> bars = {{
        {{"A4", 0, 8, 1, 8}, {"C5", 1, 8, 1, 8}, {"E5", 2, 8, 1, 8}, {"A5", 3, 8, 1, 8},
         {"G5", 4, 8, 1, 4}, {"E5", 6, 8, 1, 4}},
        {{"A4", 0, 8, 1, 8}, {"C5", 1, 8, 1, 8}, {"F5", 2, 8, 1, 8}, {"A5", 3, 8, 1, 8},
         {"G5", 4, 8, 1, 4}, {"C5", 6, 8, 1, 4}},
        {{"G4", 0, 8, 1, 8}, {"C5", 1, 8, 1, 8}, {"E5", 2, 8, 1, 8}, {"G5", 3, 8, 1, 8},
         {"E5", 4, 8, 1, 4}, {"D5", 6, 8, 1, 4}},
        {{"G4", 0, 8, 1, 8}, {"B4", 1, 8, 1, 8}, {"D5", 2, 8, 1, 8}, {"G5", 3, 8, 1, 8},
         {"A5", 4, 8, 1, 4}, {"B5", 6, 8, 1, 8}, {"E5", 7, 8, 1, 8}},
    }};
    for (int bar = 0; bar < 4; ++bar) {
        for (const Step& s : bars[static_cast<std::size_t>(bar)]) {
            lead.notes.push_back({Pitch::from_name(s.pitch), Rational(s.vnum, s.vden),
                                  Rational(bar) + Rational(s.num, s.den), ""});
        }
    }

    score.parts.emplace("chords", std::move(chords));
    score.parts.emplace("bass", std::move(bass));
    score.parts.emplace("lead", std::move(lead));
    return score;
}

nlohmann::json make_sound_sheet() {
    return nlohmann::json{
        {"kick", {{{"source_path", "assets/kick_loop.wav"}, {"gain", -5.0}, {"blank_every", 8}}}},
        {"clap", {{{"source_path", "assets/clap_loop.wav"}, {"gain", -7.0}}}},
        {"hat", {{{"source_path", "assets/hat_loop.wav"}, {"gain", -12.0}}}},
        {"fx",
         {{{"type", "main-fill"}, {"dir", "assets/fills"}, {"highpass", 250.0}, {"gain", -14.0}, {"every", 8}},
          {{"type", "downlifter"},
           {"dir", "assets/downlifters"},
           {"highpass", 200.0},
           {"gain", -16.0},
           {"every", 8}}}},
        {"lead", {{{"preset", "supersaw"}, {"gain", -3.0}}}},
        {"chords", {{{"preset", "supersaw"}, {"gain", 1.0}}}},
        {"bass", {{{"preset", "saw"}, {"gain", 3.0}}}},
    };
}

nlohmann::json make_channel_sheet() {
    return nlohmann::json{
        {"lead",
         {{{"type", "highpass"}, {"freq", 300.0}},
          {{"type", "sidechain"}, {"attain", 0.5}, {"interp_order", 3}, {"mag", 0.66}},
          {{"type", "reverb"}, {"dry_level", 0.5}, {"wet_level", 0.8}},
          {{"type", "balance"}, {"gain", 1.5}},
          {{"type", "limiter"}, {"thres", -6.0}}}},
        {"chords",
         {{{"type", "highpass"}, {"freq", 250.0}},
          {{"type", "sidechain"}, {"attain", 0.5}, {"interp_order", 3}, {"mag", 0.8}},
          {{"type", "reverb"}, {"dry_level", 0.7}, {"wet_level", 0.4}},
          {{"type", "limiter"}, {"thres", -7.5}}}},
        {"bass",
         {{{"type", "lowpass"}, {"freq", 2500.0}},
          {{"type", "sidechain"}, {"attain", 0.5}, {"interp_order", 2}, {"mag", 0.9}},
          {{"type", "limiter"}, {"thres", -7.5}}}},
        {"kick", {{{"type", "limiter"}, {"thres", -6.0}}}},
        {"clap", {{{"type", "highpass"}, {"freq", 400.0}}, {{"type", "limiter"}, {"thres", -12.0}}}},
        {"hat", {{{"type", "highpass"}, {"freq", 4000.0}}, {{"type", "limiter"}, {"thres", -16.0}}}},
        {"fx",
         {{{"type", "sidechain"}, {"attain", 0.5}, {"interp_order", 2}, {"mag", 0.5}},
          {{"type", "limiter"}, {"thres", -12.0}}}},
    };
}

}  // namespace

void write_demo_style(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir / "assets" / "fills");
    std::filesystem::create_directories(dir / "assets" / "downlifters");

    const StereoBuffer kick = make_kick_hit();
    write_wav(make_loop(kick, {0.0, 0.25, 0.5, 0.75}), dir / "assets/kick_loop.wav", WavDepth::Pcm16);
    write_wav(make_loop(make_clap_hit(101, 6500.0), {0.25, 0.75}), dir / "assets/clap_loop.wav",
              WavDepth::Pcm16);
    write_wav(make_loop(make_hat_hit(202), {0.125, 0.375, 0.625, 0.875}), dir / "assets/hat_loop.wav",
              WavDepth::Pcm16);

    const std::array<double, 4> fill_tones = {900.0, 1300.0, 1800.0, 2500.0};
    for (std::size_t i = 0; i < fill_tones.size(); ++i) {
        write_wav(make_fill(300 + i, fill_tones[i]),
                  dir / "assets/fills" / ("fill_" + std::string(1, static_cast<char>('a' + i)) + ".wav"),
                  WavDepth::Pcm16);
    }
    write_wav(make_downlifter(900.0), dir / "assets/downlifters/down_a.wav", WavDepth::Pcm16);
    write_wav(make_downlifter(650.0), dir / "assets/downlifters/down_b.wav", WavDepth::Pcm16);

    save_json_file(make_sound_sheet(), dir / "sound_sheet.json");
    save_json_file(make_channel_sheet(), dir / "channel_sheet.json");
    save_json_file(score_to_json(make_demo_score()), dir / "score.json");
}

}  // namespace trackgen
