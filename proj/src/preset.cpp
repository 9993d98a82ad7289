#include "trackgen/preset.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "trackgen/effects.hpp"
#include "trackgen/wav.hpp"

namespace trackgen {

namespace {

std::optional<int> pitch_from_filename(const std::string& stem) {
    if (stem.empty()) return std::nullopt;
    if (std::isdigit(static_cast<unsigned char>(stem[0]))) {
        try {
            std::size_t used = 0;
            const int midi = std::stoi(stem, &used);
            if (used == stem.size() && midi >= kMidiMin && midi <= kMidiMax) return midi;
        } catch (const std::exception&) {
        }
        return std::nullopt;
    }
    try {
        return Pitch::from_name(stem).midi();
    } catch (const UserError&) {
        return std::nullopt;
    }
}

StereoBuffer resample_linear(const StereoBuffer& in, int target_rate) {
    const double ratio = static_cast<double>(target_rate) / in.sample_rate;
    const auto out_frames = static_cast<std::size_t>(std::floor((in.frames() - 1) * ratio)) + 1;
    StereoBuffer out(out_frames, target_rate);
    for (std::size_t i = 0; i < out_frames; ++i) {
        const double pos = static_cast<double>(i) / ratio;
        const auto i0 = static_cast<std::size_t>(pos);
        const std::size_t i1 = std::min(i0 + 1, in.frames() - 1);
        const double frac = pos - static_cast<double>(i0);
        out.left[i] = in.left[i0] + frac * (in.left[i1] - in.left[i0]);
        out.right[i] = in.right[i0] + frac * (in.right[i1] - in.right[i0]);
    }
    return out;
}

void apply_edge_fades(StereoBuffer& buf, double fade_in_s, double fade_out_s) {
    const auto n = buf.frames();
    const auto in_len = std::min<std::size_t>(static_cast<std::size_t>(fade_in_s * buf.sample_rate), n);
    const auto out_len = std::min<std::size_t>(static_cast<std::size_t>(fade_out_s * buf.sample_rate), n);
    for (std::size_t i = 0; i < in_len; ++i) {
        const double g = static_cast<double>(i) / static_cast<double>(in_len);
        buf.left[i] *= g;
        buf.right[i] *= g;
    }
    for (std::size_t i = 0; i < out_len; ++i) {
        const double g = static_cast<double>(i) / static_cast<double>(out_len);
        buf.left[n - 1 - i] *= g;
        buf.right[n - 1 - i] *= g;
    }
}

double poly_blep(double t, double dt) {
    if (t < dt) {
        const double x = t / dt;
        return x + x - x * x - 1.0;
    }
    if (t > 1.0 - dt) {
        const double x = (t - 1.0) / dt;
        return x * x + x + x + 1.0;
    }
    return 0.0;
}

void add_saw_voice(StereoBuffer& buf, double freq, double phase0, double gain_l, double gain_r) {
    const double dt = freq / buf.sample_rate;
    double phase = phase0;
    for (std::size_t i = 0; i < buf.frames(); ++i) {
        const double naive = 2.0 * phase - 1.0;
        const double v = naive - poly_blep(phase, dt);
        buf.left[i] += gain_l * v;
        buf.right[i] += gain_r * v;
        phase += dt;
        if (phase >= 1.0) phase -= 1.0;
    }
}

}  // namespace

Preset load_preset(const std::filesystem::path& directory, const std::string& id, double gain_db,
                   const TimeContext& ctx, bool resample_fallback) {
    std::error_code ec;
    if (!std::filesystem::is_directory(directory, ec)) {
        throw UserError("preset directory '" + directory.string() + "' is not readable");
    }

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".wav") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    Preset preset;
    preset.id = id;
    preset.gain_db = gain_db;
    preset.sample_rate = ctx.sample_rate;
    for (const auto& file : files) {
        const auto midi = pitch_from_filename(file.stem().string());
        if (!midi) continue;
        StereoBuffer audio = read_wav(file);
        if (audio.sample_rate != ctx.sample_rate) {
            if (!resample_fallback) {
                throw UserError("preset file '" + file.string() + "' is at " +
                                std::to_string(audio.sample_rate) + " Hz, expected " +
                                std::to_string(ctx.sample_rate) +
                                " Hz (enable resampling to accept)");
            }
            audio = resample_linear(audio, ctx.sample_rate);
        }
        preset.pitches[*midi] = std::move(audio);
    }
    if (preset.pitches.empty()) {
        throw UserError("preset directory '" + directory.string() + "' contains no usable pitch files");
    }
    return preset;
}

SynthKind synth_kind_from_string(const std::string& s) {
    if (s == "sine") return SynthKind::Sine;
    if (s == "saw") return SynthKind::Saw;
    if (s == "supersaw") return SynthKind::Supersaw;
    throw UserError("unknown synth preset kind '" + s + "' (expected sine, saw or supersaw)");
}

Preset synth_preset(SynthKind kind, const TimeContext& ctx, double duration_s,
                    const std::string& id, double gain_db) {
    ctx.validate();
    if (!(duration_s > 0.0)) throw UserError("synth preset duration must be positive");

    Preset preset;
    preset.id = id;
    preset.gain_db = gain_db;
    preset.sample_rate = ctx.sample_rate;

    const auto frames = static_cast<std::size_t>(duration_s * ctx.sample_rate);
    // Detune in cents and equal-power pan positions for the supersaw stack.
    constexpr std::array<double, 7> kDetuneCents = {-12.0, -8.0, -4.0, 0.0, 4.0, 8.0, 12.0};
    constexpr std::array<double, 7> kPan = {-1.0, 1.0 / 3, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 3, 1.0};

    for (int midi = kMidiMin; midi <= kMidiMax; ++midi) {
        const double freq = Pitch(midi).frequency();
        StereoBuffer buf(frames, ctx.sample_rate);
        switch (kind) {
            case SynthKind::Sine: {
                const double w = 2.0 * std::numbers::pi * freq / ctx.sample_rate;
                for (std::size_t i = 0; i < frames; ++i) {
                    const double v = std::sin(w * static_cast<double>(i));
                    buf.left[i] = v;
                    buf.right[i] = v;
                }
                break;
            }
            case SynthKind::Saw:
                add_saw_voice(buf, freq, 0.0, 1.0, 1.0);
                break;
            case SynthKind::Supersaw: {
                for (std::size_t v = 0; v < kDetuneCents.size(); ++v) {
                    const double detuned = freq * std::pow(2.0, kDetuneCents[v] / 1200.0);
                    // golden-ratio phase offsets decorrelate the voices
                    const double phase = std::fmod(0.6180339887498949 * static_cast<double>(v + 1), 1.0);
                    const double theta = (kPan[v] + 1.0) * std::numbers::pi / 4.0;
                    add_saw_voice(buf, detuned, phase, std::cos(theta), std::sin(theta));
                }
                buf.scale(1.0 / std::sqrt(static_cast<double>(kDetuneCents.size())));
                break;
            }
        }
        // Normalize each pitch to a common peak, like a mastered sample bank.
        const double peak = buf.peak();
        if (peak > 0.0) buf.scale(0.9 / peak);
        apply_edge_fades(buf, 0.010, 0.020);
        preset.pitches[midi] = std::move(buf);
    }
    return preset;
}

NoteRender render_note(const Preset& preset, const Note& note, const TimeContext& ctx) {
    const int midi = note.pitch.midi();
    const auto it = preset.pitches.find(midi);
    if (it == preset.pitches.end()) {
        throw UserError("preset '" + preset.id + "' has no sample for pitch " + note.pitch.name());
    }
    const StereoBuffer& source = it->second;

    const std::int64_t value_frames = bar_to_sample_index(note.value, ctx);
    const auto release = static_cast<std::int64_t>(0.010 * ctx.sample_rate);
    // Silence-padded gate, capped so the render never outlives source + release.
    const std::int64_t out_frames =
        std::min(value_frames + release, static_cast<std::int64_t>(source.frames()) + release);

    NoteRender render;
    render.offset = bar_to_sample_index(note.start, ctx);
    render.audio = StereoBuffer(static_cast<std::size_t>(out_frames), ctx.sample_rate);

    const double gain = db_to_gain(preset.gain_db);
    const std::int64_t copy = std::min(out_frames, static_cast<std::int64_t>(source.frames()));
    for (std::int64_t i = 0; i < copy; ++i) {
        render.audio.left[static_cast<std::size_t>(i)] = gain * source.left[static_cast<std::size_t>(i)];
        render.audio.right[static_cast<std::size_t>(i)] = gain * source.right[static_cast<std::size_t>(i)];
    }
    // Release fade from the gate point down to exactly zero.
    if (release > 0) {
        for (std::int64_t k = 0; k < release; ++k) {
            const std::int64_t i = value_frames + k;
            if (i < 0 || i >= out_frames) break;
            const double g = 1.0 - static_cast<double>(k + 1) / static_cast<double>(release);
            render.audio.left[static_cast<std::size_t>(i)] *= g;
            render.audio.right[static_cast<std::size_t>(i)] *= g;
        }
    }
    return render;
}

}  // namespace trackgen
