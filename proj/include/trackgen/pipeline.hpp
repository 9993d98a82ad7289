#pragma once

#include <filesystem>
#include <optional>
#include <set>

#include "trackgen/loudness.hpp"
#include "trackgen/serialize.hpp"
#include "trackgen/sheets.hpp"
#include "trackgen/symbolic_gen.hpp"
#include "trackgen/wav.hpp"

namespace trackgen {

/// The two JSON sheets of a style directory.
struct Style {
    SoundSheet sound;
    ChannelSheet channel;
};

/// Reads <style_dir>/sound_sheet.json and channel_sheet.json, with optional
/// RFC 7386 overlay patches applied to each.
Style load_style(const std::filesystem::path& style_dir,
                 const std::optional<std::filesystem::path>& sound_patch = std::nullopt,
                 const std::optional<std::filesystem::path>& channel_patch = std::nullopt);

struct RenderOptions {
    bool stems = false;
    WavDepth depth = WavDepth::Float32;
    std::uint64_t seed = 0;  // style instantiation seed (fx pool draws)
};

struct RenderOutcome {
    std::filesystem::path wav_path;
    std::filesystem::path annotation_path;
    std::map<std::string, std::filesystem::path> stem_paths;
    LoudnessReport loudness;
    std::vector<std::string> warnings;
};

/// Renders a score or track document against a style directory, writing the
/// master WAV, the annotation JSON (full track serialization) and optionally
/// per-part stems under <out>.stems/.
RenderOutcome render_command(const std::filesystem::path& input_json,
                             const std::filesystem::path& style_dir,
                             const std::filesystem::path& out_wav, const RenderOptions& options);

/// Knobs of the batch/score generator; defaults follow the reference
/// template (128 BPM progressive house, 4-bar cores, 16-bar tracks).
struct GenParams {
    std::vector<Rational> values = {{1, 16}, {1, 8}, {3, 16}, {1, 4}};
    Rational resolution = Rational(1, 16);
    double lambda = 1.0;
    int core_bars = 4;
    int rep_bar = 2;
    int length_bars = 16;
    double bpm = 128.0;
    int sample_rate = 44100;
    std::vector<int> progression;  // empty -> mode default
    Rational bars_per_chord = Rational(1);
    std::set<int> omit_degrees = {4};
    int lead_octave = 4;
    int chord_octave = 3;
    int bass_octave = 1;
};

/// Rule-based score generation: rhythm placeholders filled with scale
/// pitches for the lead, block triads for the chords, and an eighth-note
/// root pulse for the bass. Deterministic per (key, mode, params, seed).
Score generate_score(const std::string& key, Mode mode, const GenParams& params, std::uint64_t seed);

struct BatchItem {
    int index = 0;
    std::uint64_t seed = 0;
    std::filesystem::path wav_path;
    std::filesystem::path annotation_path;
    std::optional<double> integrated_lufs;
};

struct BatchOutcome {
    std::filesystem::path manifest_path;
    std::vector<BatchItem> items;
};

/// Renders `count` tracks (track i seeded with seed + i) plus a manifest
/// listing every (audio, annotation) pair and the generation parameters.
BatchOutcome batch_command(const std::filesystem::path& style_dir, const std::string& key, Mode mode,
                           int count, std::uint64_t seed, const std::filesystem::path& out_dir,
                           const GenParams& params, WavDepth depth);

/// Loudness of a WAV file, optionally restricted to [start_bar, end_bar)
/// at the given tempo.
LoudnessReport analyze_command(const std::filesystem::path& wav_path, std::optional<int> start_bar,
                               std::optional<int> end_bar, double bpm);

nlohmann::json gen_params_to_json(const GenParams& params);

/// Inverse of gen_params_to_json; unknown keys are ignored, present keys
/// override the passed-in defaults (so --config files can be partial).
GenParams gen_params_from_json(const nlohmann::json& j, GenParams defaults = {});

}  // namespace trackgen
