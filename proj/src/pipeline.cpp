#include "trackgen/pipeline.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <sstream>

#include "trackgen/render.hpp"
#include "trackgen/rng.hpp"

namespace trackgen {

namespace {

constexpr std::uint64_t kSaltLeadRhythm = 1;
constexpr std::uint64_t kSaltLeadPitch = 2;
constexpr std::uint64_t kSaltScore = 11;

Pitch key_pitch(const std::string& key, int octave) {
    try {
        return Pitch::from_name(key + std::to_string(octave));
    } catch (const UserError&) {
        throw UserError("invalid key name '" + key + "'");
    }
}

nlohmann::json load_optional_patch(const std::optional<std::filesystem::path>& patch) {
    if (!patch) return nullptr;
    return load_json_file(*patch);
}

RenderOutcome render_prepared(Track& track, const PresetRegistry& presets,
                              const std::filesystem::path& out_wav, const RenderOptions& options,
                              std::vector<std::string> warnings) {
    const RenderResult result = render_track(track, presets);

    RenderOutcome outcome;
    outcome.warnings = std::move(warnings);
    if (options.depth != WavDepth::Float32 && result.master.peak() > 1.0) {
        outcome.warnings.push_back("master peaks above full scale; integer export will clip (use 32f)");
    }
    outcome.wav_path = out_wav;
    write_wav(result.master, out_wav, options.depth);

    outcome.annotation_path = out_wav;
    outcome.annotation_path.replace_extension(".json");
    save_json_file(track_to_json(track), outcome.annotation_path);

    if (options.stems) {
        std::filesystem::path stem_dir = out_wav;
        stem_dir.replace_extension(".stems");
        std::filesystem::create_directories(stem_dir);
        for (const auto& [part, stem] : result.stems) {
            const std::filesystem::path path = stem_dir / (part + ".wav");
            write_wav(stem, path, options.depth);
            outcome.stem_paths.emplace(part, path);
        }
    }

    outcome.loudness = measure_loudness(result.master);
    return outcome;
}

std::vector<int> default_progression(Mode mode) {
    return mode == Mode::Major ? std::vector<int>{6, 4, 1, 5} : std::vector<int>{1, 6, 3, 7};
}

}  // namespace

Style load_style(const std::filesystem::path& style_dir,
                 const std::optional<std::filesystem::path>& sound_patch,
                 const std::optional<std::filesystem::path>& channel_patch) {
    std::error_code ec;
    if (!std::filesystem::is_directory(style_dir, ec)) {
        throw UserError("style directory '" + style_dir.string() + "' does not exist");
    }
    nlohmann::json sound = load_json_file(style_dir / "sound_sheet.json");
    nlohmann::json channel = load_json_file(style_dir / "channel_sheet.json");
    if (const auto patch = load_optional_patch(sound_patch); !patch.is_null()) {
        sound = apply_style_patch(std::move(sound), patch);
    }
    if (const auto patch = load_optional_patch(channel_patch); !patch.is_null()) {
        channel = apply_style_patch(std::move(channel), patch);
    }
    return Style{sound_sheet_from_json(sound), channel_sheet_from_json(channel)};
}

RenderOutcome render_command(const std::filesystem::path& input_json,
                             const std::filesystem::path& style_dir,
                             const std::filesystem::path& out_wav, const RenderOptions& options) {
    const nlohmann::json input = load_json_file(input_json);
    const std::string format = input.value("format", "");
    const Style style = load_style(style_dir);

    if (format == "trackgen-score") {
        const Score score = score_from_json(input);
        TimeContext ctx;  // the template tempo; tracks carry their own copy
        StyleInstance instance =
            instantiate_style(style.sound, style.channel, style_dir, ctx, score.length_bars, options.seed);
        merge_score(instance.track, score);
        for (const auto& [part, _] : score.parts) {
            ensure_part_routed(instance.track, part, &instance.warnings);
        }
        return render_prepared(instance.track, instance.presets, out_wav, options,
                               std::move(instance.warnings));
    }
    if (format == "trackgen-track") {
        Track track = track_from_json(input, style_dir);
        const PresetRegistry presets = build_presets(style.sound, style_dir, track.ctx);
        return render_prepared(track, presets, out_wav, options, {});
    }
    throw UserError("'" + input_json.string() + "' is neither a score nor a track document");
}

Score generate_score(const std::string& key, Mode mode, const GenParams& params, std::uint64_t seed) {
    if (params.length_bars < 1) throw UserError("length_bars must be >= 1");
    if (params.core_bars < 1) throw UserError("core_bars must be >= 1");

    Score score;
    score.key = key;
    score.mode = mode_to_string(mode);
    score.length_bars = params.length_bars;

    const std::vector<int> progression =
        params.progression.empty() ? default_progression(mode) : params.progression;

    // Lead: Poisson-gapped rhythm filled with scale pitches.
    RhythmParams rhythm;
    rhythm.values = params.values;
    rhythm.resolution = params.resolution;
    rhythm.lambda = params.lambda;
    rhythm.bars = params.core_bars;
    rhythm.rep_bar = params.rep_bar;
    const std::vector<Placeholder> placeholders =
        generate_rhythm(rhythm, derive_seed(seed, kSaltLeadRhythm));

    PitchParams pitch_params;
    pitch_params.pitches =
        scale_pitches(key_pitch(key, params.lead_octave), mode, 1, params.omit_degrees);
    ScorePart lead;
    lead.core_length_bars = params.core_bars;
    lead.notes = fill_pitches(placeholders, pitch_params, derive_seed(seed, kSaltLeadPitch));

    // Chords: block triads over the progression.
    ScorePart chords;
    chords.core_length_bars = params.core_bars;
    chords.notes = chords_to_notes(progression, key_pitch(key, params.chord_octave), mode,
                                   params.bars_per_chord, params.core_bars);

    // Bass: straight eighth-note pulse on each chord's root.
    constexpr std::array<int, 7> kMajor = {0, 2, 4, 5, 7, 9, 11};
    constexpr std::array<int, 7> kMinor = {0, 2, 3, 5, 7, 8, 10};
    const auto& intervals = mode == Mode::Major ? kMajor : kMinor;
    ScorePart bass;
    bass.core_length_bars = params.core_bars;
    const Pitch bass_root = key_pitch(key, params.bass_octave);
    Rational at(0);
    std::size_t chord_index = 0;
    const Rational total(params.core_bars);
    while (at < total) {
        const Rational segment_end = std::min(at + params.bars_per_chord, total);
        const int degree = progression[chord_index % progression.size()];
        const Pitch root(bass_root.midi() + intervals[static_cast<std::size_t>(degree - 1)]);
        Rational t = at;
        while (t < segment_end) {
            const Rational value = std::min(Rational(1, 8), segment_end - t);
            bass.notes.push_back({root, value, t, ""});
            t += value;
        }
        at = segment_end;
        ++chord_index;
    }

    score.parts.emplace("lead", std::move(lead));
    score.parts.emplace("chords", std::move(chords));
    score.parts.emplace("bass", std::move(bass));
    return score;
}

BatchOutcome batch_command(const std::filesystem::path& style_dir, const std::string& key, Mode mode,
                           int count, std::uint64_t seed, const std::filesystem::path& out_dir,
                           const GenParams& params, WavDepth depth) {
    if (count < 1) throw UserError("batch count must be >= 1");
    const Style style = load_style(style_dir);
    std::filesystem::create_directories(out_dir);

    const TimeContext ctx{params.bpm, params.sample_rate, 4};
    const PresetRegistry shared_presets = build_presets(style.sound, style_dir, ctx);
    BatchOutcome outcome;
    nlohmann::json manifest;
    manifest["format"] = "trackgen-manifest";
    manifest["version"] = 1;
    manifest["style"] = style_dir.generic_string();
    manifest["key"] = key;
    manifest["mode"] = mode_to_string(mode);
    manifest["count"] = count;
    manifest["seed"] = seed;
    manifest["params"] = gen_params_to_json(params);
    auto& items = manifest["items"] = nlohmann::json::array();

    for (int i = 0; i < count; ++i) {
        const std::uint64_t track_seed = seed + static_cast<std::uint64_t>(i);
        std::ostringstream name;
        name << "track_" << std::setw(4) << std::setfill('0') << i;
        try {
            const Score score = generate_score(key, mode, params, derive_seed(track_seed, kSaltScore));
            StyleInstance instance = instantiate_style(style.sound, style.channel, style_dir, ctx,
                                                       params.length_bars, track_seed, &shared_presets);
            merge_score(instance.track, score);
            for (const auto& [part, _] : score.parts) {
                ensure_part_routed(instance.track, part, nullptr);
            }
            RenderOptions options;
            options.depth = depth;
            options.seed = track_seed;
            const RenderOutcome rendered =
                render_prepared(instance.track, instance.presets, out_dir / (name.str() + ".wav"),
                                options, std::move(instance.warnings));

            BatchItem item;
            item.index = i;
            item.seed = track_seed;
            item.wav_path = rendered.wav_path;
            item.annotation_path = rendered.annotation_path;
            item.integrated_lufs = rendered.loudness.integrated_lufs;
            outcome.items.push_back(item);

            nlohmann::json entry;
            entry["index"] = i;
            entry["seed"] = track_seed;
            entry["audio"] = name.str() + ".wav";
            entry["annotation"] = name.str() + ".json";
            entry["integrated_lufs"] =
                item.integrated_lufs ? nlohmann::json(*item.integrated_lufs) : nlohmann::json(nullptr);
            items.push_back(std::move(entry));
        } catch (const Error& e) {
            throw Error("batch item " + std::to_string(i) + " failed: " + e.what());
        }
    }

    outcome.manifest_path = out_dir / "manifest.json";
    save_json_file(manifest, outcome.manifest_path);
    return outcome;
}

LoudnessReport analyze_command(const std::filesystem::path& wav_path, std::optional<int> start_bar,
                               std::optional<int> end_bar, double bpm) {
    const StereoBuffer audio = read_wav(wav_path);
    if (!start_bar && !end_bar) return measure_loudness(audio);

    const TimeContext ctx{bpm, audio.sample_rate, 4};
    const std::int64_t n = static_cast<std::int64_t>(audio.frames());
    const std::int64_t begin = start_bar ? bar_to_sample_index(Rational(*start_bar), ctx) : 0;
    const std::int64_t end = end_bar ? bar_to_sample_index(Rational(*end_bar), ctx) : n;
    if (begin < 0 || end > n || begin >= end) {
        throw UserError("bar region [" + std::to_string(start_bar.value_or(0)) + ", " +
                        (end_bar ? std::to_string(*end_bar) : "end") + ") is outside the file");
    }
    StereoBuffer region(static_cast<std::size_t>(end - begin), audio.sample_rate);
    std::copy(audio.left.begin() + begin, audio.left.begin() + end, region.left.begin());
    std::copy(audio.right.begin() + begin, audio.right.begin() + end, region.right.begin());
    return measure_loudness(region);
}

nlohmann::json gen_params_to_json(const GenParams& params) {
    nlohmann::json j;
    auto& values = j["values"] = nlohmann::json::array();
    for (const Rational& v : params.values) values.push_back(v.str());
    j["resolution"] = params.resolution.str();
    j["lambda"] = params.lambda;
    j["core_bars"] = params.core_bars;
    j["rep_bar"] = params.rep_bar;
    j["length_bars"] = params.length_bars;
    j["bpm"] = params.bpm;
    j["sample_rate"] = params.sample_rate;
    auto& degrees = j["progression"] = nlohmann::json::array();
    for (int d : params.progression) degrees.push_back(d);
    j["bars_per_chord"] = params.bars_per_chord.str();
    auto& omit = j["omit_degrees"] = nlohmann::json::array();
    for (int d : params.omit_degrees) omit.push_back(d);
    j["lead_octave"] = params.lead_octave;
    j["chord_octave"] = params.chord_octave;
    j["bass_octave"] = params.bass_octave;
    return j;
}

GenParams gen_params_from_json(const nlohmann::json& j, GenParams params) {
    if (!j.is_object()) throw UserError("generation params must be a JSON object");
    if (j.contains("values")) {
        params.values.clear();
        for (const auto& v : j["values"]) {
            params.values.push_back(rational_from_json(v, "params.values"));
        }
    }
    if (j.contains("resolution")) {
        params.resolution = rational_from_json(j["resolution"], "params.resolution");
    }
    if (j.contains("lambda")) params.lambda = j["lambda"].get<double>();
    if (j.contains("core_bars")) params.core_bars = j["core_bars"].get<int>();
    if (j.contains("rep_bar")) params.rep_bar = j["rep_bar"].get<int>();
    if (j.contains("length_bars")) params.length_bars = j["length_bars"].get<int>();
    if (j.contains("bpm")) params.bpm = j["bpm"].get<double>();
    if (j.contains("sample_rate")) params.sample_rate = j["sample_rate"].get<int>();
    if (j.contains("progression")) {
        params.progression.clear();
        for (const auto& d : j["progression"]) {
            params.progression.push_back(d.is_string() ? parse_degree(d.get<std::string>())
                                                       : d.get<int>());
        }
    }
    if (j.contains("bars_per_chord")) {
        params.bars_per_chord = rational_from_json(j["bars_per_chord"], "params.bars_per_chord");
    }
    if (j.contains("omit_degrees")) {
        params.omit_degrees.clear();
        for (const auto& d : j["omit_degrees"]) params.omit_degrees.insert(d.get<int>());
    }
    if (j.contains("lead_octave")) params.lead_octave = j["lead_octave"].get<int>();
    if (j.contains("chord_octave")) params.chord_octave = j["chord_octave"].get<int>();
    if (j.contains("bass_octave")) params.bass_octave = j["bass_octave"].get<int>();
    return params;
}

}  // namespace trackgen
