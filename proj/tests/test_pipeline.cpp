#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trackgen/demo.hpp"
#include "trackgen/pipeline.hpp"
#include "trackgen/render.hpp"
#include "test_util.hpp"

using namespace trackgen;
using testutil::read_file_bytes;
using testutil::TempDir;

namespace {

/// One shared demo style for the whole binary (writing is deterministic).
const std::filesystem::path& demo_style() {
    static const TempDir dir("pipe_demo");
    static const bool ready = [] {
        write_demo_style(dir.path() / "style");
        return true;
    }();
    (void)ready;
    return dir.path();
}

std::set<int> scale_midi_classes(const std::string& key, Mode mode) {
    const Pitch root = Pitch::from_name(key + "4");
    std::set<int> classes;
    for (const Pitch& p : scale_pitches(root, mode, 1, {})) classes.insert(p.midi() % 12);
    return classes;
}

}  // namespace

TEST_CASE("generate_score: grid fill and determinism") {
    GenParams params;
    params.values = {Rational(1, 4)};
    params.lambda = 0.0;
    params.core_bars = 4;
    params.rep_bar = 4;
    params.length_bars = 8;

    const Score score = generate_score("C", Mode::Major, params, 3);
    CHECK(score.parts.at("lead").notes.size() == 16);  // 4 bars of quarter notes
    CHECK(score.parts.at("chords").notes.size() > 0);
    CHECK(score.parts.at("bass").notes.size() == 32);  // straight eighths

    const Score again = generate_score("C", Mode::Major, params, 3);
    CHECK(score_to_json(again).dump() == score_to_json(score).dump());
    const Score other = generate_score("C", Mode::Major, params, 4);
    CHECK(score_to_json(other).dump() == score_to_json(score).dump());  // lambda=0: rhythm fixed
}

TEST_CASE("generate_score stays inside the requested key") {
    GenParams params;
    params.length_bars = 4;
    for (const auto& [key, mode] : std::vector<std::pair<std::string, Mode>>{
             {"A", Mode::Minor}, {"C", Mode::Major}, {"F#", Mode::Minor}}) {
        const std::set<int> allowed = scale_midi_classes(key, mode);
        const Score score = generate_score(key, mode, params, 9);
        for (const auto& [part, score_part] : score.parts) {
            for (const Note& n : score_part.notes) {
                CAPTURE(part);
                CAPTURE(n.pitch.name());
                CHECK(allowed.contains(n.pitch.midi() % 12));
            }
        }
    }
    CHECK_THROWS_AS(generate_score("X", Mode::Major, params, 1), UserError);
}

TEST_CASE("score JSON round-trips through serialization") {
    GenParams params;
    const Score score = generate_score("A", Mode::Minor, params, 17);
    const Score back = score_from_json(score_to_json(score));
    CHECK(score_to_json(back).dump() == score_to_json(score).dump());
}

TEST_CASE("render_command: demo score renders deterministically") {
    TempDir out("render_out");
    const auto style = demo_style() / "style";
    RenderOptions options;
    options.seed = 5;

    const RenderOutcome a = render_command(style / "score.json", style, out.path() / "a.wav", options);
    CHECK(std::filesystem::exists(a.wav_path));
    CHECK(std::filesystem::exists(a.annotation_path));
    REQUIRE(a.loudness.integrated_lufs.has_value());

    // master length is exactly the score length in bars
    const StereoBuffer master = read_wav(a.wav_path);
    const TimeContext ctx{128.0, 44100, 4};
    CHECK(master.frames() == static_cast<std::size_t>(bar_to_sample_index(Rational(8), ctx)));

    const RenderOutcome b = render_command(style / "score.json", style, out.path() / "b.wav", options);
    CHECK(read_file_bytes(a.wav_path) == read_file_bytes(b.wav_path));
}

TEST_CASE("render_command: re-rendering the emitted annotation reproduces the audio") {
    TempDir out("rerender");
    const auto style = demo_style() / "style";
    RenderOptions options;
    options.seed = 21;

    const RenderOutcome first =
        render_command(style / "score.json", style, out.path() / "first.wav", options);
    const RenderOutcome second =
        render_command(first.annotation_path, style, out.path() / "second.wav", options);
    CHECK(read_file_bytes(first.wav_path) == read_file_bytes(second.wav_path));
}

TEST_CASE("render_command: stems are written and sum to the master") {
    TempDir out("stems");
    const auto style = demo_style() / "style";
    RenderOptions options;
    options.stems = true;
    const RenderOutcome outcome =
        render_command(style / "score.json", style, out.path() / "mix.wav", options);
    REQUIRE(!outcome.stem_paths.empty());

    const StereoBuffer master = read_wav(outcome.wav_path);
    StereoBuffer sum(master.frames(), master.sample_rate);
    for (const auto& [part, path] : outcome.stem_paths) {
        const StereoBuffer stem = read_wav(path);
        REQUIRE(stem.frames() == master.frames());
        sum.add(stem, 0);
    }
    // 32f storage quantizes each stem and the master identically, so the
    // float sum may differ by a few ulps per stem
    CHECK(testutil::max_abs_diff(sum, master) < 1e-6);
}

TEST_CASE("render_command input validation") {
    TempDir out("render_err");
    const auto style = demo_style() / "style";
    CHECK_THROWS_AS(
        render_command(style / "score.json", out.path() / "no_style", out.path() / "x.wav", {}),
        UserError);
    save_json_file(nlohmann::json{{"format", "mystery"}}, out.path() / "odd.json");
    CHECK_THROWS_AS(render_command(out.path() / "odd.json", style, out.path() / "x.wav", {}),
                    UserError);
}

TEST_CASE("batch_command produces a reproducible dataset") {
    TempDir out("batch");
    const auto style = demo_style() / "style";
    GenParams params;
    params.length_bars = 4;
    params.core_bars = 4;

    const BatchOutcome first =
        batch_command(style, "A", Mode::Minor, 3, 7, out.path() / "one", params, WavDepth::Float32);
    REQUIRE(first.items.size() == 3);
    for (const BatchItem& item : first.items) {
        CHECK(std::filesystem::exists(item.wav_path));
        CHECK(std::filesystem::exists(item.annotation_path));
    }
    CHECK(std::filesystem::exists(first.manifest_path));
    CHECK(first.items[0].seed == 7);
    CHECK(first.items[2].seed == 9);

    const BatchOutcome second =
        batch_command(style, "A", Mode::Minor, 3, 7, out.path() / "two", params, WavDepth::Float32);
    CHECK(read_file_bytes(first.manifest_path) == read_file_bytes(second.manifest_path));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(read_file_bytes(first.items[i].wav_path) == read_file_bytes(second.items[i].wav_path));
        CHECK(read_file_bytes(first.items[i].annotation_path) ==
              read_file_bytes(second.items[i].annotation_path));
    }

    // every annotated melodic note stays in the requested key
    const std::set<int> allowed = scale_midi_classes("A", Mode::Minor);
    for (const BatchItem& item : first.items) {
        const Track track = track_from_json(load_json_file(item.annotation_path), style);
        for (const std::string part : {"lead_core", "chords_core", "bass_core"}) {
            REQUIRE(track.pattern_cores.contains(part));
            for (const Note& n : track.pattern_cores.at(part).notes) {
                CHECK(allowed.contains(n.pitch.midi() % 12));
            }
        }
    }
}

TEST_CASE("analyze_command handles regions and silence") {
    TempDir out("analyze");
    const auto style = demo_style() / "style";
    const RenderOutcome rendered =
        render_command(style / "score.json", style, out.path() / "mix.wav", {});

    SUBCASE("whole file matches the library measurement") {
        const LoudnessReport report = analyze_command(rendered.wav_path, std::nullopt, std::nullopt, 128.0);
        REQUIRE(report.integrated_lufs.has_value());
        CHECK(std::fabs(*report.integrated_lufs - *rendered.loudness.integrated_lufs) < 1e-9);
    }
    SUBCASE("a bar region measures that region only") {
        const LoudnessReport report = analyze_command(rendered.wav_path, 0, 4, 128.0);
        CHECK(report.integrated_lufs.has_value());
    }
    SUBCASE("out-of-range regions are user errors") {
        CHECK_THROWS_AS(analyze_command(rendered.wav_path, 0, 99, 128.0), UserError);
        CHECK_THROWS_AS(analyze_command(rendered.wav_path, 6, 2, 128.0), UserError);
    }
    SUBCASE("silence reports no-signal") {
        const StereoBuffer silence(44100 * 2, 44100);
        write_wav(silence, out.path() / "silence.wav", WavDepth::Float32);
        const LoudnessReport report =
            analyze_command(out.path() / "silence.wav", std::nullopt, std::nullopt, 128.0);
        CHECK(!report.integrated_lufs.has_value());
    }
}

TEST_CASE("gen params JSON round-trip") {
    GenParams params;
    params.lambda = 0.7;
    params.progression = {1, 6, 3, 7};
    params.values = {Rational(1, 8), Rational(1, 4)};
    params.omit_degrees = {2, 4};
    const GenParams back = gen_params_from_json(gen_params_to_json(params));
    CHECK(gen_params_to_json(back).dump() == gen_params_to_json(params).dump());

    // partial configs override only the provided keys
    const GenParams patched = gen_params_from_json(nlohmann::json{{"lambda", 2.0}});
    CHECK(patched.lambda == 2.0);
    CHECK(patched.core_bars == GenParams{}.core_bars);

    // progressions accept roman numerals
    const GenParams roman = gen_params_from_json(nlohmann::json{{"progression", {"i", "VI", "III", "VII"}}});
    CHECK(roman.progression == std::vector<int>{1, 6, 3, 7});
}

TEST_CASE("demo style content is complete and loadable") {
    const auto style = demo_style() / "style";
    const Style loaded = load_style(style);
    for (const std::string part : {"kick", "clap", "hat", "fx", "lead", "chords", "bass"}) {
        CHECK(loaded.sound.parts.contains(part));
        CHECK(loaded.channel.channels.contains(part));
    }
    // the reference lead chain keeps the published shape
    const auto& lead = loaded.channel.channels.at("lead");
    REQUIRE(lead.size() == 5);
    CHECK(effect_tag(lead[0]) == "highpass");
    CHECK(effect_tag(lead[1]) == "sidechain");
    CHECK(std::get<SidechainConfig>(lead[1]).mag == 0.66);
    CHECK(effect_tag(lead[4]) == "limiter");

    const Score score = score_from_json(load_json_file(style / "score.json"));
    CHECK(score.length_bars == 8);
    CHECK(score.parts.size() == 3);
}
