#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "test_util.hpp"

namespace {

std::string binary_path() {
    const char* env = std::getenv("TRACKGEN_BIN");
    REQUIRE_MESSAGE(env != nullptr, "TRACKGEN_BIN must point at the trackgen binary");
    return env;
}

struct CommandResult {
    int exit_code = -1;
    std::string stdout_text;
};

CommandResult run(const std::string& args, const std::filesystem::path& workdir) {
    const std::filesystem::path out_file = workdir / "cmd_stdout.txt";
    const std::string cmd = "cd '" + workdir.string() + "' && '" + binary_path() + "' " + args +
                            " > '" + out_file.string() + "' 2> /dev/null";
    const int status = std::system(cmd.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.stdout_text = testutil::read_file_bytes(out_file);
    return result;
}

}  // namespace

TEST_CASE("cli end to end: demo, render, analyze, gen-score, batch") {
    testutil::TempDir dir("cli");

    const CommandResult demo = run("demo --out style", dir.path());
    REQUIRE(demo.exit_code == 0);
    CHECK(std::filesystem::exists(dir.path() / "style/sound_sheet.json"));

    const CommandResult render =
        run("render --input style/score.json --style style --out mix.wav", dir.path());
    REQUIRE(render.exit_code == 0);
    const auto render_json = nlohmann::json::parse(render.stdout_text);
    CHECK(render_json["out"] == "mix.wav");
    CHECK(render_json["loudness"]["integrated_lufs"].is_number());
    CHECK(std::filesystem::exists(dir.path() / "mix.wav"));
    CHECK(std::filesystem::exists(dir.path() / "mix.json"));

    const CommandResult analyze = run("analyze --input mix.wav --start-bar 0 --end-bar 8", dir.path());
    REQUIRE(analyze.exit_code == 0);
    const auto analyze_json = nlohmann::json::parse(analyze.stdout_text);
    CHECK(analyze_json["no_signal"] == false);

    const CommandResult gen =
        run("gen-score --key A --mode minor --seed 3 --lambda 0 --values 1/4 --out s.json", dir.path());
    REQUIRE(gen.exit_code == 0);
    CHECK(std::filesystem::exists(dir.path() / "s.json"));
    const CommandResult render_gen =
        run("render --input s.json --style style --out gen.wav", dir.path());
    CHECK(render_gen.exit_code == 0);

    const CommandResult batch =
        run("batch --style style --key A --mode minor --count 2 --seed 7 --out data "
            "--length-bars 4",
            dir.path());
    REQUIRE(batch.exit_code == 0);
    CHECK(std::filesystem::exists(dir.path() / "data/manifest.json"));
    CHECK(std::filesystem::exists(dir.path() / "data/track_0000.wav"));
    CHECK(std::filesystem::exists(dir.path() / "data/track_0001.json"));
}

TEST_CASE("cli exit codes distinguish user errors") {
    testutil::TempDir dir("cli_err");

    // missing style directory: exit 2, message names the path (on stderr)
    const CommandResult missing =
        run("render --input nothing.json --style missing_style --out x.wav", dir.path());
    CHECK(missing.exit_code == 2);

    const CommandResult bad_key = run("gen-score --key Z --out s.json", dir.path());
    CHECK(bad_key.exit_code == 2);

    const CommandResult bad_flag = run("analyze", dir.path());
    CHECK(bad_flag.exit_code != 0);  // CLI11 usage error

    const CommandResult bad_region = [&] {
        run("demo --out style", dir.path());
        run("render --input style/score.json --style style --out mix.wav", dir.path());
        return run("analyze --input mix.wav --start-bar 0 --end-bar 64", dir.path());
    }();
    CHECK(bad_region.exit_code == 2);
}

TEST_CASE("cli renders byte-identically for identical invocations") {
    testutil::TempDir dir("cli_det");
    REQUIRE(run("demo --out style", dir.path()).exit_code == 0);
    REQUIRE(run("render --input style/score.json --style style --out a.wav --seed 9", dir.path())
                .exit_code == 0);
    REQUIRE(run("render --input style/score.json --style style --out b.wav --seed 9", dir.path())
                .exit_code == 0);
    CHECK(testutil::read_file_bytes(dir.path() / "a.wav") ==
          testutil::read_file_bytes(dir.path() / "b.wav"));
    // the annotations only differ in nothing at all
    CHECK(testutil::read_file_bytes(dir.path() / "a.json") ==
          testutil::read_file_bytes(dir.path() / "b.json"));
}

TEST_CASE("cli config file feeds the generator") {
    testutil::TempDir dir("cli_cfg");
    {
        std::ofstream cfg(dir.path() / "run.json");
        cfg << R"({"lambda": 0.0, "values": ["1/4"], "core_bars": 4, "rep_bar": 4})";
    }
    const CommandResult gen = run("gen-score --key C --mode major --config run.json --out s.json", dir.path());
    REQUIRE(gen.exit_code == 0);
    const auto score = nlohmann::json::parse(testutil::read_file_bytes(dir.path() / "s.json"));
    CHECK(score["parts"]["lead"]["notes"].size() == 16);  // lambda 0 grid of quarters
}
