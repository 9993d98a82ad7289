#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "trackgen/demo.hpp"
#include "trackgen/pipeline.hpp"

namespace {

using trackgen::GenParams;
using trackgen::Rational;

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::vector<Rational> parse_rational_list(const std::string& csv) {
    std::vector<Rational> out;
    std::string item;
    std::istringstream stream(csv);
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) out.push_back(Rational::parse(item));
    }
    if (out.empty()) throw trackgen::UserError("empty rational list '" + csv + "'");
    return out;
}

std::vector<int> parse_progression(const std::string& csv) {
    std::vector<int> out;
    std::string item;
    std::istringstream stream(csv);
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) out.push_back(trackgen::parse_degree(item));
    }
    return out;
}

struct GenFlags {
    std::string values;
    std::string resolution;
    std::string progression;
    std::string bars_per_chord;
    std::string omit_degrees;
    double lambda = -1.0;
    int core_bars = 0;
    int rep_bar = 0;
    int length_bars = 0;
    double bpm = 0.0;
    std::string config;
};

void add_gen_flags(CLI::App* cmd, GenFlags& flags) {
    cmd->add_option("--config", flags.config, "JSON file with the full generation parameter set");
    cmd->add_option("--values", flags.values, "note values, e.g. \"1/16,1/8,3/16,1/4\"");
    cmd->add_option("--resolution", flags.resolution, "gap grid, e.g. \"1/16\"");
    cmd->add_option("--lambda", flags.lambda, "Poisson gap parameter");
    cmd->add_option("--core-bars", flags.core_bars, "melodic core length in bars");
    cmd->add_option("--rep-bar", flags.rep_bar, "rhythm repetition span (divides core bars)");
    cmd->add_option("--length-bars", flags.length_bars, "track length in bars");
    cmd->add_option("--bpm", flags.bpm, "tempo");
    cmd->add_option("--progression", flags.progression, "chord degrees, e.g. \"i,VI,III,VII\"");
    cmd->add_option("--bars-per-chord", flags.bars_per_chord, "chord duration in bars");
    cmd->add_option("--omit-degrees", flags.omit_degrees, "lead scale degrees to skip, e.g. \"4\"");
}

GenParams resolve_gen_params(const GenFlags& flags) {
    GenParams params;
    if (!flags.config.empty()) {
        params = trackgen::gen_params_from_json(trackgen::load_json_file(flags.config), params);
    }
    if (!flags.values.empty()) params.values = parse_rational_list(flags.values);
    if (!flags.resolution.empty()) params.resolution = Rational::parse(flags.resolution);
    if (flags.lambda >= 0.0) params.lambda = flags.lambda;
    if (flags.core_bars > 0) params.core_bars = flags.core_bars;
    if (flags.rep_bar > 0) params.rep_bar = flags.rep_bar;
    if (flags.length_bars > 0) params.length_bars = flags.length_bars;
    if (flags.bpm > 0.0) params.bpm = flags.bpm;
    if (!flags.progression.empty()) params.progression = parse_progression(flags.progression);
    if (!flags.bars_per_chord.empty()) params.bars_per_chord = Rational::parse(flags.bars_per_chord);
    if (!flags.omit_degrees.empty()) {
        params.omit_degrees.clear();
        std::istringstream stream(flags.omit_degrees);
        std::string item;
        while (std::getline(stream, item, ',')) {
            if (!item.empty()) params.omit_degrees.insert(std::stoi(item));
        }
    }
    return params;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"template-driven EDM track renderer and dataset generator"};
    app.require_subcommand(1);

    // render
    auto* render = app.add_subcommand("render", "render a score or track document to audio");
    std::string render_input, render_style, render_out;
    std::string render_depth = "32f";
    bool render_stems = false;
    std::uint64_t render_seed = 0;
    render->add_option("--input", render_input, "score or track JSON")->required();
    render->add_option("--style", render_style, "style directory")->required();
    render->add_option("--out", render_out, "output WAV path")->required();
    render->add_option("--depth", render_depth, "bit depth: 16, 24 or 32f (default 32f)");
    render->add_flag("--stems", render_stems, "also write per-part stems");
    render->add_option("--seed", render_seed, "style instantiation seed (fx pool draws)");

    // batch
    auto* batch = app.add_subcommand("batch", "generate and render a dataset from a key");
    std::string batch_style, batch_key = "A", batch_mode = "minor", batch_out = "dataset";
    std::string batch_depth = "32f";
    int batch_count = 1;
    std::uint64_t batch_seed = 0;
    GenFlags batch_flags;
    batch->add_option("--style", batch_style, "style directory")->required();
    batch->add_option("--key", batch_key, "key root, e.g. A or F#");
    batch->add_option("--mode", batch_mode, "major or minor");
    batch->add_option("--count", batch_count, "number of tracks");
    batch->add_option("--seed", batch_seed, "base seed; track i uses seed + i");
    batch->add_option("--out", batch_out, "output directory");
    batch->add_option("--depth", batch_depth, "bit depth: 16, 24 or 32f");
    add_gen_flags(batch, batch_flags);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "LUFS loudness report for a WAV file");
    std::string analyze_input;
    int analyze_start = -1, analyze_end = -1;
    double analyze_bpm = 128.0;
    analyze->add_option("--input", analyze_input, "WAV file")->required();
    analyze->add_option("--start-bar", analyze_start, "region start bar (inclusive)");
    analyze->add_option("--end-bar", analyze_end, "region end bar (exclusive)");
    analyze->add_option("--bpm", analyze_bpm, "tempo for bar arithmetic (default 128)");

    // gen-score
    auto* gen = app.add_subcommand("gen-score", "emit a symbolic score JSON");
    std::string gen_key = "A", gen_mode = "minor", gen_out = "score.json";
    std::uint64_t gen_seed = 0;
    GenFlags gen_flags;
    gen->add_option("--key", gen_key, "key root, e.g. A or F#");
    gen->add_option("--mode", gen_mode, "major or minor");
    gen->add_option("--seed", gen_seed, "generation seed");
    gen->add_option("--out", gen_out, "output JSON path");
    add_gen_flags(gen, gen_flags);

    // demo
    auto* demo = app.add_subcommand("demo", "materialize the bundled reference style + score");
    std::string demo_out = "demo_style";
    demo->add_option("--out", demo_out, "target directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (render->parsed()) {
            trackgen::RenderOptions options;
            options.depth = trackgen::wav_depth_from_string(render_depth);
            options.stems = render_stems;
            options.seed = render_seed;
            const auto outcome = trackgen::render_command(render_input, render_style, render_out, options);
            print_warnings(outcome.warnings);
            nlohmann::json out;
            out["out"] = outcome.wav_path.generic_string();
            out["annotation"] = outcome.annotation_path.generic_string();
            if (!outcome.stem_paths.empty()) {
                for (const auto& [part, path] : outcome.stem_paths) {
                    out["stems"][part] = path.generic_string();
                }
            }
            out["loudness"] = trackgen::loudness_report_to_json(outcome.loudness);
            std::cout << out.dump(2) << '\n';
        } else if (batch->parsed()) {
            const GenParams params = resolve_gen_params(batch_flags);
            const auto outcome = trackgen::batch_command(
                batch_style, batch_key, trackgen::mode_from_string(batch_mode), batch_count, batch_seed,
                batch_out, params, trackgen::wav_depth_from_string(batch_depth));
            nlohmann::json out;
            out["manifest"] = outcome.manifest_path.generic_string();
            out["count"] = static_cast<int>(outcome.items.size());
            std::cout << out.dump(2) << '\n';
        } else if (analyze->parsed()) {
            const auto report = trackgen::analyze_command(
                analyze_input, analyze_start >= 0 ? std::optional<int>(analyze_start) : std::nullopt,
                analyze_end >= 0 ? std::optional<int>(analyze_end) : std::nullopt, analyze_bpm);
            std::cout << trackgen::loudness_report_to_json(report).dump(2) << '\n';
        } else if (gen->parsed()) {
            const GenParams params = resolve_gen_params(gen_flags);
            const trackgen::Score score = trackgen::generate_score(
                gen_key, trackgen::mode_from_string(gen_mode), params, gen_seed);
            trackgen::save_json_file(trackgen::score_to_json(score), gen_out);
            nlohmann::json out;
            out["out"] = gen_out;
            for (const auto& [part, p] : score.parts) {
                out["notes"][part] = static_cast<int>(p.notes.size());
            }
            std::cout << out.dump(2) << '\n';
        } else if (demo->parsed()) {
            trackgen::write_demo_style(demo_out);
            nlohmann::json out;
            out["dir"] = demo_out;
            std::cout << out.dump(2) << '\n';
        }
    } catch (const trackgen::UserError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
