#include "trackgen/symbolic_gen.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace trackgen {

void RhythmParams::validate() const {
    if (values.empty()) throw UserError("rhythm needs a nonempty note-value set");
    for (const Rational& v : values) {
        if (!(v > Rational(0))) throw UserError("note values must be positive");
    }
    if (!(resolution > Rational(0))) throw UserError("rhythm resolution must be positive");
    if (lambda < 0.0) throw UserError("rhythm lambda must be nonnegative");
    if (bars < 1) throw UserError("rhythm bar count must be >= 1");
    if (rep_bar < 1 || bars % rep_bar != 0) {
        throw UserError("rep_bar must be a positive divisor of the bar count");
    }
}

std::vector<Placeholder> generate_rhythm(const RhythmParams& params, std::uint64_t seed) {
    params.validate();
    Rng rng(seed);

    const Rational span(params.rep_bar);
    std::vector<Placeholder> base;
    Rational end(0);
    while (true) {
        const int t = sample_poisson(params.lambda, rng);
        const Rational start = end + params.resolution * t;
        const Rational value = params.values[rng.uniform_index(params.values.size())];
        end = start + value;
        if (end > span) break;
        base.push_back({value, start, end});
    }

    if (params.rep_bar == params.bars) return base;

    std::vector<Placeholder> out;
    out.reserve(base.size() * static_cast<std::size_t>(params.bars / params.rep_bar));
    for (int k = 0; k < params.bars / params.rep_bar; ++k) {
        const Rational shift(static_cast<std::int64_t>(k) * params.rep_bar);
        for (const Placeholder& p : base) {
            out.push_back({p.value, p.start + shift, p.end + shift});
        }
    }
    return out;
}

void PitchParams::validate() const {
    if (pitches.empty()) throw UserError("pitch set must be nonempty");
    if (!weights.empty() && weights.size() != pitches.size()) {
        throw UserError("pitch weights must match the pitch set length");
    }
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw UserError("pitch weights must be nonnegative");
        total += w;
    }
    if (!weights.empty() && total <= 0.0) throw UserError("pitch weights must not all be zero");
}

std::vector<Note> fill_pitches(const std::vector<Placeholder>& placeholders,
                               const PitchParams& params, std::uint64_t seed) {
    params.validate();
    Rng rng(seed);
    std::vector<Note> notes;
    notes.reserve(placeholders.size());
    for (const Placeholder& p : placeholders) {
        const std::size_t idx = params.weights.empty()
                                    ? rng.uniform_index(params.pitches.size())
                                    : rng.weighted_index(params.weights);
        notes.push_back({params.pitches[idx], p.value, p.start, ""});
    }
    return notes;
}

namespace {

constexpr std::array<int, 7> kMajorIntervals = {0, 2, 4, 5, 7, 9, 11};
constexpr std::array<int, 7> kMinorIntervals = {0, 2, 3, 5, 7, 8, 10};  // natural minor

const std::array<int, 7>& intervals_for(Mode mode) {
    return mode == Mode::Major ? kMajorIntervals : kMinorIntervals;
}

}  // namespace

Mode mode_from_string(const std::string& s) {
    std::string lower;
    for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "major" || lower == "maj") return Mode::Major;
    if (lower == "minor" || lower == "min") return Mode::Minor;
    throw UserError("unknown mode '" + s + "' (expected major or minor)");
}

std::string mode_to_string(Mode m) { return m == Mode::Major ? "major" : "minor"; }

std::vector<Pitch> scale_pitches(Pitch root, Mode mode, int octaves, const std::set<int>& omit_degrees) {
    if (octaves < 1) throw UserError("scale octave count must be >= 1");
    for (int d : omit_degrees) {
        if (d < 1 || d > 7) throw UserError("scale degrees to omit must be in 1..7");
    }
    const auto& intervals = intervals_for(mode);
    std::vector<Pitch> out;
    for (int oct = 0; oct < octaves; ++oct) {
        for (int degree = 1; degree <= 7; ++degree) {
            if (omit_degrees.contains(degree)) continue;
            out.emplace_back(root.midi() + 12 * oct + intervals[static_cast<std::size_t>(degree - 1)]);
        }
    }
    if (!omit_degrees.contains(1)) out.emplace_back(root.midi() + 12 * octaves);
    if (out.empty()) throw UserError("scale selection is empty (all degrees omitted)");
    return out;
}

std::vector<Note> chords_to_notes(const std::vector<int>& progression, Pitch key_root, Mode mode,
                                  const Rational& bars_per_chord, int length_bars) {
    if (progression.empty()) throw UserError("chord progression must be nonempty");
    if (!(bars_per_chord > Rational(0))) throw UserError("bars_per_chord must be positive");
    if (length_bars < 1) throw UserError("length_bars must be >= 1");
    for (int degree : progression) {
        if (degree < 1 || degree > 7) {
            throw UserError("unknown scale degree " + std::to_string(degree) + " in progression");
        }
    }

    const auto& intervals = intervals_for(mode);
    const auto degree_to_midi = [&](int degree_index) {
        // degree_index counts scale steps from the key root, 0-based, any octave
        const int oct = degree_index / 7;
        const int step = degree_index % 7;
        return key_root.midi() + 12 * oct + intervals[static_cast<std::size_t>(step)];
    };

    std::vector<Note> notes;
    const Rational total(length_bars);
    Rational at(0);
    std::size_t chord_index = 0;
    while (at < total) {
        const Rational remaining = total - at;
        const Rational value = bars_per_chord < remaining ? bars_per_chord : remaining;
        const int degree = progression[chord_index % progression.size()];
        for (int third = 0; third < 3; ++third) {  // root, third, fifth
            notes.push_back({Pitch(degree_to_midi((degree - 1) + 2 * third)), value, at, ""});
        }
        at += value;
        ++chord_index;
    }
    return notes;
}

int parse_degree(const std::string& roman) {
    std::string upper;
    for (char c : roman) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    static const std::array<std::pair<const char*, int>, 7> kTable = {{
        {"III", 3}, {"VII", 7}, {"II", 2}, {"IV", 4}, {"VI", 6}, {"I", 1}, {"V", 5},
    }};
    for (const auto& [name, value] : kTable) {
        if (upper == name) return value;
    }
    throw UserError("cannot parse scale degree '" + roman + "'");
}

}  // namespace trackgen
