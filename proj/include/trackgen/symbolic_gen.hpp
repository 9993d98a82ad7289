#pragma once

#include <optional>
#include <set>
#include <vector>

#include "trackgen/model.hpp"
#include "trackgen/pitch.hpp"
#include "trackgen/rational.hpp"
#include "trackgen/rng.hpp"

namespace trackgen {

/// A rhythmic slot awaiting a pitch: duration, start and end, in bars.
struct Placeholder {
    Rational value;
    Rational start;
    Rational end;

    friend bool operator==(const Placeholder& a, const Placeholder& b) {
        return a.value == b.value && a.start == b.start && a.end == b.end;
    }
};

struct RhythmParams {
    std::vector<Rational> values;  // candidate note values, all > 0
    Rational resolution;           // gap grid (value of the shortest note)
    double lambda = 0.0;           // Poisson parameter for gap lengths
    int bars = 4;                  // N
    int rep_bar = 4;               // smallest repeating span; must divide bars

    void validate() const;
};

/// Rule-based rhythm generation: walk forward from 0, each step inserting a
/// Poisson-distributed gap (t * resolution) and then a note value drawn
/// uniformly from `values`; a placeholder whose end exceeds the span is
/// discarded and generation stops (end == span is kept). One rep_bar-long
/// rhythm is generated and tiled to fill `bars`. Deterministic per seed;
/// RNG draws are consumed gap-first, then value.
std::vector<Placeholder> generate_rhythm(const RhythmParams& params, std::uint64_t seed);

struct PitchParams {
    std::vector<Pitch> pitches;
    std::vector<double> weights;  // same length; uniform when empty

    void validate() const;
};

/// Fills placeholders with pitches drawn independently from the weighted set.
/// generator_id is left empty for the caller to assign.
std::vector<Note> fill_pitches(const std::vector<Placeholder>& placeholders,
                               const PitchParams& params, std::uint64_t seed);

enum class Mode { Major, Minor };

Mode mode_from_string(const std::string& s);
std::string mode_to_string(Mode m);

/// Ascending scale over `octaves` stacked octaves starting at `root`, with
/// the listed degrees (1..7) omitted and the top root appended (unless
/// degree 1 is omitted). Example: C5 major, one octave, omit {4} ->
/// [C5, D5, E5, G5, A5, B5, C6].
std::vector<Pitch> scale_pitches(Pitch root, Mode mode, int octaves, const std::set<int>& omit_degrees);

/// Block diatonic triads for a degree progression (1..7), each held
/// bars_per_chord, cycled until length_bars is filled (last chord truncated
/// to fit). generator_id left empty.
std::vector<Note> chords_to_notes(const std::vector<int>& progression, Pitch key_root, Mode mode,
                                  const Rational& bars_per_chord, int length_bars);

/// Degree parsing for CLI/progression strings: "I", "vi", "VII" -> 1, 6, 7
/// (case carries no meaning; quality is diatonic to the key mode).
int parse_degree(const std::string& roman);

}  // namespace trackgen
