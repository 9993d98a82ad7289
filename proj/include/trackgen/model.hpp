#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "trackgen/audio.hpp"
#include "trackgen/effects.hpp"
#include "trackgen/pitch.hpp"
#include "trackgen/rational.hpp"
#include "trackgen/time_context.hpp"

namespace trackgen {

/// One note on the piano roll of a pattern core. Positions and durations are
/// exact rationals in bars, relative to the core origin.
struct Note {
    Pitch pitch;
    Rational value;              // duration in bars, > 0
    Rational start;              // offset in bars from the core origin, >= 0
    std::string generator_id;    // preset that plays the note
};

/// A reusable musical paragraph: notes on a piano roll, `length_bars` long.
struct PatternCore {
    std::string id;
    int length_bars = 1;
    std::vector<Note> notes;
};

/// One placed occurrence of a pattern core.
struct Pattern {
    std::string core_id;
    int measure_index = 0;
};

/// A one-shot audio source (kick, fill, downlifter...). The buffer is loaded
/// up front; gain is applied at render time.
struct SampleCore {
    std::string id;
    std::string source_path;
    StereoBuffer audio;
    double gain_db = 0.0;
};

/// One placed occurrence of a sample core.
struct Sample {
    std::string core_id;
    int measure_index = 0;
};

/// A mixer channel: an ordered effect chain applied to one part's summed bus.
struct Channel {
    std::string name;
    std::vector<EffectConfig> effects;
};

/// The whole project: tempo, content registries, placements grouped by part,
/// channels, and part-to-channel routing. Immutable once handed to the
/// renderer; construction is single-threaded.
struct Track {
    TimeContext ctx;
    int length_bars = 8;

    std::map<std::string, PatternCore> pattern_cores;           // by core id
    std::map<std::string, SampleCore> sample_cores;             // by core id
    std::map<std::string, std::vector<Pattern>> patterns;       // part -> occurrences
    std::map<std::string, std::vector<Sample>> samples;         // part -> occurrences
    std::map<std::string, Channel> channels;                    // by channel name
    std::map<std::string, std::string> routing;                 // part -> channel name

    /// All part names that have placed content.
    std::set<std::string> part_names() const;

    std::int64_t total_frames() const {
        return bar_to_sample_index(Rational(length_bars), ctx);
    }
};

struct Violation {
    std::string entity;
    std::string message;
};

/// Diagnostics, not exceptions: returns one violation per broken invariant
/// (dangling references, out-of-range placements, bad routing, non-4/4...).
/// `generator_ids` is the set of preset ids available at render time.
std::vector<Violation> validate_track(const Track& track, const std::set<std::string>& generator_ids);

}  // namespace trackgen
