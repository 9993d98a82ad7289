#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "trackgen/audio.hpp"
#include "trackgen/model.hpp"
#include "trackgen/time_context.hpp"

namespace trackgen {

/// A pitched instrument: one pre-rendered stereo buffer per available MIDI
/// pitch. Immutable after load; concurrent note renders are safe.
struct Preset {
    std::string id;
    int sample_rate = 44100;
    double gain_db = 0.0;
    std::map<int, StereoBuffer> pitches;  // midi number -> audio

    bool has_pitch(int midi) const { return pitches.contains(midi); }
};

using PresetRegistry = std::map<std::string, Preset>;

/// Loads a per-pitch bank from a directory of WAV files named either by note
/// ("C5.wav") or MIDI number ("72.wav"). Files at a different sample rate are
/// rejected unless `resample_fallback` is set (linear resampling).
Preset load_preset(const std::filesystem::path& directory, const std::string& id, double gain_db,
                   const TimeContext& ctx, bool resample_fallback = false);

enum class SynthKind { Sine, Saw, Supersaw };

SynthKind synth_kind_from_string(const std::string& s);

/// Deterministic procedural bank covering all 88 keys: polyBLEP band-limited
/// waveforms with a 10 ms fade-in and 20 ms fade-out. The supersaw stacks 7
/// detuned saws (+-4/8/12 cents) across an equal-power stereo spread.
Preset synth_preset(SynthKind kind, const TimeContext& ctx, double duration_s,
                    const std::string& id, double gain_db = 0.0);

struct NoteRender {
    StereoBuffer audio;
    std::int64_t offset = 0;  // frames from the enclosing origin
};

/// Renders one note: the preset buffer for its pitch, gated to the note value
/// plus a 10 ms release fade, preset gain applied. Durations beyond the
/// source are padded with silence, never looped.
NoteRender render_note(const Preset& preset, const Note& note, const TimeContext& ctx);

}  // namespace trackgen
