#pragma once

#include <string>

#include "trackgen/errors.hpp"

namespace trackgen {

inline constexpr int kMidiMin = 21;   // A0
inline constexpr int kMidiMax = 108;  // C8

/// One of the 88 piano keys, stored as its MIDI number (scientific pitch
/// notation: A4 = 69 = 440 Hz, C5 = 72).
class Pitch {
public:
    explicit Pitch(int midi);

    /// Parses names like "C5", "F#4", "Bb3". Sharps are canonical on output.
    static Pitch from_name(const std::string& name);

    int midi() const { return midi_; }
    std::string name() const;
    double frequency() const;

    friend bool operator==(const Pitch& a, const Pitch& b) { return a.midi_ == b.midi_; }
    friend bool operator!=(const Pitch& a, const Pitch& b) { return a.midi_ != b.midi_; }
    friend bool operator<(const Pitch& a, const Pitch& b) { return a.midi_ < b.midi_; }

private:
    int midi_;
};

}  // namespace trackgen
