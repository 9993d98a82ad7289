#include "trackgen/pitch.hpp"

#include <array>
#include <cctype>
#include <cmath>

namespace trackgen {

namespace {

constexpr std::array<const char*, 12> kSemitoneNames = {
    "C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"};

int semitone_of(char letter) {
    switch (std::toupper(static_cast<unsigned char>(letter))) {
        case 'C': return 0;
        case 'D': return 2;
        case 'E': return 4;
        case 'F': return 5;
        case 'G': return 7;
        case 'A': return 9;
        case 'B': return 11;
        default: return -1;
    }
}

}  // namespace

Pitch::Pitch(int midi) : midi_(midi) {
    if (midi < kMidiMin || midi > kMidiMax) {
        throw UserError("MIDI number " + std::to_string(midi) + " outside the 88-key range [" +
                        std::to_string(kMidiMin) + ", " + std::to_string(kMidiMax) + "]");
    }
}

Pitch Pitch::from_name(const std::string& name) {
    if (name.size() < 2) throw UserError("bad pitch name '" + name + "'");
    std::size_t i = 0;
    int semitone = semitone_of(name[i]);
    if (semitone < 0) throw UserError("bad pitch name '" + name + "'");
    ++i;
    if (name[i] == '#') {
        ++semitone;
        ++i;
    } else if (name[i] == 'b') {
        --semitone;
        ++i;
    }
    if (i >= name.size()) throw UserError("pitch name '" + name + "' missing octave");
    int octave = 0;
    try {
        std::size_t used = 0;
        octave = std::stoi(name.substr(i), &used);
        if (i + used != name.size()) throw UserError("");
    } catch (const std::exception&) {
        throw UserError("bad octave in pitch name '" + name + "'");
    }
    return Pitch((octave + 1) * 12 + semitone);
}

std::string Pitch::name() const {
    const int octave = midi_ / 12 - 1;
    return std::string(kSemitoneNames[midi_ % 12]) + std::to_string(octave);
}

double Pitch::frequency() const {
    return 440.0 * std::pow(2.0, (midi_ - 69) / 12.0);
}

}  // namespace trackgen
