#pragma once

#include <filesystem>

#include "trackgen/audio.hpp"

namespace trackgen {

enum class WavDepth { Pcm16, Pcm24, Float32 };

WavDepth wav_depth_from_string(const std::string& s);  // "16" | "24" | "32f"
std::string wav_depth_to_string(WavDepth d);

/// RIFF/WAVE writer. Integer depths clip to [-1, 1]; Float32 round-trips
/// bit-exactly through read_wav.
void write_wav(const StereoBuffer& buffer, const std::filesystem::path& path, WavDepth depth);

/// Reads PCM 16/24-bit and IEEE float 32-bit WAV files. Mono sources are
/// duplicated onto both channels; more than 2 channels is rejected.
StereoBuffer read_wav(const std::filesystem::path& path);

}  // namespace trackgen
