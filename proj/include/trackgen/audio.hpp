#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "trackgen/errors.hpp"

namespace trackgen {

/// Interleaving-free stereo audio, 64-bit float throughout the pipeline.
/// Conversion to the output bit depth happens only at WAV write.
struct StereoBuffer {
    std::vector<double> left;
    std::vector<double> right;
    int sample_rate = 44100;

    StereoBuffer() = default;
    StereoBuffer(std::size_t frames, int rate)
        : left(frames, 0.0), right(frames, 0.0), sample_rate(rate) {}

    std::size_t frames() const { return left.size(); }
    bool empty() const { return left.empty(); }

    std::vector<double>& channel(int c) { return c == 0 ? left : right; }
    const std::vector<double>& channel(int c) const { return c == 0 ? left : right; }

    void check_consistent() const {
        if (left.size() != right.size()) throw Error("stereo channel lengths differ");
    }

    /// Overlap-add `other` starting at `offset` frames. Content past the end
    /// of this buffer is dropped (track tails are truncated, not extended).
    void add(const StereoBuffer& other, std::int64_t offset);

    /// Grows (never shrinks) to at least `frames` frames, zero-padded.
    void ensure_frames(std::size_t frames);

    double peak() const;
    void scale(double factor);

    void swap_channels() { left.swap(right); }
};

}  // namespace trackgen
