#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "trackgen/audio.hpp"

namespace testutil {

/// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("trackgen_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter_++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline trackgen::StereoBuffer make_sine(double freq, double seconds, int rate, double amplitude = 1.0,
                                        bool left_only = false) {
    const auto frames = static_cast<std::size_t>(seconds * rate);
    trackgen::StereoBuffer buf(frames, rate);
    for (std::size_t i = 0; i < frames; ++i) {
        const double v = amplitude * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate);
        buf.left[i] = v;
        buf.right[i] = left_only ? 0.0 : v;
    }
    return buf;
}

inline trackgen::StereoBuffer make_noise(std::size_t frames, int rate, std::uint64_t seed,
                                         double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    trackgen::StereoBuffer buf(frames, rate);
    for (std::size_t i = 0; i < frames; ++i) {
        buf.left[i] = dist(rng);
        buf.right[i] = dist(rng);
    }
    return buf;
}

/// Single-bin DFT magnitude (normalized so a unit sine reads ~1.0).
inline double goertzel(const std::vector<double>& samples, double freq, int rate) {
    const double w = 2.0 * std::numbers::pi * freq / rate;
    const double coeff = 2.0 * std::cos(w);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (double x : samples) {
        s0 = x + coeff * s1 - s2;
        s2 = s1;
        s1 = s0;
    }
    const double power = s1 * s1 + s2 * s2 - coeff * s1 * s2;
    return 2.0 * std::sqrt(std::max(power, 0.0)) / static_cast<double>(samples.size());
}

inline double rms(const std::vector<double>& samples, std::size_t begin, std::size_t end) {
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += samples[i] * samples[i];
    return std::sqrt(sum / static_cast<double>(end - begin));
}

inline double max_abs_diff(const trackgen::StereoBuffer& a, const trackgen::StereoBuffer& b) {
    if (a.frames() != b.frames()) return 1e9;
    double m = 0.0;
    for (std::size_t i = 0; i < a.frames(); ++i) {
        m = std::max(m, std::fabs(a.left[i] - b.left[i]));
        m = std::max(m, std::fabs(a.right[i] - b.right[i]));
    }
    return m;
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

}  // namespace testutil
