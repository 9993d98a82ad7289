#include "trackgen/audio.hpp"

#include <algorithm>
#include <cmath>

namespace trackgen {

void StereoBuffer::add(const StereoBuffer& other, std::int64_t offset) {
    check_consistent();
    other.check_consistent();
    if (offset < 0) throw Error("negative placement offset");
    const std::int64_t n = static_cast<std::int64_t>(frames());
    const std::int64_t m = static_cast<std::int64_t>(other.frames());
    const std::int64_t count = std::min(m, n - offset);
    for (std::int64_t i = 0; i < count; ++i) {
        left[static_cast<std::size_t>(offset + i)] += other.left[static_cast<std::size_t>(i)];
        right[static_cast<std::size_t>(offset + i)] += other.right[static_cast<std::size_t>(i)];
    }
}

void StereoBuffer::ensure_frames(std::size_t n) {
    if (frames() < n) {
        left.resize(n, 0.0);
        right.resize(n, 0.0);
    }
}

double StereoBuffer::peak() const {
    double p = 0.0;
    for (double v : left) p = std::max(p, std::fabs(v));
    for (double v : right) p = std::max(p, std::fabs(v));
    return p;
}

void StereoBuffer::scale(double factor) {
    for (double& v : left) v *= factor;
    for (double& v : right) v *= factor;
}

}  // namespace trackgen
