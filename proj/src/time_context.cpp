#include "trackgen/time_context.hpp"

#include <cmath>

namespace trackgen {

namespace {

void check_tempo(double bpm, int sample_rate) {
    if (!(bpm > 0.0)) throw UserError("bpm must be positive");
    if (sample_rate <= 0) throw UserError("sample_rate must be positive");
}

}  // namespace

std::int64_t samples_per_beat(double bpm, int sample_rate) {
    check_tempo(bpm, sample_rate);
    const long double exact = 60.0L * sample_rate / static_cast<long double>(bpm);
    return static_cast<std::int64_t>(std::floor(exact));
}

std::int64_t samples_per_bar(double bpm, int sample_rate) {
    check_tempo(bpm, sample_rate);
    const long double exact = 4.0L * 60.0L * sample_rate / static_cast<long double>(bpm);
    return static_cast<std::int64_t>(std::floor(exact));
}

std::int64_t bar_to_sample_index(const Rational& position_bars, const TimeContext& ctx) {
    ctx.validate();
    if (position_bars < Rational(0)) throw UserError("bar position must be nonnegative");
    const long double exact = static_cast<long double>(position_bars.num()) * 4.0L * 60.0L *
                              ctx.sample_rate /
                              (static_cast<long double>(position_bars.den()) * ctx.bpm);
    return static_cast<std::int64_t>(std::floor(exact));
}

std::int64_t TimeContext::samples_per_beat() const {
    return trackgen::samples_per_beat(bpm, sample_rate);
}

std::int64_t TimeContext::samples_per_bar() const {
    return trackgen::samples_per_bar(bpm, sample_rate);
}

void TimeContext::validate() const {
    check_tempo(bpm, sample_rate);
    if (beats_per_bar != 4) throw UserError("only 4/4 time is supported");
}

}  // namespace trackgen
