#include "hyst/signals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/core.h>

namespace hyst {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_sampling(double duration, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("signal: dt must be positive");
    }
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw std::invalid_argument("signal: duration must be positive");
    }
}

std::size_t sample_count(double duration, double dt) {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

} // namespace

SampledSignal sine(double amplitude, double freq_hz, double duration, double dt) {
    check_sampling(duration, dt);
    if (!(amplitude >= 0.0) || !(freq_hz > 0.0)) {
        throw std::invalid_argument("sine: amplitude must be >= 0 and frequency > 0");
    }
    SampledSignal s;
    s.dt = dt;
    const std::size_t n = sample_count(duration, dt);
    s.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        s.samples[i] = amplitude * std::sin(kTwoPi * freq_hz * t);
    }
    s.descriptor = fmt::format("sine a={} f={}Hz T={} dt={}", amplitude, freq_hz, duration, dt);
    return s;
}

SampledSignal zigzag_growing(double peak_step, int n_cycles, double slope, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("zigzag: dt must be positive");
    }
    if (!(peak_step > 0.0) || n_cycles < 1 || !(slope > 0.0)) {
        throw std::invalid_argument("zigzag: peak_step, slope and cycle count must be positive");
    }
    const double final_peak = peak_step * n_cycles;
    if (final_peak > 1.0 + 1e-12) {
        throw std::invalid_argument("zigzag: final peak exceeds the unit domain");
    }
    SampledSignal s;
    s.dt = dt;
    const double step = slope * dt;
    double v = 0.0;
    s.samples.push_back(v);
    for (int k = 1; k <= n_cycles; ++k) {
        for (const double target : {peak_step * k, -peak_step * k}) {
            const double dir = (target > v) ? 1.0 : -1.0;
            while (dir * (target - v) > step) {
                v += dir * step;
                s.samples.push_back(v);
            }
            v = target;
            s.samples.push_back(v);
        }
    }
    s.descriptor = fmt::format("zigzag step={} cycles={} slope={} dt={}",
                               peak_step, n_cycles, slope, dt);
    return s;
}

SampledSignal chirp_linear(double amplitude, double f0_hz, double f1_hz,
                           double duration, double dt) {
    check_sampling(duration, dt);
    if (!(amplitude >= 0.0) || !(f0_hz > 0.0) || !(f1_hz >= f0_hz)) {
        throw std::invalid_argument("chirp: need amplitude >= 0 and 0 < f0 <= f1");
    }
    SampledSignal s;
    s.dt = dt;
    const std::size_t n = sample_count(duration, dt);
    s.samples.resize(n);
    const double rate = (f1_hz - f0_hz) / (2.0 * duration);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double theta = kTwoPi * (f0_hz + rate * t) * t;
        s.samples[i] = amplitude * std::sin(theta);
    }
    s.descriptor = fmt::format("chirp a={} f0={}Hz f1={}Hz T={} dt={}",
                               amplitude, f0_hz, f1_hz, duration, dt);
    return s;
}

double chirp_instantaneous_freq(double f0_hz, double f1_hz, double duration, double t) {
    return f0_hz + (f1_hz - f0_hz) * t / duration;
}

} // namespace hyst
