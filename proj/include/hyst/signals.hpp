#pragma once

#include <string>
#include <vector>

namespace hyst {

/// Uniformly sampled reference signal. Generators produce continuous
/// waveforms only; sample-to-sample steps are bounded by the waveform slope
/// times dt, which is what the monotone-step operator update requires.
struct SampledSignal {
    double dt = 0.0;
    std::vector<double> samples;
    std::string descriptor;

    double duration() const { return dt * static_cast<double>(samples.size()); }
};

/// a * sin(2*pi*f*t), t in [0, duration).
SampledSignal sine(double amplitude, double freq_hz, double duration, double dt);

/// Alternating constant-slope ramps between +k*peak_step and -k*peak_step for
/// k = 1..n_cycles, starting at 0. Reversal peaks grow linearly, producing
/// nested loops. The final peak must stay within the unit domain.
SampledSignal zigzag_growing(double peak_step, int n_cycles, double slope, double dt);

/// Linear chirp a * sin(theta(t)), theta = 2*pi*(f0*t + (f1-f0)*t^2/(2*T));
/// instantaneous frequency runs linearly from f0 to f1 over the duration.
SampledSignal chirp_linear(double amplitude, double f0_hz, double f1_hz,
                           double duration, double dt);

/// Instantaneous frequency of the linear chirp at time t.
double chirp_instantaneous_freq(double f0_hz, double f1_hz, double duration, double t);

} // namespace hyst
