#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "hyst/density.hpp"

namespace hyst {

struct FrequencyResponsePoint {
    double omega = 0.0;     // rad/s
    double magnitude = 0.0; // dimensionless, >= 0
    double phase = 0.0;     // rad, in (-pi, pi]
};

/// Closed-loop error transfer of the integral loop around a static gain A:
/// E(jw) = jw / (jw + K*A). Vanishes at DC, corner at w = K*A.
FrequencyResponsePoint sensitivity_linear(double omega, double k_gain, double a_gain);

/// First-order-lag description of the hysteresis response to a harmonic
/// input: center frequency of maximum lag, bandwidth-scaling factor
/// (delta > 1, lag orientation), effective gain and memory-dependent output
/// bias. The phase of the lag stands in for the state-varying shift.
struct LagApproximation {
    double omega0 = 1.0; // rad/s
    double delta = 2.5;
    double a_gain = 1.0;
    double y_bias = 0.0;
};

/// First-order lag surrogate of the hysteresis response,
/// F(jw) = (jw/(delta*w0) + 1) / (jw*delta/w0 + 1); unit DC gain, high-
/// frequency gain 1/delta^2, phase strictly in (-pi/2, 0) for w > 0.
FrequencyResponsePoint lag_response(double omega, double omega0, double delta);
FrequencyResponsePoint lag_response(double omega, const LagApproximation& lag);

/// Closed-loop error transfer with the lag surrogate in the loop:
/// E(jw) = 1 / (1 + (K*A/jw) * F(jw)). Same shape for reference and
/// memory-bias injection.
FrequencyResponsePoint sensitivity_hysteresis(double omega, double k_gain, double a_gain,
                                              double omega0, double delta);
FrequencyResponsePoint sensitivity_hysteresis(double omega, double k_gain,
                                              const LagApproximation& lag);

struct CycleBoundary {
    std::size_t index; // first sample of the new cycle
    double time;       // interpolated zero-up-crossing instant
};

struct CyclePeakError {
    double freq_hz;
    double peak_error;
};

/// Streaming per-cycle peak tracking error. Cycles are delimited by
/// zero-up-crossings of the reference; each closed cycle reports the peak
/// |r - y| and the reciprocal cycle duration as its frequency (for a linear
/// chirp this equals the instantaneous frequency at the cycle midpoint).
class CyclePeakTracker {
public:
    void push(double t, double r, double y);
    const std::vector<CyclePeakError>& cycles() const { return cycles_; }

private:
    std::vector<CyclePeakError> cycles_;
    bool first_sample_ = true;
    bool in_cycle_ = false;
    double prev_t_ = 0.0;
    double prev_r_ = 0.0;
    double cycle_start_ = 0.0;
    double peak_ = 0.0;
    std::size_t samples_in_cycle_ = 0;
};

std::vector<CycleBoundary> zero_up_crossings(std::span<const double> t,
                                             std::span<const double> r);

/// Batch form; throws std::invalid_argument when the series holds less than
/// one full cycle.
std::vector<CyclePeakError> per_cycle_peak_error(std::span<const double> t,
                                                 std::span<const double> r,
                                                 std::span<const double> y);

/// Least-squares slope of 20*log10(eps) against log10(nu). Requires at least
/// 5 points spanning a decade, all eps strictly positive.
double slope_db_per_decade(std::span<const CyclePeakError> points);

/// Fundamental Fourier component (single-bin correlation), amplitude-phase as
/// a complex number. The window must hold an integer number of periods.
std::complex<double> fundamental_component(std::span<const double> samples,
                                           double freq_hz, double dt);

/// Phase of the output fundamental relative to the input fundamental, rad in
/// (-pi, pi].
double fundamental_phase(std::span<const double> input, std::span<const double> output,
                         double freq_hz, double dt);

/// Largest branch slope dy/du the density can produce over one cell sweep,
/// taken over full ascending and descending saturation sweeps. This is the
/// Lipschitz bound used by the compensator stability contract.
double max_branch_slope(const DensityGrid& density);

/// Shared integrator update of the internal-model loop:
/// u <- u + K*dt*(r - y*), error taken against the previous model output.
struct IntegralLoopCore {
    double k_gain = 0.0;
    double dt = 0.0;
    double u = 0.0;

    double advance(double r, double ystar_prev) {
        u += k_gain * dt * (r - ystar_prev);
        return u;
    }
};

/// Simulated |e|/|r| of the integral loop closed around a static gain model
/// y* = A*u, measured by fundamental correlation after the transient has
/// settled. Cross-check for sensitivity_linear.
double measured_static_loop_sensitivity(double k_gain, double a_gain, double omega,
                                        int settle_periods = 3, int measure_periods = 4);

} // namespace hyst
