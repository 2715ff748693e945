#include "hyst/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyst {

namespace {

using cplx = std::complex<double>;

FrequencyResponsePoint to_point(double omega, cplx h) {
    return {omega, std::abs(h), std::arg(h)};
}

cplx lag_value(double omega, double omega0, double delta) {
    return cplx(1.0, omega / (delta * omega0)) / cplx(1.0, omega * delta / omega0);
}

} // namespace

FrequencyResponsePoint sensitivity_linear(double omega, double k_gain, double a_gain) {
    if (!(omega >= 0.0) || !(k_gain > 0.0) || !(a_gain > 0.0)) {
        throw std::invalid_argument("sensitivity_linear: need omega >= 0, K > 0, A > 0");
    }
    if (omega == 0.0) {
        return {0.0, 0.0, 0.0};
    }
    const cplx jw(0.0, omega);
    return to_point(omega, jw / (jw + k_gain * a_gain));
}

FrequencyResponsePoint lag_response(double omega, double omega0, double delta) {
    if (!(omega >= 0.0) || !(omega0 > 0.0) || !(delta > 1.0)) {
        throw std::invalid_argument("lag_response: need omega >= 0, omega0 > 0, delta > 1");
    }
    return to_point(omega, lag_value(omega, omega0, delta));
}

FrequencyResponsePoint lag_response(double omega, const LagApproximation& lag) {
    return lag_response(omega, lag.omega0, lag.delta);
}

FrequencyResponsePoint sensitivity_hysteresis(double omega, double k_gain, double a_gain,
                                              double omega0, double delta) {
    if (!(omega >= 0.0) || !(k_gain > 0.0) || !(a_gain > 0.0) || !(omega0 > 0.0) ||
        !(delta > 1.0)) {
        throw std::invalid_argument("sensitivity_hysteresis: invalid parameters");
    }
    if (omega == 0.0) {
        return {0.0, 0.0, 0.0}; // integral action rejects any steady bias
    }
    const cplx jw(0.0, omega);
    const cplx loop = (k_gain * a_gain / jw) * lag_value(omega, omega0, delta);
    return to_point(omega, 1.0 / (1.0 + loop));
}

FrequencyResponsePoint sensitivity_hysteresis(double omega, double k_gain,
                                              const LagApproximation& lag) {
    return sensitivity_hysteresis(omega, k_gain, lag.a_gain, lag.omega0, lag.delta);
}

void CyclePeakTracker::push(double t, double r, double y) {
    double boundary_time = 0.0;
    bool boundary = false;
    if (first_sample_) {
        first_sample_ = false;
        if (r == 0.0) {
            // A reference starting exactly at zero opens the first cycle.
            boundary = true;
            boundary_time = t;
        }
    } else if (prev_r_ < 0.0 && r >= 0.0) {
        boundary = true;
        boundary_time = prev_t_ + (t - prev_t_) * (0.0 - prev_r_) / (r - prev_r_);
    }

    if (boundary) {
        if (in_cycle_ && samples_in_cycle_ > 0 && boundary_time > cycle_start_) {
            cycles_.push_back({1.0 / (boundary_time - cycle_start_), peak_});
        }
        in_cycle_ = true;
        cycle_start_ = boundary_time;
        peak_ = 0.0;
        samples_in_cycle_ = 0;
    }
    if (in_cycle_) {
        peak_ = std::max(peak_, std::abs(r - y));
        ++samples_in_cycle_;
    }
    prev_t_ = t;
    prev_r_ = r;
}

std::vector<CycleBoundary> zero_up_crossings(std::span<const double> t,
                                             std::span<const double> r) {
    if (t.size() != r.size()) {
        throw std::invalid_argument("zero_up_crossings: series length mismatch");
    }
    std::vector<CycleBoundary> out;
    if (!r.empty() && r[0] == 0.0) {
        out.push_back({0, t[0]});
    }
    for (std::size_t k = 1; k < r.size(); ++k) {
        if (r[k - 1] < 0.0 && r[k] >= 0.0) {
            const double tb = t[k - 1] + (t[k] - t[k - 1]) * (0.0 - r[k - 1]) / (r[k] - r[k - 1]);
            out.push_back({k, tb});
        }
    }
    return out;
}

std::vector<CyclePeakError> per_cycle_peak_error(std::span<const double> t,
                                                 std::span<const double> r,
                                                 std::span<const double> y) {
    if (t.size() != r.size() || t.size() != y.size()) {
        throw std::invalid_argument("per_cycle_peak_error: series length mismatch");
    }
    CyclePeakTracker tracker;
    for (std::size_t k = 0; k < t.size(); ++k) {
        tracker.push(t[k], r[k], y[k]);
    }
    if (tracker.cycles().empty()) {
        throw std::invalid_argument("per_cycle_peak_error: series holds less than one full cycle");
    }
    return tracker.cycles();
}

double slope_db_per_decade(std::span<const CyclePeakError> points) {
    if (points.size() < 5) {
        throw std::invalid_argument("slope regression: need at least 5 points");
    }
    double lo = points[0].freq_hz;
    double hi = points[0].freq_hz;
    for (const auto& p : points) {
        if (!(p.peak_error > 0.0)) {
            throw std::invalid_argument("slope regression: errors must be strictly positive");
        }
        lo = std::min(lo, p.freq_hz);
        hi = std::max(hi, p.freq_hz);
    }
    if (!(hi >= 10.0 * lo)) {
        throw std::invalid_argument("slope regression: points must span at least one decade");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(points.size());
    for (const auto& p : points) {
        const double x = std::log10(p.freq_hz);
        const double yv = 20.0 * std::log10(p.peak_error);
        sx += x;
        sy += yv;
        sxx += x * x;
        sxy += x * yv;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::complex<double> fundamental_component(std::span<const double> samples,
                                           double freq_hz, double dt) {
    if (samples.empty() || !(freq_hz > 0.0) || !(dt > 0.0)) {
        throw std::invalid_argument("fundamental_component: invalid window");
    }
    const double periods = static_cast<double>(samples.size()) * dt * freq_hz;
    const double rounded = std::round(periods);
    if (rounded < 1.0 || std::abs(periods - rounded) > 1e-6 * std::max(1.0, periods)) {
        throw std::invalid_argument(
            "fundamental_component: window must hold an integer number of periods");
    }
    const double w = 2.0 * std::numbers::pi * freq_hz;
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double t = static_cast<double>(k) * dt;
        acc += samples[k] * std::polar(1.0, -w * t);
    }
    return acc * (2.0 / static_cast<double>(samples.size()));
}

double fundamental_phase(std::span<const double> input, std::span<const double> output,
                         double freq_hz, double dt) {
    if (input.size() != output.size()) {
        throw std::invalid_argument("fundamental_phase: series length mismatch");
    }
    const cplx in = fundamental_component(input, freq_hz, dt);
    const cplx out = fundamental_component(output, freq_hz, dt);
    if (std::abs(in) == 0.0 || std::abs(out) == 0.0) {
        throw std::invalid_argument("fundamental_phase: degenerate fundamental");
    }
    return std::arg(out * std::conj(in));
}

double max_branch_slope(const DensityGrid& density) {
    const TriangularMesh& mesh = density.mesh();
    const int n = mesh.n();
    const double delta = mesh.delta();
    double kappa = 0.0;
    // Ascending saturation sweep: crossing the upper edge of alpha row i
    // flips that whole row.
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j <= i; ++j) {
            row += density.weight(i, j);
        }
        kappa = std::max(kappa, 2.0 * row / delta);
    }
    // Descending sweep: crossing the lower edge of beta column j drops the
    // whole column.
    for (int j = 0; j < n; ++j) {
        kappa = std::max(kappa, 2.0 * density.column_mass(j, j, n) / delta);
    }
    return kappa;
}

double measured_static_loop_sensitivity(double k_gain, double a_gain, double omega,
                                        int settle_periods, int measure_periods) {
    if (!(omega > 0.0) || !(k_gain > 0.0) || !(a_gain > 0.0) || settle_periods < 1 ||
        measure_periods < 1) {
        throw std::invalid_argument("measured sensitivity: invalid parameters");
    }
    const double period = 2.0 * std::numbers::pi / omega;
    const double dt_target = std::min(period / 4096.0, 0.02 / (k_gain * a_gain));
    const auto steps_per_period = static_cast<std::size_t>(std::ceil(period / dt_target));
    const double dt = period / static_cast<double>(steps_per_period);

    const std::size_t warm = steps_per_period * static_cast<std::size_t>(settle_periods);
    const std::size_t meas = steps_per_period * static_cast<std::size_t>(measure_periods);

    IntegralLoopCore loop{k_gain, dt, 0.0};
    double ystar = 0.0;
    std::vector<double> e_win(meas);
    std::vector<double> r_win(meas);
    for (std::size_t k = 0; k < warm + meas; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double r = std::sin(omega * t);
        ystar = a_gain * loop.advance(r, ystar);
        if (k >= warm) {
            e_win[k - warm] = r - ystar;
            r_win[k - warm] = r;
        }
    }
    const double freq_hz = omega / (2.0 * std::numbers::pi);
    return std::abs(fundamental_component(e_win, freq_hz, dt)) /
           std::abs(fundamental_component(r_win, freq_hz, dt));
}

} // namespace hyst
