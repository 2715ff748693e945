#include "hyst/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include <fmt/core.h>
#include <fmt/format.h>

namespace hyst {

namespace {

constexpr std::size_t kFiniteCheckInterval = 4096;

void check_finite(double v, const char* what, std::size_t step) {
    if (!std::isfinite(v)) {
        throw NumericalError(fmt::format("non-finite {} at step {}", what, step));
    }
}

/// Collects every output_stride-th sample into the record.
class Recorder {
public:
    Recorder(ExperimentRecord& rec, int stride) : rec_(rec), stride_(stride) {}

    void push(double t, double r, double u, double y, double ystar, double e) {
        if (step_ % static_cast<std::size_t>(stride_) == 0) {
            rec_.t.push_back(t);
            rec_.r.push_back(r);
            rec_.u.push_back(u);
            rec_.y.push_back(y);
            rec_.ystar.push_back(ystar);
            rec_.e.push_back(e);
        }
        ++step_;
    }

private:
    ExperimentRecord& rec_;
    int stride_;
    std::size_t step_ = 0;
};

void finish_cycle_metrics(ExperimentRecord& rec, const CyclePeakTracker& tracker) {
    rec.cycle_errors = tracker.cycles();
    if (rec.cycle_errors.size() >= 5) {
        try {
            rec.error_slope_db_per_decade = slope_db_per_decade(rec.cycle_errors);
        } catch (const std::invalid_argument&) {
            // Not enough frequency span or zero errors; leave unset.
        }
    }
}

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream f(file, std::ios::binary);
    if (!f) {
        throw ConfigError(fmt::format("cannot open output file: {}", file.string()));
    }
    return f;
}

} // namespace

ExperimentRecord run_loop_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentRecord rec;
    rec.config = cfg;

    auto density = cfg.make_density();
    PreisachState plant(density, cfg.init_mode(), cfg.controller.interpolation);
    const SampledSignal sig = cfg.make_signal();

    Recorder recorder(rec, cfg.signal.output_stride);
    CyclePeakTracker tracker;
    for (std::size_t k = 0; k < sig.samples.size(); ++k) {
        const double t = static_cast<double>(k) * sig.dt;
        const double r = sig.samples[k];
        plant.apply_input(r);
        const double y = plant.output();
        const double e = r - y;
        rec.peak_abs_tracking = std::max(rec.peak_abs_tracking, std::abs(e));
        tracker.push(t, r, y);
        recorder.push(t, r, r, y, y, e);
        if (k % kFiniteCheckInterval == 0) {
            check_finite(y, "plant output", k);
        }
    }
    check_finite(plant.output(), "plant output", sig.samples.size());
    rec.peak_abs_error = rec.peak_abs_tracking;
    rec.total_steps = sig.samples.size();
    finish_cycle_metrics(rec, tracker);
    return rec;
}

ExperimentRecord run_compensation(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentRecord rec;
    rec.config = cfg;

    auto density = cfg.make_density();
    CompensatorConfig ccfg{cfg.controller.k_gain, cfg.controller.dt, cfg.init_mode(),
                           cfg.controller.interpolation};
    Compensator comp(ccfg, density);
    PreisachState plant(density, cfg.init_mode(), cfg.controller.interpolation);
    rec.stability_warning = comp.stability_warning();

    const SampledSignal sig = cfg.make_signal();
    Recorder recorder(rec, cfg.signal.output_stride);
    CyclePeakTracker tracker;
    for (std::size_t k = 0; k < sig.samples.size(); ++k) {
        const double t = static_cast<double>(k) * sig.dt;
        const double r = sig.samples[k];
        const double u = comp.step(r);
        plant.apply_input(u);
        const double y = plant.output();
        const double e = comp.error();
        rec.peak_abs_error = std::max(rec.peak_abs_error, std::abs(e));
        rec.peak_abs_tracking = std::max(rec.peak_abs_tracking, std::abs(r - y));
        tracker.push(t, r, y);
        recorder.push(t, r, u, y, comp.model_output(), e);
        if (k % kFiniteCheckInterval == 0) {
            check_finite(u, "control", k);
            check_finite(y, "plant output", k);
        }
    }
    check_finite(comp.control(), "control", sig.samples.size());
    check_finite(plant.output(), "plant output", sig.samples.size());
    rec.total_steps = sig.samples.size();
    finish_cycle_metrics(rec, tracker);
    return rec;
}

ExperimentRecord run_hysteron_demo(const ExperimentConfig& cfg) {
    ExperimentConfig demo = cfg;
    demo.mesh.n = 1; // single relay spanning the whole domain
    demo.validate();
    if (demo.signal.kind != "sine") {
        throw ConfigError("hysteron demo requires signal.kind = sine");
    }

    ExperimentRecord rec;
    rec.config = demo;

    auto density = demo.make_density();
    PreisachState relay(density, demo.init_mode(), demo.controller.interpolation);
    const SampledSignal sig = demo.make_signal();

    std::vector<double> rs;
    std::vector<double> ys;
    rs.reserve(sig.samples.size());
    ys.reserve(sig.samples.size());

    Recorder recorder(rec, demo.signal.output_stride);
    for (std::size_t k = 0; k < sig.samples.size(); ++k) {
        const double t = static_cast<double>(k) * sig.dt;
        const double r = sig.samples[k];
        relay.apply_input(r);
        const double y = relay.output();
        rs.push_back(r);
        ys.push_back(y);
        recorder.push(t, r, r, y, y, r - y);
        rec.peak_abs_tracking = std::max(rec.peak_abs_tracking, std::abs(r - y));
    }
    rec.peak_abs_error = rec.peak_abs_tracking;
    rec.total_steps = sig.samples.size();

    const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
    if (ys.empty() || *lo == *hi) {
        rec.hysteron_degenerate = true; // relay never switched, phase undefined
        return rec;
    }
    // Trim to the largest whole number of periods for a leak-free estimate.
    const double f = demo.signal.freq_hz;
    const double periods = std::floor(static_cast<double>(ys.size()) * sig.dt * f + 1e-9);
    const auto usable = static_cast<std::size_t>(std::llround(periods / (f * sig.dt)));
    if (periods < 1.0 || usable > ys.size()) {
        rec.hysteron_degenerate = true;
        return rec;
    }
    const double phase = fundamental_phase({rs.data(), usable}, {ys.data(), usable}, f, sig.dt);
    rec.hysteron_phase_deg = phase * 180.0 / std::numbers::pi;
    return rec;
}

std::vector<FrequencyResponsePoint> run_frf(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& c = cfg.controller;
    std::vector<FrequencyResponsePoint> out;
    out.reserve(static_cast<std::size_t>(c.frf_points));
    const double lmin = std::log10(c.frf_omega_min);
    const double lmax = std::log10(c.frf_omega_max);
    for (int i = 0; i < c.frf_points; ++i) {
        const double x = lmin + (lmax - lmin) * i / (c.frf_points - 1);
        const double omega = std::pow(10.0, x);
        if (c.frf_kind == "linear") {
            out.push_back(sensitivity_linear(omega, c.k_gain, c.frf_a));
        } else {
            out.push_back(sensitivity_hysteresis(omega, c.k_gain, c.frf_a, c.frf_omega0,
                                                 c.frf_delta));
        }
    }
    return out;
}

void write_trajectory_csv(const ExperimentRecord& rec, const std::filesystem::path& file) {
    auto f = open_out(file);
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "t,r,u,y,ystar,e\n");
    for (std::size_t k = 0; k < rec.t.size(); ++k) {
        fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{}\n", rec.t[k], rec.r[k],
                       rec.u[k], rec.y[k], rec.ystar[k], rec.e[k]);
        if (buf.size() > (1u << 20)) {
            f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_loop_csv(const ExperimentRecord& rec, const std::filesystem::path& file) {
    auto f = open_out(file);
    f << "u,y\n";
    for (std::size_t k = 0; k < rec.u.size(); ++k) {
        f << fmt::format("{},{}\n", rec.u[k], rec.y[k]);
    }
}

void write_inverse_map_csv(const ExperimentRecord& rec, const std::filesystem::path& file) {
    auto f = open_out(file);
    f << "r,u\n";
    for (std::size_t k = 0; k < rec.r.size(); ++k) {
        f << fmt::format("{},{}\n", rec.r[k], rec.u[k]);
    }
}

void write_error_spectrum_csv(const ExperimentRecord& rec, const std::filesystem::path& file) {
    auto f = open_out(file);
    f << "nu_hz,eps,eps_db\n";
    for (const auto& c : rec.cycle_errors) {
        const double db = c.peak_error > 0.0 ? 20.0 * std::log10(c.peak_error)
                                             : -std::numeric_limits<double>::infinity();
        f << fmt::format("{},{},{}\n", c.freq_hz, c.peak_error, db);
    }
}

void write_frf_csv(std::span<const FrequencyResponsePoint> points,
                   const std::filesystem::path& file) {
    auto f = open_out(file);
    f << "omega,mag_db,phase_deg\n";
    for (const auto& p : points) {
        const double db = p.magnitude > 0.0 ? 20.0 * std::log10(p.magnitude)
                                            : -std::numeric_limits<double>::infinity();
        f << fmt::format("{},{},{}\n", p.omega, db, p.phase * 180.0 / std::numbers::pi);
    }
}

void write_summary(const ExperimentRecord& rec, const std::filesystem::path& file) {
    auto f = open_out(file);
    f << "# metrics\n";
    f << fmt::format("total_steps = {}\n", rec.total_steps);
    f << fmt::format("recorded_samples = {}\n", rec.t.size());
    f << fmt::format("peak_abs_error = {}\n", rec.peak_abs_error);
    f << fmt::format("peak_abs_tracking = {}\n", rec.peak_abs_tracking);
    f << fmt::format("cycles = {}\n", rec.cycle_errors.size());
    if (rec.error_slope_db_per_decade) {
        f << fmt::format("error_slope_db_per_decade = {}\n", *rec.error_slope_db_per_decade);
    }
    if (rec.hysteron_phase_deg) {
        f << fmt::format("hysteron_phase_deg = {}\n", *rec.hysteron_phase_deg);
    }
    if (rec.hysteron_degenerate) {
        f << "hysteron_phase_deg = degenerate (relay never switched)\n";
    }
    if (!rec.stability_warning.empty()) {
        f << fmt::format("stability_warning = {}\n", rec.stability_warning);
    }
    f << "\n# config echo\n";
    f << rec.config.echo();
}

void write_density_csv(const DensityGrid& density, const std::filesystem::path& file) {
    auto f = open_out(file);
    f << "alpha_center,beta_center,weight\n";
    const TriangularMesh& m = density.mesh();
    for (int j = 0; j < m.n(); ++j) {
        for (int i = j; i < m.n(); ++i) {
            const CellCenter c = cell_center(m, i, j);
            f << fmt::format("{},{},{}\n", c.alpha, c.beta, density.weight(i, j));
        }
    }
}

void write_interface_csv(const PreisachState& state, const std::filesystem::path& file) {
    auto f = open_out(file);
    f << "beta,alpha\n";
    for (const Corner& c : state.interface_corners()) {
        f << fmt::format("{},{}\n", c.beta, c.alpha);
    }
}

void write_cell_dump_csv(const PreisachState& state, const std::filesystem::path& file) {
    auto f = open_out(file);
    f << "alpha_index,beta_index,weight,state\n";
    const int n = state.mesh().n();
    for (int j = 0; j < n; ++j) {
        for (int i = j; i < n; ++i) {
            f << fmt::format("{},{},{},{}\n", i, j, state.density().weight(i, j),
                             state.relay_state(i, j));
        }
    }
}

} // namespace hyst
