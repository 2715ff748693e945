#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyst/analysis.hpp"
#include "hyst/compensator.hpp"
#include "hyst/density.hpp"
#include "hyst/errors.hpp"
#include "hyst/preisach.hpp"
#include "hyst/signals.hpp"

namespace hyst {

/// Experiment description, read from a sectioned key-value file:
///
///   [mesh]        n, u_min, u_max
///   [density]     kind (uniform|gaussian), y_min, y_max,
///                 mu_beta, mu_alpha, var_beta, var_alpha, cov
///   [controller]  k, dt, init (alldown|allup|demagnetized),
///                 interpolation (on|off),
///                 frf_kind (linear|hysteresis), frf_a, frf_omega0, frf_delta,
///                 frf_omega_min, frf_omega_max, frf_points
///   [signal]      kind (sine|zigzag|chirp), amplitude, freq_hz, duration,
///                 f0_hz, f1_hz, peak_step, n_cycles, slope, output_stride
///
/// Unknown sections or keys are rejected. `output_stride` thins the series
/// kept for CSV output; metrics are always computed at full rate.
struct ExperimentConfig {
    struct Mesh {
        int n = 400;
        double u_min = -1.0;
        double u_max = 1.0;
    } mesh;

    struct Density {
        std::string kind = "uniform";
        double y_min = -1.0;
        double y_max = 1.0;
        GaussianParams gauss;
    } density;

    struct Controller {
        double k_gain = 6000.0;
        double dt = 1e-5;
        std::string init = "demagnetized";
        bool interpolation = false;
        std::string frf_kind = "linear";
        double frf_a = 1.0;
        double frf_omega0 = 1.0;
        double frf_delta = 2.5;
        double frf_omega_min = 1e-2;
        double frf_omega_max = 1e5;
        int frf_points = 241;
    } controller;

    struct Signal {
        std::string kind = "sine";
        double amplitude = 0.9;
        double freq_hz = 1.0;
        double duration = 1.0;
        double f0_hz = 0.1;
        double f1_hz = 10.0;
        double peak_step = 0.25;
        int n_cycles = 4;
        double slope = 1.0;
        int output_stride = 1;
    } signal;

    static ExperimentConfig parse_file(const std::filesystem::path& path);
    static ExperimentConfig parse_string(const std::string& text);

    /// Applies "section.key=value"; throws ConfigError on unknown keys.
    void apply_override(const std::string& assignment);

    /// Cross-field consistency checks; throws ConfigError naming the field.
    void validate() const;

    /// Canonical serialization; parse_string(echo()) reproduces the config.
    std::string echo() const;

    InitMode init_mode() const;
    SampledSignal make_signal() const;
    std::shared_ptr<const DensityGrid> make_density() const; // includes mesh
};

struct ExperimentRecord {
    // Recorded trajectory, thinned by output_stride.
    std::vector<double> t, r, u, y, ystar, e;
    // Metrics, computed at full sample rate.
    std::vector<CyclePeakError> cycle_errors;
    double peak_abs_error = 0.0;    // max |r - y*| over the loop (compensation)
    double peak_abs_tracking = 0.0; // max |r - y| against the plant
    std::optional<double> error_slope_db_per_decade;
    std::optional<double> hysteron_phase_deg;
    bool hysteron_degenerate = false;
    std::string stability_warning;
    std::size_t total_steps = 0;
    ExperimentConfig config;
};

/// Open-loop sweep: the reference drives the plant directly (u = r).
ExperimentRecord run_loop_sweep(const ExperimentConfig& cfg);

/// Full compensation chain r -> compensator -> u -> plant -> y, with plant
/// and internal model built from the same density specification.
ExperimentRecord run_compensation(const ExperimentConfig& cfg);

/// Single-relay demo (mesh forced to n = 1): open-loop sine response plus the
/// measured fundamental phase; degenerate when the relay never switches.
ExperimentRecord run_hysteron_demo(const ExperimentConfig& cfg);

/// Analytic frequency-response curve per the controller's frf settings.
std::vector<FrequencyResponsePoint> run_frf(const ExperimentConfig& cfg);

// CSV / summary emission. All numeric formatting is shortest-round-trip and
// deterministic; repeated runs of the same config produce identical bytes.
void write_trajectory_csv(const ExperimentRecord& rec, const std::filesystem::path& file);
void write_loop_csv(const ExperimentRecord& rec, const std::filesystem::path& file);
void write_inverse_map_csv(const ExperimentRecord& rec, const std::filesystem::path& file);
void write_error_spectrum_csv(const ExperimentRecord& rec, const std::filesystem::path& file);
void write_frf_csv(std::span<const FrequencyResponsePoint> points,
                   const std::filesystem::path& file);
void write_summary(const ExperimentRecord& rec, const std::filesystem::path& file);

void write_density_csv(const DensityGrid& density, const std::filesystem::path& file);
void write_interface_csv(const PreisachState& state, const std::filesystem::path& file);
void write_cell_dump_csv(const PreisachState& state, const std::filesystem::path& file);

} // namespace hyst
