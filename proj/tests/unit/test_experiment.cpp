#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hyst/experiment.hpp"

using namespace hyst;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.mesh.n = 50;
    cfg.controller.k_gain = 3000.0;
    cfg.controller.dt = 1e-4;
    cfg.signal.kind = "zigzag";
    cfg.signal.peak_step = 0.3;
    cfg.signal.n_cycles = 3;
    cfg.signal.slope = 2.0;
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("open-loop sweep reproduces the convex uniform loop") {
    auto cfg = small_config();
    cfg.signal.kind = "zigzag";
    cfg.signal.peak_step = 1.0;
    cfg.signal.n_cycles = 1;
    cfg.controller.init = "alldown";
    const auto rec = run_loop_sweep(cfg);
    CHECK(rec.total_steps > 0);
    CHECK(rec.t.size() == rec.y.size());
    // Ascending branch tops out at full range.
    double y_max = -2.0;
    for (double v : rec.y) {
        y_max = std::max(y_max, v);
    }
    CHECK(y_max == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("zero-amplitude sweep is a single point") {
    auto cfg = small_config();
    cfg.signal.kind = "sine";
    cfg.signal.amplitude = 0.0;
    cfg.signal.freq_hz = 1.0;
    cfg.signal.duration = 0.01;
    cfg.controller.init = "demagnetized";
    const auto rec = run_loop_sweep(cfg);
    for (std::size_t k = 0; k < rec.u.size(); ++k) {
        CHECK(rec.u[k] == 0.0);
        CHECK(rec.y[k] == 0.0);
    }
}

TEST_CASE("compensation run tracks the reference far better than pass-through") {
    auto cfg = small_config();
    const auto comp = run_compensation(cfg);
    const auto open = run_loop_sweep(cfg);
    CHECK(comp.peak_abs_tracking < 0.5 * open.peak_abs_tracking);
    CHECK(comp.stability_warning.empty());
}

TEST_CASE("hysteron demo forces a single relay and measures a quarter-turn lag") {
    ExperimentConfig cfg;
    cfg.mesh.n = 400; // forced down to 1 by the runner
    cfg.controller.dt = 1.0 / 1024.0;
    cfg.signal.kind = "sine";
    cfg.signal.amplitude = 1.0;
    cfg.signal.freq_hz = 1.0;
    cfg.signal.duration = 4.0;
    cfg.controller.init = "alldown";
    const auto rec = run_hysteron_demo(cfg);
    CHECK(rec.config.mesh.n == 1);
    REQUIRE(rec.hysteron_phase_deg.has_value());
    CHECK(*rec.hysteron_phase_deg == doctest::Approx(-90.0).epsilon(0.03));

    // A sine that never reaches the thresholds leaves the relay parked.
    cfg.signal.amplitude = 0.5;
    const auto degenerate = run_hysteron_demo(cfg);
    CHECK(degenerate.hysteron_degenerate);
    CHECK(!degenerate.hysteron_phase_deg.has_value());
}

TEST_CASE("frf runner spans the grid with the requested curve") {
    ExperimentConfig cfg;
    cfg.controller.k_gain = 1000.0;
    cfg.controller.frf_kind = "linear";
    cfg.controller.frf_a = 0.1;
    cfg.controller.frf_omega_min = 1.0;
    cfg.controller.frf_omega_max = 1e4;
    cfg.controller.frf_points = 81;
    const auto pts = run_frf(cfg);
    REQUIRE(pts.size() == 81);
    CHECK(pts.front().omega == doctest::Approx(1.0));
    CHECK(pts.back().omega == doctest::Approx(1e4));
    // Corner frequency scales with A: |E| = 1/sqrt(2) at K*A = 100.
    double best = 1e9;
    double best_w = 0.0;
    for (const auto& p : pts) {
        if (std::abs(p.magnitude - 1.0 / std::sqrt(2.0)) < best) {
            best = std::abs(p.magnitude - 1.0 / std::sqrt(2.0));
            best_w = p.omega;
        }
    }
    CHECK(best_w == doctest::Approx(100.0).epsilon(0.1));
}

TEST_CASE("experiment outputs are deterministic byte for byte") {
    auto cfg = small_config();
    cfg.signal.output_stride = 7;
    TempDir d1("hyst_det_1");
    TempDir d2("hyst_det_2");
    for (const auto& dir : {d1.path, d2.path}) {
        const auto rec = run_compensation(cfg);
        write_trajectory_csv(rec, dir / "trajectory.csv");
        write_loop_csv(rec, dir / "loop.csv");
        write_inverse_map_csv(rec, dir / "inverse_map.csv");
        write_error_spectrum_csv(rec, dir / "error_spectrum.csv");
        write_summary(rec, dir / "summary.txt");
    }
    for (const char* name :
         {"trajectory.csv", "loop.csv", "inverse_map.csv", "error_spectrum.csv", "summary.txt"}) {
        CHECK(slurp(d1.path / name) == slurp(d2.path / name));
        CHECK(!slurp(d1.path / name).empty());
    }
}

TEST_CASE("trajectory stride thins the series without touching metrics") {
    auto cfg = small_config();
    cfg.signal.output_stride = 1;
    const auto full = run_compensation(cfg);
    cfg.signal.output_stride = 50;
    const auto thin = run_compensation(cfg);
    CHECK(thin.t.size() < full.t.size() / 40);
    CHECK(thin.peak_abs_error == full.peak_abs_error);
    CHECK(thin.cycle_errors.size() == full.cycle_errors.size());
}

TEST_CASE("state snapshot exports carry the staircase and the cells") {
    auto cfg = small_config();
    auto density = cfg.make_density();
    PreisachState s(density, InitMode::AllDown);
    s.apply_input(0.0);
    s.apply_input(0.7);
    s.apply_input(-0.3);
    TempDir dir("hyst_dump");
    write_interface_csv(s, dir.path / "interface.csv");
    write_cell_dump_csv(s, dir.path / "cells.csv");
    write_density_csv(*density, dir.path / "density.csv");

    const auto iface = slurp(dir.path / "interface.csv");
    CHECK(iface.rfind("beta,alpha\n", 0) == 0);
    // Header plus the three staircase vertices.
    CHECK(std::count(iface.begin(), iface.end(), '\n') == 4);

    const auto cells = slurp(dir.path / "cells.csv");
    const auto lines = std::count(cells.begin(), cells.end(), '\n');
    CHECK(lines == 1 + 50 * 51 / 2);
}
