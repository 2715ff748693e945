#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/core.h>

#include "hyst/experiment.hpp"

namespace hyst {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double to_double(const std::string& section, const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty()) {
        throw ConfigError(fmt::format("{}.{}: not a number: '{}'", section, key, v));
    }
    return x;
}

int to_int(const std::string& section, const std::string& key, const std::string& v) {
    char* end = nullptr;
    errno = 0;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty()) {
        throw ConfigError(fmt::format("{}.{}: not an integer: '{}'", section, key, v));
    }
    if (errno == ERANGE || x < std::numeric_limits<int>::min() ||
        x > std::numeric_limits<int>::max()) {
        throw ConfigError(fmt::format("{}.{}: integer out of range: '{}'", section, key, v));
    }
    return static_cast<int>(x);
}

bool to_bool(const std::string& section, const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError(fmt::format("{}.{}: expected on/off: '{}'", section, key, v));
}

void apply_key(ExperimentConfig& c, const std::string& sec, const std::string& key,
               const std::string& val) {
    if (sec == "mesh") {
        if (key == "n") c.mesh.n = to_int(sec, key, val);
        else if (key == "u_min") c.mesh.u_min = to_double(sec, key, val);
        else if (key == "u_max") c.mesh.u_max = to_double(sec, key, val);
        else throw ConfigError(fmt::format("unknown key: {}.{}", sec, key));
    } else if (sec == "density") {
        if (key == "kind") c.density.kind = val;
        else if (key == "y_min") c.density.y_min = to_double(sec, key, val);
        else if (key == "y_max") c.density.y_max = to_double(sec, key, val);
        else if (key == "mu_beta") c.density.gauss.mu_beta = to_double(sec, key, val);
        else if (key == "mu_alpha") c.density.gauss.mu_alpha = to_double(sec, key, val);
        else if (key == "var_beta") c.density.gauss.var_beta = to_double(sec, key, val);
        else if (key == "var_alpha") c.density.gauss.var_alpha = to_double(sec, key, val);
        else if (key == "cov") c.density.gauss.cov = to_double(sec, key, val);
        else throw ConfigError(fmt::format("unknown key: {}.{}", sec, key));
    } else if (sec == "controller") {
        if (key == "k") c.controller.k_gain = to_double(sec, key, val);
        else if (key == "dt") c.controller.dt = to_double(sec, key, val);
        else if (key == "init") c.controller.init = val;
        else if (key == "interpolation") c.controller.interpolation = to_bool(sec, key, val);
        else if (key == "frf_kind") c.controller.frf_kind = val;
        else if (key == "frf_a") c.controller.frf_a = to_double(sec, key, val);
        else if (key == "frf_omega0") c.controller.frf_omega0 = to_double(sec, key, val);
        else if (key == "frf_delta") c.controller.frf_delta = to_double(sec, key, val);
        else if (key == "frf_omega_min") c.controller.frf_omega_min = to_double(sec, key, val);
        else if (key == "frf_omega_max") c.controller.frf_omega_max = to_double(sec, key, val);
        else if (key == "frf_points") c.controller.frf_points = to_int(sec, key, val);
        else throw ConfigError(fmt::format("unknown key: {}.{}", sec, key));
    } else if (sec == "signal") {
        if (key == "kind") c.signal.kind = val;
        else if (key == "amplitude") c.signal.amplitude = to_double(sec, key, val);
        else if (key == "freq_hz") c.signal.freq_hz = to_double(sec, key, val);
        else if (key == "duration") c.signal.duration = to_double(sec, key, val);
        else if (key == "f0_hz") c.signal.f0_hz = to_double(sec, key, val);
        else if (key == "f1_hz") c.signal.f1_hz = to_double(sec, key, val);
        else if (key == "peak_step") c.signal.peak_step = to_double(sec, key, val);
        else if (key == "n_cycles") c.signal.n_cycles = to_int(sec, key, val);
        else if (key == "slope") c.signal.slope = to_double(sec, key, val);
        else if (key == "output_stride") c.signal.output_stride = to_int(sec, key, val);
        else throw ConfigError(fmt::format("unknown key: {}.{}", sec, key));
    } else {
        throw ConfigError(fmt::format("unknown section: [{}]", sec));
    }
}

} // namespace

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(fmt::format("line {}: malformed section header", lineno));
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("line {}: expected key = value", lineno));
        }
        if (section.empty()) {
            throw ConfigError(fmt::format("line {}: key outside any section", lineno));
        }
        apply_key(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError(fmt::format("cannot open config file: {}", path.string()));
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_string(ss.str());
}

void ExperimentConfig::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError(fmt::format("override must be section.key=value: '{}'", assignment));
    }
    const std::string path = trim(assignment.substr(0, eq));
    const auto dot = path.find('.');
    if (dot == std::string::npos) {
        throw ConfigError(fmt::format("override must be section.key=value: '{}'", assignment));
    }
    apply_key(*this, path.substr(0, dot), path.substr(dot + 1), trim(assignment.substr(eq + 1)));
}

void ExperimentConfig::validate() const {
    if (mesh.n < 1 || mesh.n > 10000) {
        throw ConfigError("mesh.n: must be in [1, 10000]");
    }
    if (!std::isfinite(mesh.u_min) || !std::isfinite(mesh.u_max) || !(mesh.u_min < mesh.u_max)) {
        throw ConfigError("mesh.u_min/u_max: need finite u_min < u_max");
    }
    if (density.kind != "uniform" && density.kind != "gaussian") {
        throw ConfigError(fmt::format("density.kind: unknown kind '{}'", density.kind));
    }
    if (!(density.y_min < density.y_max)) {
        throw ConfigError("density.y_min/y_max: degenerate output range");
    }
    if (density.kind == "gaussian") {
        const auto& g = density.gauss;
        if (!(g.var_beta > 0.0) || !(g.var_alpha > 0.0) ||
            !(g.var_beta * g.var_alpha - g.cov * g.cov > 0.0)) {
            throw ConfigError("density: covariance must be positive definite");
        }
    }
    if (!(controller.k_gain > 0.0) || !(controller.dt > 0.0)) {
        throw ConfigError("controller.k/dt: must be positive");
    }
    if (controller.init != "alldown" && controller.init != "allup" &&
        controller.init != "demagnetized") {
        throw ConfigError(fmt::format("controller.init: unknown mode '{}'", controller.init));
    }
    if (controller.frf_kind != "linear" && controller.frf_kind != "hysteresis") {
        throw ConfigError(fmt::format("controller.frf_kind: unknown kind '{}'",
                                      controller.frf_kind));
    }
    if (!(controller.frf_omega_min > 0.0) ||
        !(controller.frf_omega_min < controller.frf_omega_max) || controller.frf_points < 2) {
        throw ConfigError("controller.frf_*: need 0 < omega_min < omega_max and >= 2 points");
    }
    if (!(controller.frf_a > 0.0) || !(controller.frf_omega0 > 0.0) ||
        !(controller.frf_delta > 1.0)) {
        throw ConfigError("controller.frf_*: need frf_a > 0, frf_omega0 > 0, frf_delta > 1");
    }

    if (signal.kind != "sine" && signal.kind != "zigzag" && signal.kind != "chirp") {
        throw ConfigError(fmt::format("signal.kind: unknown kind '{}'", signal.kind));
    }
    if (signal.output_stride < 1) {
        throw ConfigError("signal.output_stride: must be >= 1");
    }
    // Reference values must stay inside the reachable output range.
    const double reach_lo = density.y_min;
    const double reach_hi = density.y_max;
    if (signal.kind == "sine" || signal.kind == "chirp") {
        if (!(signal.amplitude >= 0.0)) {
            throw ConfigError("signal.amplitude: must be >= 0");
        }
        if (-signal.amplitude < reach_lo || signal.amplitude > reach_hi) {
            throw ConfigError("signal.amplitude: exceeds the reachable output range");
        }
        if (!(signal.duration > 0.0)) {
            throw ConfigError("signal.duration: must be positive");
        }
    }
    if (signal.kind == "sine" && !(signal.freq_hz > 0.0)) {
        throw ConfigError("signal.freq_hz: must be positive");
    }
    if (signal.kind == "chirp" && (!(signal.f0_hz > 0.0) || !(signal.f1_hz >= signal.f0_hz))) {
        throw ConfigError("signal.f0_hz/f1_hz: need 0 < f0 <= f1");
    }
    if (signal.kind == "zigzag") {
        if (!(signal.peak_step > 0.0) || signal.n_cycles < 1 || !(signal.slope > 0.0)) {
            throw ConfigError("signal: zigzag needs positive peak_step, slope, n_cycles");
        }
        const double peak = signal.peak_step * signal.n_cycles;
        if (-peak < reach_lo || peak > reach_hi) {
            throw ConfigError("signal: zigzag final peak exceeds the reachable output range");
        }
    }
}

InitMode ExperimentConfig::init_mode() const {
    if (controller.init == "alldown") return InitMode::AllDown;
    if (controller.init == "allup") return InitMode::AllUp;
    return InitMode::Demagnetized;
}

SampledSignal ExperimentConfig::make_signal() const {
    if (signal.kind == "sine") {
        return sine(signal.amplitude, signal.freq_hz, signal.duration, controller.dt);
    }
    if (signal.kind == "chirp") {
        return chirp_linear(signal.amplitude, signal.f0_hz, signal.f1_hz, signal.duration,
                            controller.dt);
    }
    return zigzag_growing(signal.peak_step, signal.n_cycles, signal.slope, controller.dt);
}

std::shared_ptr<const DensityGrid> ExperimentConfig::make_density() const {
    auto m = std::make_shared<const TriangularMesh>(build_mesh(mesh.n, mesh.u_min, mesh.u_max));
    if (density.kind == "gaussian") {
        return std::make_shared<const DensityGrid>(
            gaussian_density(m, density.gauss, density.y_min, density.y_max));
    }
    return std::make_shared<const DensityGrid>(
        uniform_density(m, density.y_min, density.y_max));
}

std::string ExperimentConfig::echo() const {
    return fmt::format(
        "[mesh]\n"
        "n = {}\n"
        "u_min = {}\n"
        "u_max = {}\n"
        "\n[density]\n"
        "kind = {}\n"
        "y_min = {}\n"
        "y_max = {}\n"
        "mu_beta = {}\n"
        "mu_alpha = {}\n"
        "var_beta = {}\n"
        "var_alpha = {}\n"
        "cov = {}\n"
        "\n[controller]\n"
        "k = {}\n"
        "dt = {}\n"
        "init = {}\n"
        "interpolation = {}\n"
        "frf_kind = {}\n"
        "frf_a = {}\n"
        "frf_omega0 = {}\n"
        "frf_delta = {}\n"
        "frf_omega_min = {}\n"
        "frf_omega_max = {}\n"
        "frf_points = {}\n"
        "\n[signal]\n"
        "kind = {}\n"
        "amplitude = {}\n"
        "freq_hz = {}\n"
        "duration = {}\n"
        "f0_hz = {}\n"
        "f1_hz = {}\n"
        "peak_step = {}\n"
        "n_cycles = {}\n"
        "slope = {}\n"
        "output_stride = {}\n",
        mesh.n, mesh.u_min, mesh.u_max, density.kind, density.y_min, density.y_max,
        density.gauss.mu_beta, density.gauss.mu_alpha, density.gauss.var_beta,
        density.gauss.var_alpha, density.gauss.cov, controller.k_gain, controller.dt,
        controller.init, controller.interpolation ? "on" : "off", controller.frf_kind,
        controller.frf_a, controller.frf_omega0, controller.frf_delta,
        controller.frf_omega_min, controller.frf_omega_max, controller.frf_points,
        signal.kind, signal.amplitude, signal.freq_hz, signal.duration, signal.f0_hz,
        signal.f1_hz, signal.peak_step, signal.n_cycles, signal.slope, signal.output_stride);
}

} // namespace hyst
