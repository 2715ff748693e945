#include "hyst/compensator.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace hyst {

Compensator::Compensator(const CompensatorConfig& cfg,
                         std::shared_ptr<const DensityGrid> model_density)
    : cfg_(cfg),
      model_(std::move(model_density), cfg.init, cfg.subcell_interpolation),
      loop_{cfg.k_gain, cfg.dt, model_.last_input()} {
    if (!(cfg.k_gain > 0.0) || !(cfg.dt > 0.0)) {
        throw std::invalid_argument("compensator: K and dt must be positive");
    }
    const double kappa = max_branch_slope(model_.density());
    const double margin = cfg.k_gain * kappa * cfg.dt;
    if (margin >= 2.0) {
        warning_ = fmt::format(
            "stability contract violated: K*kappa*dt = {:.3g} >= 2 (kappa = {:.3g})",
            margin, kappa);
    }
    ystar_ = model_.output();
}

double Compensator::step(double r) {
    if (!std::isfinite(r)) {
        throw std::invalid_argument("compensator: reference must be finite");
    }
    const double u = loop_.advance(r, ystar_);
    model_.apply_input(u);
    ystar_ = model_.output();
    last_e_ = r - ystar_;
    return u;
}

std::vector<LoopSample> run_feedforward(const CompensatorConfig& cfg,
                                        std::shared_ptr<const DensityGrid> model_density,
                                        const SampledSignal& reference) {
    if (reference.samples.empty()) {
        throw std::invalid_argument("run_feedforward: empty reference signal");
    }
    Compensator comp(cfg, std::move(model_density));
    std::vector<LoopSample> out;
    out.reserve(reference.samples.size());
    for (std::size_t k = 0; k < reference.samples.size(); ++k) {
        const double t = static_cast<double>(k) * reference.dt;
        const double r = reference.samples[k];
        const double u = comp.step(r);
        out.push_back({t, r, u, comp.model_output(), comp.error()});
    }
    return out;
}

} // namespace hyst
