#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hyst/analysis.hpp"
#include "hyst/preisach.hpp"
#include "hyst/signals.hpp"

namespace hyst {

struct CompensatorConfig {
    double k_gain = 6000.0; // integral gain, 1/s
    double dt = 1e-5;       // integration step, s
    InitMode init = InitMode::Demagnetized;
    bool subcell_interpolation = false;
};

/// Inversion-free feedforward compensator: a discrete integral loop closed
/// around an internal Preisach model. Each step reads the previous model
/// output, integrates the loop error, then advances the model:
///
///   u <- u + K*dt*(r - y*),  y* <- model(u)
///
/// With the loop error driven to zero the emitted u realizes the inverse
/// hysteresis map of the model. The explicit rectangular integration is
/// stable for K * kappa * dt < 2, kappa being the model's maximum branch
/// slope; construction records a warning when that contract is violated.
/// There is no anti-windup: references outside the reachable output range
/// saturate the model while the integrator keeps ramping.
class Compensator {
public:
    Compensator(const CompensatorConfig& cfg, std::shared_ptr<const DensityGrid> model_density);

    /// Advances one sample and returns the control value. Throws
    /// std::invalid_argument on non-finite reference, leaving state unchanged.
    double step(double r);

    double control() const { return loop_.u; }
    double model_output() const { return ystar_; }
    /// Loop error r - y* of the last step, taken after the model advanced.
    double error() const { return last_e_; }

    const PreisachState& model() const { return model_; }
    const CompensatorConfig& config() const { return cfg_; }
    /// Empty when the stability contract K*kappa*dt < 2 holds.
    const std::string& stability_warning() const { return warning_; }

private:
    CompensatorConfig cfg_;
    PreisachState model_;
    IntegralLoopCore loop_;
    double ystar_ = 0.0;
    double last_e_ = 0.0;
    std::string warning_;
};

struct LoopSample {
    double t;
    double r;
    double u;
    double ystar;
    double e;
};

/// Batch feedforward run over a uniformly sampled reference; deterministic
/// for a given configuration and signal. Throws on an empty signal.
std::vector<LoopSample> run_feedforward(const CompensatorConfig& cfg,
                                        std::shared_ptr<const DensityGrid> model_density,
                                        const SampledSignal& reference);

} // namespace hyst
