#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hyst/density.hpp"
#include "hyst/mesh.hpp"

namespace hyst {

/// Initial relay configuration. Demagnetized places the interface on the
/// anti-diagonal through the domain midpoint; cells bisected by that line
/// start in a neutral zero state, so any density that is symmetric under
/// point reflection of the half-plane gives an exact zero output.
enum class InitMode { AllDown, AllUp, Demagnetized };

struct Corner {
    double beta;
    double alpha;
};

/// Discretized Preisach operator with incremental output updates.
///
/// Memory is a staircase interface stored as one level per beta column:
/// cells i in [j, level[j]) of column j are in the up state. A relay in cell
/// (i, j) switches up once the input reaches the upper alpha edge of its
/// cell and down once the input falls to the lower beta edge, so a monotone
/// input step of any size is processed exactly; non-monotone signals must be
/// sampled finely enough that each step is monotone.
///
/// Inputs outside the mesh domain are clamped; no relays exist out there, so
/// clamping coincides with saturation. With sub-cell interpolation enabled
/// the output additionally carries a fractional contribution of the band of
/// cells currently being swept, proportional to the sub-cell position of the
/// input. The interpolation term is recomputed from the quantized memory
/// whenever the sweep direction changes, which can step the output by up to
/// one band mass at a reversal; it smooths monotone branches, it is not a
/// smoother of the operator itself.
///
/// Mutable state machine: advance from one thread at a time. Mesh and
/// density are immutable and shared.
class PreisachState {
public:
    PreisachState(std::shared_ptr<const DensityGrid> density, InitMode mode,
                  bool subcell_interpolation = false);

    /// Advances the operator to the (clamped) input and returns the output
    /// change. Throws std::invalid_argument on non-finite input, leaving the
    /// state untouched.
    double apply_input(double u_new);

    double output() const { return y_ + corr_; }
    double last_input() const { return u_prev_; }

    /// Full summation over all cells; reference path for the running output.
    double direct_output() const;

    /// Relay state of cell (i, j): +1 up, -1 down, 0 neutral (virgin).
    int relay_state(int i, int j) const;

    /// Staircase polyline, beta increasing, alpha non-increasing; first point
    /// on the left domain boundary, last point on the diagonal. A saturated
    /// all-down state yields the single degenerate corner (u_min, u_min).
    std::vector<Corner> interface_corners() const;

    const DensityGrid& density() const { return *density_; }
    const TriangularMesh& mesh() const { return *mesh_; }
    std::shared_ptr<const DensityGrid> density_ptr() const { return density_; }
    bool interpolation_enabled() const { return interp_; }

    /// Throws std::logic_error if the staircase invariant is broken.
    void validate() const;

private:
    double ascend(int a);
    double descend(int b);
    void refresh_correction();
    double band_mass_ascending(int row) const;
    double band_mass_descending(int col) const;

    std::shared_ptr<const DensityGrid> density_;
    const TriangularMesh* mesh_;
    int n_;
    std::vector<int32_t> levels_;
    std::vector<uint8_t> virgin_;
    int prefix_ = 0;     // columns [0, prefix_) are nonempty
    int virgin_hi_ = 0;  // virgin flags only below this column
    int virgin_count_ = 0;
    double u_prev_ = 0.0;
    double y_ = 0.0;
    double corr_ = 0.0;
    int last_dir_ = 0;
    bool interp_ = false;
    uint64_t version_ = 0;

    // Band-mass cache for the interpolation mode: valid while the quantized
    // memory and the swept band stay the same.
    mutable struct {
        int dir = 0;
        int idx = -1;
        uint64_t version = ~uint64_t{0};
        double mass = 0.0;
    } band_cache_;
};

/// Spec-shaped constructor; throws if the density was built on another mesh.
PreisachState init_state(const std::shared_ptr<const TriangularMesh>& mesh,
                         std::shared_ptr<const DensityGrid> density, InitMode mode,
                         bool subcell_interpolation = false);

} // namespace hyst
