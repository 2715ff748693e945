#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hyst/mesh.hpp"

namespace hyst {

/// Parameters of a truncated bivariate Gaussian weight distribution over the
/// (beta, alpha) plane: mean (mu_beta, mu_alpha) and covariance entries
/// (variances var_beta, var_alpha and cross term cov).
struct GaussianParams {
    double mu_beta = -0.35;
    double mu_alpha = 0.35;
    double var_beta = 0.05;
    double var_alpha = 0.05;
    double cov = 0.0;
};

/// Nonnegative relay weight per mesh cell, normalized so that twice the total
/// mass equals the requested output range width. Immutable after
/// construction and safe to share between states.
class DensityGrid {
public:
    DensityGrid(std::shared_ptr<const TriangularMesh> mesh,
                std::vector<double> weights, double y_min, double y_max);

    const TriangularMesh& mesh() const { return *mesh_; }
    std::shared_ptr<const TriangularMesh> mesh_ptr() const { return mesh_; }

    double weight(int i, int j) const { return weights_[mesh_->cell_index(i, j)]; }
    std::span<const double> weights() const { return weights_; }

    double total_mass() const { return total_mass_; }
    /// Midpoint of the output range; the operator output is
    /// y_offset + (mass up) - (mass down).
    double y_offset() const { return y_offset_; }
    double y_min() const { return y_offset_ - total_mass_; }
    double y_max() const { return y_offset_ + total_mass_; }

    /// Sum of weights of cells i in [i_lo, i_hi) of beta column j, O(1).
    double column_mass(int j, int i_lo, int i_hi) const {
        const std::size_t base = prefix_offsets_[static_cast<std::size_t>(j)];
        return col_prefix_[base + static_cast<std::size_t>(i_hi - j)] -
               col_prefix_[base + static_cast<std::size_t>(i_lo - j)];
    }

private:
    std::shared_ptr<const TriangularMesh> mesh_;
    std::vector<double> weights_;
    std::vector<double> col_prefix_;
    std::vector<std::size_t> prefix_offsets_;
    double total_mass_;
    double y_offset_;
};

/// Equal weight per cell, normalized to the output range [y_min, y_max].
DensityGrid uniform_density(std::shared_ptr<const TriangularMesh> mesh,
                            double y_min, double y_max);

/// Gaussian weight evaluated at cell centers (triangle centroid for diagonal
/// cells) times cell area, truncated to the half-plane and normalized.
DensityGrid gaussian_density(std::shared_ptr<const TriangularMesh> mesh,
                             const GaussianParams& params,
                             double y_min, double y_max);

/// Center of cell (i, j): square-cell midpoint, or centroid of the upper
/// triangle for diagonal cells. Returns {beta, alpha}.
struct CellCenter {
    double beta;
    double alpha;
};
CellCenter cell_center(const TriangularMesh& mesh, int i, int j);

} // namespace hyst
