#include "hyst/density.hpp"

#include <cmath>
#include <stdexcept>

namespace hyst {

DensityGrid::DensityGrid(std::shared_ptr<const TriangularMesh> mesh,
                         std::vector<double> weights, double y_min, double y_max)
    : mesh_(std::move(mesh)), weights_(std::move(weights)) {
    if (!mesh_) {
        throw std::invalid_argument("density: null mesh");
    }
    if (!(y_min < y_max) || !std::isfinite(y_min) || !std::isfinite(y_max)) {
        throw std::invalid_argument("density: degenerate output range");
    }
    if (weights_.size() != mesh_->cell_count()) {
        throw std::invalid_argument("density: weight count does not match mesh");
    }

    double raw_total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("density: weights must be finite and nonnegative");
        }
        raw_total += w;
    }
    if (raw_total <= 0.0) {
        throw std::invalid_argument("density: total weight must be positive");
    }

    // Normalize so 2 * total_mass == y_max - y_min.
    const double target = 0.5 * (y_max - y_min);
    const double s = target / raw_total;
    for (double& w : weights_) {
        w *= s;
    }

    const int n = mesh_->n();
    prefix_offsets_.resize(static_cast<std::size_t>(n));
    col_prefix_.reserve(mesh_->cell_count() + static_cast<std::size_t>(n));
    total_mass_ = 0.0;
    for (int j = 0; j < n; ++j) {
        prefix_offsets_[static_cast<std::size_t>(j)] = col_prefix_.size();
        double acc = 0.0;
        col_prefix_.push_back(0.0);
        for (int i = j; i < n; ++i) {
            acc += weights_[mesh_->cell_index(i, j)];
            col_prefix_.push_back(acc);
        }
        total_mass_ += acc;
    }
    y_offset_ = 0.5 * (y_min + y_max);
}

CellCenter cell_center(const TriangularMesh& mesh, int i, int j) {
    const double b0 = mesh.edge(j), b1 = mesh.edge(j + 1);
    const double a0 = mesh.edge(i), a1 = mesh.edge(i + 1);
    if (i == j) {
        // Upper triangle of the square, vertices (b0,a0), (b0,a1), (b1,a1).
        return {(2.0 * b0 + b1) / 3.0, (a0 + 2.0 * a1) / 3.0};
    }
    return {0.5 * (b0 + b1), 0.5 * (a0 + a1)};
}

DensityGrid uniform_density(std::shared_ptr<const TriangularMesh> mesh,
                            double y_min, double y_max) {
    if (!mesh) {
        throw std::invalid_argument("density: null mesh");
    }
    std::vector<double> w(mesh->cell_count(), 1.0);
    return DensityGrid(std::move(mesh), std::move(w), y_min, y_max);
}

DensityGrid gaussian_density(std::shared_ptr<const TriangularMesh> mesh,
                             const GaussianParams& p,
                             double y_min, double y_max) {
    if (!mesh) {
        throw std::invalid_argument("density: null mesh");
    }
    const double det = p.var_beta * p.var_alpha - p.cov * p.cov;
    if (!(p.var_beta > 0.0) || !(p.var_alpha > 0.0) || !(det > 0.0)) {
        throw std::invalid_argument("density: covariance must be positive definite");
    }
    // Inverse covariance; the normalization constant cancels when the grid is
    // rescaled to the output range, so only the exponent matters.
    const double ibb = p.var_alpha / det;
    const double iaa = p.var_beta / det;
    const double iba = -p.cov / det;

    const TriangularMesh& m = *mesh;
    const int n = m.n();
    std::vector<double> w(m.cell_count());
    const double full_area = m.delta() * m.delta();
    for (int j = 0; j < n; ++j) {
        for (int i = j; i < n; ++i) {
            const CellCenter c = cell_center(m, i, j);
            const double db = c.beta - p.mu_beta;
            const double da = c.alpha - p.mu_alpha;
            const double q = db * db * ibb + da * da * iaa + 2.0 * db * da * iba;
            const double area = (i == j) ? 0.5 * full_area : full_area;
            w[m.cell_index(i, j)] = std::exp(-0.5 * q) * area;
        }
    }
    return DensityGrid(std::move(mesh), std::move(w), y_min, y_max);
}

} // namespace hyst
