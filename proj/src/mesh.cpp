#include "hyst/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyst {

TriangularMesh::TriangularMesh(int n, double u_min, double u_max)
    : n_(n), u_min_(u_min), u_max_(u_max) {
    if (!std::isfinite(u_min) || !std::isfinite(u_max)) {
        throw std::invalid_argument("mesh: domain bounds must be finite");
    }
    if (n < 1) {
        throw std::invalid_argument("mesh: cell count per axis must be >= 1");
    }
    if (!(u_min < u_max)) {
        throw std::invalid_argument("mesh: u_min must be strictly below u_max");
    }

    delta_ = (u_max - u_min) / n;
    edges_.resize(static_cast<std::size_t>(n) + 1);

    // Lower half from u_min, upper half mirrored around the midpoint. This
    // pins edge(0) = u_min and edge(n) = u_max exactly and makes the grid
    // point-symmetric, which symmetric densities and the demagnetized
    // interface rely on.
    const double mid_sum = u_min + u_max;
    for (int k = 0; k <= n / 2; ++k) {
        edges_[static_cast<std::size_t>(k)] = u_min + k * delta_;
    }
    for (int k = n / 2 + 1; k <= n; ++k) {
        edges_[static_cast<std::size_t>(k)] = mid_sum - edges_[static_cast<std::size_t>(n - k)];
    }

    for (std::size_t k = 0; k + 1 < edges_.size(); ++k) {
        if (!(edges_[k] < edges_[k + 1])) {
            throw std::invalid_argument("mesh: domain too small for requested resolution");
        }
    }

    col_offsets_.resize(static_cast<std::size_t>(n) + 1);
    std::size_t off = 0;
    for (int j = 0; j <= n; ++j) {
        col_offsets_[static_cast<std::size_t>(j)] = off;
        off += static_cast<std::size_t>(n - j);
    }
    cell_count_ = static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) + 1) / 2;
}

int TriangularMesh::last_edge_at_or_below(double u) const {
    auto it = std::upper_bound(edges_.begin(), edges_.end(), u);
    return static_cast<int>(it - edges_.begin()) - 1;
}

int TriangularMesh::first_edge_at_or_above(double u) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), u);
    return static_cast<int>(it - edges_.begin());
}

double TriangularMesh::clamp(double u) const {
    return std::min(std::max(u, u_min_), u_max_);
}

TriangularMesh build_mesh(int n, double u_min, double u_max) {
    return TriangularMesh(n, u_min, u_max);
}

} // namespace hyst
