#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hyst {

/// Uniform discretization of the half-plane {(beta, alpha) : alpha >= beta}
/// into n x n square cells of which only the upper-triangular part is kept.
/// Cells on the diagonal are half cells (triangles). A cell (i, j) covers
/// alpha in [edge(i), edge(i+1)] and beta in [edge(j), edge(j+1)] with i >= j,
/// so the total cell count is n(n+1)/2.
///
/// When the input domain is symmetric the edge array is built mirror-
/// symmetric around the midpoint, so that edge(n-k) == -edge(k) holds exactly.
class TriangularMesh {
public:
    TriangularMesh(int n, double u_min, double u_max);

    int n() const { return n_; }
    double u_min() const { return u_min_; }
    double u_max() const { return u_max_; }
    double delta() const { return delta_; }
    std::size_t cell_count() const { return cell_count_; }

    std::span<const double> edges() const { return edges_; }
    double edge(int k) const { return edges_[static_cast<std::size_t>(k)]; }

    /// Flat storage index of cell (i, j), column-major by beta column:
    /// column j holds cells i = j .. n-1.
    std::size_t cell_index(int i, int j) const {
        return col_offsets_[static_cast<std::size_t>(j)] + static_cast<std::size_t>(i - j);
    }
    int column_size(int j) const { return n_ - j; }

    /// Largest k with edge(k) <= u. Used for ascending sweeps.
    int last_edge_at_or_below(double u) const;
    /// Smallest k with edge(k) >= u. Used for descending sweeps.
    int first_edge_at_or_above(double u) const;

    double clamp(double u) const;

private:
    int n_;
    double u_min_;
    double u_max_;
    double delta_;
    std::size_t cell_count_;
    std::vector<double> edges_;
    std::vector<std::size_t> col_offsets_;
};

/// Builds the (beta, alpha) mesh; throws std::invalid_argument on a
/// non-finite or empty domain or n < 1.
TriangularMesh build_mesh(int n, double u_min, double u_max);

} // namespace hyst
