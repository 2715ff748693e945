#include "hyst/preisach.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyst {

PreisachState::PreisachState(std::shared_ptr<const DensityGrid> density, InitMode mode,
                             bool subcell_interpolation)
    : density_(std::move(density)), interp_(subcell_interpolation) {
    if (!density_) {
        throw std::invalid_argument("state: null density");
    }
    mesh_ = &density_->mesh();
    n_ = mesh_->n();
    levels_.resize(static_cast<std::size_t>(n_));
    virgin_.assign(static_cast<std::size_t>(n_), 0);

    switch (mode) {
    case InitMode::AllDown:
        for (int j = 0; j < n_; ++j) levels_[static_cast<std::size_t>(j)] = j;
        prefix_ = 0;
        u_prev_ = mesh_->u_min();
        break;
    case InitMode::AllUp:
        for (int j = 0; j < n_; ++j) levels_[static_cast<std::size_t>(j)] = n_;
        prefix_ = n_;
        u_prev_ = mesh_->u_max();
        break;
    case InitMode::Demagnetized:
        // Interface along alpha = -beta (about the midpoint); cells straddled
        // by that line start neutral.
        for (int j = 0; j < n_; ++j) {
            levels_[static_cast<std::size_t>(j)] = std::max(j, n_ - 1 - j);
            if (n_ - 1 - j >= j) {
                virgin_[static_cast<std::size_t>(j)] = 1;
                ++virgin_count_;
                virgin_hi_ = j + 1;
            }
        }
        prefix_ = n_ / 2; // columns left of the anti-diagonal midpoint are nonempty
        u_prev_ = 0.5 * (mesh_->u_min() + mesh_->u_max());
        break;
    }
    y_ = direct_output();
}

double PreisachState::apply_input(double u_new) {
    if (!std::isfinite(u_new)) {
        throw std::invalid_argument("apply_input: input must be finite");
    }
    const double u = mesh_->clamp(u_new);
    if (u == u_prev_) {
        return 0.0;
    }
    const double before = y_ + corr_;
    if (u > u_prev_) {
        y_ += ascend(mesh_->last_edge_at_or_below(u));
        last_dir_ = +1;
    } else {
        y_ += descend(mesh_->first_edge_at_or_above(u));
        last_dir_ = -1;
    }
    u_prev_ = u;
    if (interp_) {
        refresh_correction();
    }
    return (y_ + corr_) - before;
}

double PreisachState::ascend(int a) {
    if (a <= 0) {
        return 0.0;
    }
    // Columns with level >= a keep their memory; the rest rise to a. Levels
    // are non-increasing over the nonempty prefix, so the affected columns
    // form a suffix of [0, min(prefix_, a)).
    int lo = 0;
    int hi = std::min(prefix_, a);
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (levels_[static_cast<std::size_t>(mid)] < a) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    double dy = 0.0;
    bool flipped = false;
    for (int j = lo; j < a; ++j) {
        const int l = levels_[static_cast<std::size_t>(j)];
        if (l < a) {
            dy += 2.0 * density_->column_mass(j, l, a);
            levels_[static_cast<std::size_t>(j)] = a;
            flipped = true;
        }
        if (virgin_count_ > 0 && j < virgin_hi_ && virgin_[static_cast<std::size_t>(j)]) {
            const int band = n_ - 1 - j;
            if (band < a) {
                // Neutral relay joins the swept block; it only gains +w.
                dy -= density_->weight(band, j);
                virgin_[static_cast<std::size_t>(j)] = 0;
                --virgin_count_;
            }
        }
    }
    prefix_ = std::max(prefix_, a);
    if (flipped) {
        ++version_;
    }
    return dy;
}

double PreisachState::descend(int b) {
    const int start = std::max(b, 0);
    double dy = 0.0;
    bool flipped = false;
    for (int j = start; j < prefix_; ++j) {
        const int l = levels_[static_cast<std::size_t>(j)];
        if (l > j) {
            dy -= 2.0 * density_->column_mass(j, j, l);
            levels_[static_cast<std::size_t>(j)] = j;
            flipped = true;
        }
    }
    if (virgin_count_ > 0) {
        for (int j = start; j < virgin_hi_; ++j) {
            if (virgin_[static_cast<std::size_t>(j)]) {
                dy -= density_->weight(n_ - 1 - j, j);
                virgin_[static_cast<std::size_t>(j)] = 0;
                --virgin_count_;
                flipped = true;
            }
        }
        virgin_hi_ = std::min(virgin_hi_, start);
    }
    prefix_ = std::min(prefix_, start);
    if (flipped) {
        ++version_;
    }
    return dy;
}

double PreisachState::band_mass_ascending(int row) const {
    if (band_cache_.dir == +1 && band_cache_.idx == row && band_cache_.version == version_) {
        return band_cache_.mass;
    }
    // Down or neutral cells of row `row` across columns j <= row.
    double mass = 0.0;
    for (int j = 0; j <= row; ++j) {
        if (levels_[static_cast<std::size_t>(j)] > row) {
            continue; // already up
        }
        const bool neutral = virgin_count_ > 0 && j < virgin_hi_ &&
                             virgin_[static_cast<std::size_t>(j)] && n_ - 1 - j == row;
        mass += (neutral ? 1.0 : 2.0) * density_->weight(row, j);
    }
    band_cache_ = {+1, row, version_, mass};
    return mass;
}

double PreisachState::band_mass_descending(int col) const {
    if (band_cache_.dir == -1 && band_cache_.idx == col && band_cache_.version == version_) {
        return band_cache_.mass;
    }
    double mass = 2.0 * density_->column_mass(col, col, levels_[static_cast<std::size_t>(col)]);
    if (virgin_count_ > 0 && col < virgin_hi_ && virgin_[static_cast<std::size_t>(col)]) {
        mass += density_->weight(n_ - 1 - col, col);
    }
    band_cache_ = {-1, col, version_, mass};
    return mass;
}

void PreisachState::refresh_correction() {
    corr_ = 0.0;
    const double delta = mesh_->delta();
    if (last_dir_ > 0) {
        const int a = mesh_->last_edge_at_or_below(u_prev_);
        if (a >= n_) {
            return; // saturated
        }
        const double frac = (u_prev_ - mesh_->edge(a)) / delta;
        if (frac > 0.0) {
            corr_ = frac * band_mass_ascending(a);
        }
    } else if (last_dir_ < 0) {
        const int b = mesh_->first_edge_at_or_above(u_prev_);
        if (b <= 0) {
            return;
        }
        const double frac = (mesh_->edge(b) - u_prev_) / delta;
        if (frac > 0.0) {
            corr_ = -frac * band_mass_descending(b - 1);
        }
    }
}

double PreisachState::direct_output() const {
    double up = 0.0;
    double down = 0.0;
    for (int j = 0; j < n_; ++j) {
        for (int i = j; i < n_; ++i) {
            const int s = relay_state(i, j);
            if (s > 0) {
                up += density_->weight(i, j);
            } else if (s < 0) {
                down += density_->weight(i, j);
            }
        }
    }
    return density_->y_offset() + up - down;
}

int PreisachState::relay_state(int i, int j) const {
    if (i < levels_[static_cast<std::size_t>(j)]) {
        return +1;
    }
    if (virgin_count_ > 0 && j < virgin_hi_ && virgin_[static_cast<std::size_t>(j)] &&
        i == n_ - 1 - j) {
        return 0;
    }
    return -1;
}

std::vector<Corner> PreisachState::interface_corners() const {
    std::vector<Corner> out;
    if (prefix_ == 0) {
        out.push_back({mesh_->u_min(), mesh_->u_min()});
        return out;
    }
    out.push_back({mesh_->u_min(), mesh_->edge(levels_[0])});
    for (int j = 1; j < prefix_; ++j) {
        const int prev = levels_[static_cast<std::size_t>(j - 1)];
        const int cur = levels_[static_cast<std::size_t>(j)];
        if (cur != prev) {
            out.push_back({mesh_->edge(j), mesh_->edge(prev)});
            out.push_back({mesh_->edge(j), mesh_->edge(cur)});
        }
    }
    const int tail = levels_[static_cast<std::size_t>(prefix_ - 1)];
    out.push_back({mesh_->edge(prefix_), mesh_->edge(tail)});
    if (tail != prefix_) {
        out.push_back({mesh_->edge(prefix_), mesh_->edge(prefix_)});
    }
    return out;
}

void PreisachState::validate() const {
    for (int j = 0; j < n_; ++j) {
        const int l = levels_[static_cast<std::size_t>(j)];
        if (l < j || l > n_) {
            throw std::logic_error("staircase level outside [diagonal, top]");
        }
        if (l > j) {
            if (j >= prefix_) {
                throw std::logic_error("nonempty column beyond prefix");
            }
            if (j > 0 && l > levels_[static_cast<std::size_t>(j - 1)]) {
                throw std::logic_error("staircase not monotone");
            }
        }
        if (virgin_[static_cast<std::size_t>(j)]) {
            const int band = n_ - 1 - j;
            if (band < j || band < l || j >= virgin_hi_) {
                throw std::logic_error("virgin flag inconsistent with interface");
            }
        }
    }
    if (!(u_prev_ >= mesh_->u_min() && u_prev_ <= mesh_->u_max())) {
        throw std::logic_error("last input outside domain");
    }
}

PreisachState init_state(const std::shared_ptr<const TriangularMesh>& mesh,
                         std::shared_ptr<const DensityGrid> density, InitMode mode,
                         bool subcell_interpolation) {
    if (!density || density->mesh_ptr().get() != mesh.get()) {
        throw std::invalid_argument("init_state: density was built on a different mesh");
    }
    return PreisachState(std::move(density), mode, subcell_interpolation);
}

} // namespace hyst
