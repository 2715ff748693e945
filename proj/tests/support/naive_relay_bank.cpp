#include "support/naive_relay_bank.hpp"

#include <stdexcept>

namespace hyst::oracle {

NaiveRelayBank::NaiveRelayBank(std::shared_ptr<const DensityGrid> density, InitMode mode)
    : density_(std::move(density)) {
    const TriangularMesh& mesh = density_->mesh();
    n_ = mesh.n();
    const std::size_t cells = mesh.cell_count();
    alpha_th_.reserve(cells);
    beta_th_.reserve(cells);
    weight_.reserve(cells);
    state_.reserve(cells);
    for (int j = 0; j < n_; ++j) {
        for (int i = j; i < n_; ++i) {
            alpha_th_.push_back(mesh.edge(i + 1));
            beta_th_.push_back(mesh.edge(j));
            weight_.push_back(density_->weight(i, j));
            int8_t s = -1;
            switch (mode) {
            case InitMode::AllDown:
                s = -1;
                break;
            case InitMode::AllUp:
                s = +1;
                break;
            case InitMode::Demagnetized:
                if (i < n_ - 1 - j) {
                    s = +1;
                } else if (i == n_ - 1 - j) {
                    s = 0; // bisected by the anti-diagonal
                } else {
                    s = -1;
                }
                break;
            }
            state_.push_back(s);
        }
    }
    offset_ = density_->y_offset();
}

double NaiveRelayBank::step(double u) {
    for (std::size_t c = 0; c < state_.size(); ++c) {
        if (u >= alpha_th_[c]) {
            state_[c] = +1;
        } else if (u <= beta_th_[c]) {
            state_[c] = -1;
        }
    }
    return output();
}

double NaiveRelayBank::output() const {
    double acc = 0.0;
    for (std::size_t c = 0; c < state_.size(); ++c) {
        acc += static_cast<double>(state_[c]) * weight_[c];
    }
    return offset_ + acc;
}

int NaiveRelayBank::state(int i, int j) const {
    return state_[density_->mesh().cell_index(i, j)];
}

double uniform_branch_ascending(double u) {
    if (u < -1.0 || u > 1.0) {
        throw std::invalid_argument("uniform_branch: input outside [-1, 1]");
    }
    return (u + 1.0) * (u + 1.0) / 2.0 - 1.0;
}

double uniform_branch_descending(double u) {
    if (u < -1.0 || u > 1.0) {
        throw std::invalid_argument("uniform_branch: input outside [-1, 1]");
    }
    return 1.0 - (1.0 - u) * (1.0 - u) / 2.0;
}

} // namespace hyst::oracle
