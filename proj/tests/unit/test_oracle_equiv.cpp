#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "hyst/density.hpp"
#include "hyst/preisach.hpp"
#include "support/naive_relay_bank.hpp"

using namespace hyst;

namespace {

// Piecewise-monotone test input: random reversal targets, slightly beyond the
// domain to exercise clamping, linearly interpolated.
std::vector<double> random_sequence(std::mt19937_64& rng, std::size_t steps) {
    std::uniform_real_distribution<double> target(-1.1, 1.1);
    std::uniform_int_distribution<int> ramp_len(3, 40);
    std::vector<double> out;
    out.reserve(steps);
    double v = target(rng);
    while (out.size() < steps) {
        const double next = target(rng);
        const int len = ramp_len(rng);
        for (int k = 1; k <= len && out.size() < steps; ++k) {
            out.push_back(v + (next - v) * k / len);
        }
        v = next;
    }
    return out;
}

} // namespace

TEST_CASE("randomized trajectories match the naive relay bank") {
    std::mt19937_64 rng(42);
    for (int n : {5, 25, 100}) {
        auto mesh = std::make_shared<const TriangularMesh>(build_mesh(n, -1.0, 1.0));
        for (bool gaussian : {false, true}) {
            auto density = gaussian
                               ? std::make_shared<const DensityGrid>(
                                     gaussian_density(mesh, GaussianParams{}, -1.0, 1.0))
                               : std::make_shared<const DensityGrid>(
                                     uniform_density(mesh, -1.0, 1.0));
            for (int rep = 0; rep < 3; ++rep) {
                const InitMode mode = rep == 0   ? InitMode::AllDown
                                      : rep == 1 ? InitMode::AllUp
                                                 : InitMode::Demagnetized;
                PreisachState state(density, mode);
                oracle::NaiveRelayBank bank(density, mode);
                double max_dev = 0.0;
                for (double u : random_sequence(rng, 1000)) {
                    state.apply_input(u);
                    const double yn = bank.step(u);
                    max_dev = std::max(max_dev, std::abs(state.output() - yn));
                }
                INFO("n = " << n << " gaussian = " << gaussian << " mode = " << rep);
                CHECK(max_dev <= 1e-9);
                CHECK(std::abs(state.output() - state.direct_output()) <= 1e-9);
            }
        }
    }
}

TEST_CASE("single relay reproduces the boundary-case loop") {
    auto mesh = std::make_shared<const TriangularMesh>(build_mesh(1, -1.0, 1.0));
    auto density = std::make_shared<const DensityGrid>(uniform_density(mesh, -1.0, 1.0));
    PreisachState relay(density, InitMode::AllDown);
    oracle::NaiveRelayBank bank(density, InitMode::AllDown);

    // Stays down until the upper threshold, then up until the lower one.
    for (double u : {-0.5, 0.0, 0.99}) {
        relay.apply_input(u);
        CHECK(relay.output() == -1.0);
        CHECK(bank.step(u) == -1.0);
    }
    relay.apply_input(1.0);
    CHECK(relay.output() == 1.0);
    CHECK(bank.step(1.0) == 1.0);
    for (double u : {0.5, -0.99}) {
        relay.apply_input(u);
        CHECK(relay.output() == 1.0);
        CHECK(bank.step(u) == 1.0);
    }
    relay.apply_input(-1.0);
    CHECK(relay.output() == -1.0);
    CHECK(bank.step(-1.0) == -1.0);
}

TEST_CASE("uniform branch formulas hit their anchor values") {
    CHECK(oracle::uniform_branch_ascending(0.0) == doctest::Approx(-0.5));
    CHECK(oracle::uniform_branch_ascending(1.0) == doctest::Approx(1.0));
    CHECK(oracle::uniform_branch_ascending(-1.0) == doctest::Approx(-1.0));
    CHECK(oracle::uniform_branch_descending(0.0) == doctest::Approx(0.5));
    CHECK(oracle::uniform_branch_descending(-1.0) == doctest::Approx(-1.0));
    CHECK(oracle::uniform_branch_descending(1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(oracle::uniform_branch_ascending(1.5), std::invalid_argument);
    CHECK_THROWS_AS(oracle::uniform_branch_descending(-1.5), std::invalid_argument);
}
