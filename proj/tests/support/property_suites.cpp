#include "support/property_suites.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include <fmt/core.h>

#include "hyst/density.hpp"
#include "hyst/preisach.hpp"

namespace hyst::testsuite {

namespace {

std::shared_ptr<const DensityGrid> make_density(int n, bool gaussian) {
    auto mesh = std::make_shared<const TriangularMesh>(build_mesh(n, -1.0, 1.0));
    if (gaussian) {
        return std::make_shared<const DensityGrid>(
            gaussian_density(mesh, GaussianParams{}, -1.0, 1.0));
    }
    return std::make_shared<const DensityGrid>(uniform_density(mesh, -1.0, 1.0));
}

bool states_equal(const PreisachState& a, const PreisachState& b) {
    const int n = a.mesh().n();
    for (int j = 0; j < n; ++j) {
        for (int i = j; i < n; ++i) {
            if (a.relay_state(i, j) != b.relay_state(i, j)) {
                return false;
            }
        }
    }
    return true;
}

void apply_all(PreisachState& s, const std::vector<double>& inputs) {
    for (double v : inputs) {
        s.apply_input(v);
    }
}

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace

SuiteResult wiping_out_suite(int cases, unsigned seed) {
    std::mt19937_64 rng(seed);
    SuiteResult res;
    const int sizes[] = {5, 25, 100};
    for (int c = 0; c < cases; ++c) {
        const int n = sizes[c % 3];
        auto density = make_density(n, c % 2 == 1);
        const bool ascending_wipe = (c % 4) < 2;

        std::vector<double> base;
        std::vector<double> with_excursion;
        if (ascending_wipe) {
            // Nested memory M > d > a > c > b > m; the excursion (b, c) is
            // dominated by the later maximum d and must leave no trace.
            const double M = uniform_in(rng, 0.75, 0.95);
            const double m = uniform_in(rng, -0.9, -0.6);
            const double a = uniform_in(rng, m + 0.3, 0.5);
            const double d = uniform_in(rng, a + 0.1, M - 0.02);
            const double b = uniform_in(rng, m + 0.02, a - 0.1);
            const double cc = uniform_in(rng, b + 0.02, a - 0.02);
            base = {M, m, a, d};
            with_excursion = {M, m, a, b, cc, d};
        } else {
            // Mirrored: excursion up to b, dominated by the later minimum d.
            const double M = uniform_in(rng, 0.75, 0.95);
            const double m = uniform_in(rng, -0.95, -0.75);
            const double A = uniform_in(rng, -0.4, M - 0.1);
            const double a = uniform_in(rng, m + 0.3, A - 0.1);
            const double d = uniform_in(rng, m + 0.02, a - 0.1);
            const double b = uniform_in(rng, a + 0.05, A - 0.02);
            const double cc = uniform_in(rng, a + 0.02, b - 0.02);
            base = {M, m, A, a, d};
            with_excursion = {M, m, A, a, b, cc, d};
        }

        PreisachState s1(density, InitMode::AllDown);
        PreisachState s2(density, InitMode::AllDown);
        apply_all(s1, base);
        apply_all(s2, with_excursion);
        s1.validate();
        s2.validate();
        if (!states_equal(s1, s2)) {
            res.pass = false;
            res.detail = fmt::format("case {}: states differ after dominated excursion", c);
            return res;
        }
        if (std::abs(s1.output() - s1.direct_output()) > 1e-9 ||
            std::abs(s2.output() - s2.direct_output()) > 1e-9) {
            res.pass = false;
            res.detail = fmt::format("case {}: running output drifted from direct sum", c);
            return res;
        }
        ++res.cases;
    }
    res.detail = fmt::format("{} cases", res.cases);
    return res;
}

SuiteResult congruency_suite(int cases, unsigned seed) {
    std::mt19937_64 rng(seed);
    SuiteResult res;
    const int sizes[] = {25, 50};
    constexpr int kSubsteps = 40;
    for (int c = 0; c < cases; ++c) {
        const int n = sizes[c % 2];
        auto density = make_density(n, c % 3 == 1);
        const double x_lo = uniform_in(rng, -0.7, 0.3);
        const double x_hi = uniform_in(rng, x_lo + 0.15, 0.75);

        // Two different outer histories, both ending with a descent into the
        // lower reversal point from above the loop. The priming cycle wipes
        // whatever the histories left inside the loop triangle.
        std::vector<double> prep_a = {0.9, x_lo};
        std::vector<double> prep_b = {0.85, uniform_in(rng, -0.95, -0.85), 0.95, x_lo};

        PreisachState sa(density, InitMode::AllDown);
        PreisachState sb(density, InitMode::AllDown);
        apply_all(sa, prep_a);
        apply_all(sb, prep_b);
        apply_all(sa, {x_hi, x_lo});
        apply_all(sb, {x_hi, x_lo});
        if (states_equal(sa, sb)) {
            res.pass = false;
            res.detail = fmt::format("case {}: outer histories failed to differ", c);
            return res;
        }

        for (int cycle = 0; cycle < 2; ++cycle) {
            for (int leg = 0; leg < 2; ++leg) {
                const double from = leg == 0 ? x_lo : x_hi;
                const double to = leg == 0 ? x_hi : x_lo;
                for (int k = 1; k <= kSubsteps; ++k) {
                    const double v = from + (to - from) * k / kSubsteps;
                    const double da = sa.apply_input(v);
                    const double db = sb.apply_input(v);
                    if (std::abs(da - db) > 1e-12) {
                        res.pass = false;
                        res.detail = fmt::format(
                            "case {}: branch increments differ by {:.3g}", c, std::abs(da - db));
                        return res;
                    }
                }
            }
        }
        ++res.cases;
    }
    res.detail = fmt::format("{} cases", res.cases);
    return res;
}

SuiteResult rate_independence_suite(int cases, unsigned seed) {
    std::mt19937_64 rng(seed);
    SuiteResult res;
    const int sizes[] = {5, 25, 100};
    for (int c = 0; c < cases; ++c) {
        const int n = sizes[c % 3];
        auto density = make_density(n, c % 2 == 0);

        const int reversals = 5 + static_cast<int>(rng() % 6);
        std::vector<double> targets(static_cast<std::size_t>(reversals));
        for (double& t : targets) {
            t = uniform_in(rng, -1.0, 1.0);
        }

        // Same piecewise-linear path traversed coarsely, finely resampled,
        // and with every value held for several samples.
        PreisachState coarse(density, InitMode::Demagnetized);
        PreisachState fine(density, InitMode::Demagnetized);
        PreisachState held(density, InitMode::Demagnetized);

        double prev = coarse.last_input();
        for (double t : targets) {
            coarse.apply_input(t);
            for (int k = 1; k < 7; ++k) {
                fine.apply_input(prev + (t - prev) * k / 7.0);
            }
            fine.apply_input(t);
            for (int rep = 0; rep < 3; ++rep) {
                held.apply_input(t);
            }
            prev = t;
        }

        if (!states_equal(coarse, fine) || !states_equal(coarse, held)) {
            res.pass = false;
            res.detail = fmt::format("case {}: resampled path reached a different state", c);
            return res;
        }
        if (held.output() != coarse.output()) {
            res.pass = false;
            res.detail = fmt::format("case {}: held samples changed the output", c);
            return res;
        }
        if (std::abs(coarse.output() - fine.output()) > 1e-10 ||
            std::abs(coarse.output() - coarse.direct_output()) > 1e-9) {
            res.pass = false;
            res.detail = fmt::format("case {}: outputs diverged across samplings", c);
            return res;
        }
        ++res.cases;
    }
    res.detail = fmt::format("{} cases", res.cases);
    return res;
}

} // namespace hyst::testsuite
