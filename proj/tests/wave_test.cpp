#include <cmath>
#include <cstring>

#include <doctest.h>

#include "bgpwave/coupling.hpp"
#include "bgpwave/errors.hpp"
#include "bgpwave/grid.hpp"
#include "bgpwave/kpp.hpp"
#include "bgpwave/numerics.hpp"
#include "bgpwave/wave.hpp"

using namespace bgpwave;

TEST_SUITE_BEGIN("wave_solver");

namespace {
const ModelParams kRef{1.0, 2.0, 10.0};

CoupledSolution solve_small() {
    // small but representative configuration used by several cases
    static const CoupledSolution sol =
        solve_coupled(Grid::uniform(15.0, 0.02), kRef, SolverConfig{});
    return sol;
}
}  // namespace

TEST_CASE("decay rate estimation on a synthetic exponential") {
    const Grid g = Grid::uniform(40.0, 0.02);
    std::vector<double> F(static_cast<size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) F[static_cast<size_t>(i)] = std::exp(-1.3 * g.x(i));
    CHECK(std::abs(estimate_decay_rate(F, g) - 1.3) <= 1e-6);

    std::vector<double> flat(static_cast<size_t>(g.size()), 0.0);
    CHECK_THROWS_AS(estimate_decay_rate(flat, g), TailWindowError);
}

TEST_CASE("coupled sweep with full-time search reduces to the KPP rows") {
    const Grid g = Grid::uniform(10.0, 0.05);
    const int n = g.size();
    const double h = g.step();
    const double c = 2.2;
    std::vector<double> F_prev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        F_prev[static_cast<size_t>(i)] = 1.0 / (1.0 + std::exp(1.5 * g.x(i)));
    }
    const std::vector<double> ones(static_cast<size_t>(n), 1.0);
    const auto F = coupled_F_inner(F_prev, ones, ones, c, g, kRef);

    // independent row-for-row assembly of the reduced system:
    // (-c D1 - kappa D2 + alpha F_prev) F = alpha F_prev
    TridiagonalSystem sys(n);
    for (int i = 1; i < n - 1; ++i) {
        const size_t k = static_cast<size_t>(i);
        sys.sub[k] = c / (2.0 * h) - kRef.kappa / (h * h);
        sys.diag[k] = 2.0 * kRef.kappa / (h * h) + kRef.alpha * F_prev[k];
        sys.super[k] = -c / (2.0 * h) - kRef.kappa / (h * h);
        sys.rhs[k] = kRef.alpha * F_prev[k];
    }
    sys.diag[0] = 1.0;
    sys.rhs[0] = 1.0;
    sys.diag[static_cast<size_t>(n - 1)] = 1.0;
    sys.rhs[static_cast<size_t>(n - 1)] = relaxed_right_bc(c, g, kRef);
    const auto expect = solve_tridiagonal(sys);
    for (int i = 0; i < n; ++i) {
        CHECK(F[static_cast<size_t>(i)] == expect[static_cast<size_t>(i)]);
    }
}

TEST_CASE("coupled solve satisfies the theory package on a small interval") {
    const CoupledSolution sol = solve_small();
    const Grid g = Grid::uniform(15.0, 0.02);
    const int n = g.size();
    REQUIRE(sol.converged);

    // wave profile shape
    CHECK(sol.profile.F.front() == 1.0);
    CHECK(std::abs(sol.profile.F[static_cast<size_t>(g.zero_index())] - 0.5) <= 1e-8);
    for (int i = 1; i < n; ++i) {
        CHECK(sol.profile.F[static_cast<size_t>(i)] <=
              sol.profile.F[static_cast<size_t>(i - 1)] + 1e-10);
    }
    // value function monotone, positive rescaled value
    for (int i = 1; i < n; ++i) {
        CHECK(sol.value.Q[static_cast<size_t>(i)] >= sol.value.Q[static_cast<size_t>(i - 1)] - 1e-8);
    }
    for (double v : sol.value.Qtilde) CHECK(v > 0.0);
    // benefit decreasing, policy consistent
    for (int i = 1; i < n; ++i) {
        CHECK(sol.coupling.R[static_cast<size_t>(i)] <=
              sol.coupling.R[static_cast<size_t>(i - 1)] + 1e-6);
    }
    for (int i = 0; i < n; ++i) {
        CHECK(sol.coupling.s_star[static_cast<size_t>(i)] ==
              std::clamp(sol.coupling.R[static_cast<size_t>(i)], 0.0, 1.0));
    }
    // speed in the admissible window
    CHECK(sol.profile.c > 2.0 * kRef.kappa - 0.05);
    CHECK(sol.profile.c < 2.0 * std::sqrt(kRef.kappa * kRef.alpha));
    // growth sandwich A1 e^x <= Q <= A2 e^x + B with positive constants
    double A1 = 1e300;
    for (int i = 0; i < n; ++i) {
        A1 = std::min(A1, sol.value.Q[static_cast<size_t>(i)] * std::exp(-g.x(i)));
    }
    CHECK(A1 > 0.0);
    const double B = sol.value.Q[static_cast<size_t>(g.zero_index())];
    double A2 = 0.0;
    for (int i = g.zero_index(); i < n; ++i) {
        A2 = std::max(A2, sol.value.Q[static_cast<size_t>(i)] * std::exp(-g.x(i)));
    }
    for (int i = 0; i < n; ++i) {
        const double bound = A2 * std::exp(g.x(i)) + B;
        CHECK(sol.value.Q[static_cast<size_t>(i)] <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("interpolated benefit equals one at the transition point") {
    const CoupledSolution sol = solve_small();
    const Grid g = Grid::uniform(15.0, 0.02);
    REQUIRE(sol.coupling.transition.on_grid());
    const int m = sol.coupling.transition.node;
    const double theta = sol.coupling.transition.theta;
    const double Rt_interp = sol.coupling.Rtilde[static_cast<size_t>(m)] * (1.0 - theta) +
                             sol.coupling.Rtilde[static_cast<size_t>(m + 1)] * theta;
    const double R_at_x0 = std::exp(-sol.coupling.transition.x0) * Rt_interp;
    CHECK(std::abs(R_at_x0 - 1.0) <= 1e-3);
    // the policy is exactly one left of the transition and below one right of it
    for (int i = 0; i <= m; ++i) CHECK(sol.coupling.s_star[static_cast<size_t>(i)] == 1.0);
    for (int i = m + 1; i < g.size(); ++i) {
        CHECK(sol.coupling.s_star[static_cast<size_t>(i)] < 1.0);
    }
}

TEST_CASE("converged profile is a fixed point of the semi-implicit sweep") {
    const CoupledSolution sol = solve_small();
    const Grid g = Grid::uniform(15.0, 0.02);
    const SolverConfig cfg;
    const auto swept = coupled_F_inner(sol.profile.F, sol.coupling.R, sol.coupling.s_star,
                                       sol.profile.c, g, kRef);
    double change = 0.0;
    for (size_t i = 0; i < swept.size(); ++i) {
        change = std::max(change, std::abs(swept[i] - sol.profile.F[i]));
    }
    CHECK(change <= cfg.tol_profile);
}

TEST_CASE("anchored mass and direct gamma quadrature agree over the full grid") {
    const CoupledSolution sol = solve_small();
    const Grid g = Grid::uniform(15.0, 0.02);
    const auto mass = source_mass_table(sol.profile.F, sol.coupling.R, sol.coupling.s_star,
                                        sol.coupling.transition, g);
    CHECK(std::abs(mass.back() - sol.coupling.gamma) <= 5e-3);
}

TEST_CASE("discrete speed balance holds at first order") {
    // Summing the converged equation rows: the reaction mass integral
    // balances c (F(-a) - F(a)) plus the boundary fluxes.
    const CoupledSolution sol = solve_small();
    const Grid g = Grid::uniform(15.0, 0.02);
    const int n = g.size();
    const auto mass = source_mass_table(sol.profile.F, sol.coupling.R, sol.coupling.s_star,
                                        sol.coupling.transition, g);
    std::vector<double> integrand(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        integrand[static_cast<size_t>(i)] =
            kRef.alpha * sol.profile.F[static_cast<size_t>(i)] * mass[static_cast<size_t>(i)];
    }
    const double reaction = trapezoid(integrand, g, 0, n - 1);
    const auto Fp = central_first_derivative(sol.profile.F, g);
    const double c = sol.profile.c;
    const double balance = c * (sol.profile.F.front() - sol.profile.F.back()) +
                           kRef.kappa * (Fp.back() - Fp.front());
    CHECK(std::abs(reaction - balance) <= 5.0 * g.step());
}

TEST_CASE("freezing the policy at one reproduces the KPP solution bit for bit") {
    const Grid g = Grid::uniform(15.0, 0.02);
    const SolverConfig cfg;
    const WaveProfile kpp = solve_kpp(g, kRef, cfg);
    CoupledOptions opts;
    opts.force_kpp = true;
    const CoupledSolution sol = solve_coupled(g, kRef, cfg, opts);
    CHECK(sol.profile.c == kpp.c);
    REQUIRE(sol.profile.F.size() == kpp.F.size());
    CHECK(std::memcmp(sol.profile.F.data(), kpp.F.data(),
                      kpp.F.size() * sizeof(double)) == 0);
}

TEST_CASE("identical inputs give bit-identical solutions") {
    const Grid g = Grid::uniform(10.0, 0.05);
    const SolverConfig cfg;
    const CoupledSolution s1 = solve_coupled(g, kRef, cfg);
    const CoupledSolution s2 = solve_coupled(g, kRef, cfg);
    CHECK(s1.profile.c == s2.profile.c);
    CHECK(std::memcmp(s1.profile.F.data(), s2.profile.F.data(),
                      s1.profile.F.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(s1.value.Qtilde.data(), s2.value.Qtilde.data(),
                      s1.value.Qtilde.size() * sizeof(double)) == 0);
}

TEST_CASE("warm start reaches the same speed as a cold start") {
    const SolverConfig cfg;
    const Grid g15 = Grid::uniform(15.0, 0.02);
    const Grid g20 = Grid::uniform(20.0, 0.02);
    const CoupledSolution base = solve_coupled(g15, kRef, cfg);
    WarmStart warm;
    warm.F = base.profile.F;
    warm.Qtilde = base.value.Qtilde;
    warm.c = base.profile.c;
    warm.source_half_width = 15.0;
    warm.source_step = 0.02;
    CoupledOptions opts;
    opts.warm_start = &warm;
    const CoupledSolution warm_sol = solve_coupled(g20, kRef, cfg, opts);
    const CoupledSolution cold_sol = solve_coupled(g20, kRef, cfg);
    REQUIRE(warm_sol.converged);
    REQUIRE(cold_sol.converged);
    CHECK(std::abs(warm_sol.profile.c - cold_sol.profile.c) <= 10.0 * cfg.tol_speed);
}

TEST_CASE("rho below kappa is rejected") {
    const Grid g = Grid::uniform(10.0, 0.05);
    CHECK_THROWS_AS(solve_coupled(g, ModelParams{2.0, 3.0, 1.0}, SolverConfig{}),
                    ParameterError);
}

TEST_SUITE_END();
