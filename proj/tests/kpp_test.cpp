#include <cmath>
#include <functional>

#include <doctest.h>

#include "bgpwave/errors.hpp"
#include "bgpwave/grid.hpp"
#include "bgpwave/kpp.hpp"
#include "bgpwave/model.hpp"

using namespace bgpwave;

TEST_SUITE_BEGIN("kpp_solver");

namespace {
const ModelParams kRef{1.0, 2.0, 10.0};
}

TEST_CASE("tail exponent beta(c)") {
    // double root at the critical speed: both branch formulas coincide
    // at the double root the discriminant sits at rounding level, so the two
    // branch formulas agree only to sqrt(ulp)
    const double c_crit = 2.0 * std::sqrt(2.0);
    CHECK(beta_of_c(c_crit, kRef) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
    // supercritical: smaller quadratic root (4 - sqrt(8)) / 2
    CHECK(beta_of_c(4.0, kRef) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
    // subcritical branch c / (2 kappa)
    CHECK(beta_of_c(1.0, kRef) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(beta_of_c(0.0, kRef), DomainError);
    CHECK_THROWS_AS(beta_of_c(-1.0, kRef), DomainError);
}

TEST_CASE("relaxed right boundary value") {
    const double c_crit = 2.0 * std::sqrt(2.0);
    const double expect = 0.5 * std::exp(-std::sqrt(2.0) * 40.0);
    CHECK(relaxed_right_bc(c_crit, 40.0, kRef) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(relaxed_right_bc(c_crit, 40.0, kRef) == doctest::Approx(1.35e-25).epsilon(0.01));
    CHECK(relaxed_right_bc(1.0, 0.0, kRef) == 0.5);
    CHECK(relaxed_right_bc(1.0, 10.0, kRef) ==
          doctest::Approx(0.5 * std::exp(-5.0)).epsilon(1e-14));
    CHECK(relaxed_right_bc(1.0, 10.0, kRef) == doctest::Approx(3.369e-3).epsilon(1e-3));
}

TEST_CASE("initial ramp endpoints") {
    const Grid g = Grid::uniform(20.0, 0.5);
    const auto F = kpp_initial_profile(g);
    CHECK(F.front() == 1.0);
    CHECK(F[static_cast<size_t>(g.zero_index())] == 0.5);
    CHECK(F.back() == 0.0);
}

TEST_CASE("inner sweep with zero previous profile solves the homogeneous problem") {
    // -c F' - kappa F'' = 0 has the closed form A + B e^{-(c/kappa) x}.
    const Grid g = Grid::uniform(10.0, 0.01);
    const double c = 0.5;
    const int n = g.size();
    std::vector<double> zero(static_cast<size_t>(n), 0.0);
    const auto F = kpp_inner_solve(zero, c, g, kRef);

    const double rr = -c / kRef.kappa;
    const double rbc = relaxed_right_bc(c, g, kRef);
    const double em = std::exp(rr * -10.0), ep = std::exp(rr * 10.0);
    const double B = (1.0 - rbc) / (em - ep);
    const double A = 1.0 - B * em;
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const double exact = A + B * std::exp(rr * g.x(i));
        err = std::max(err, std::abs(F[static_cast<size_t>(i)] - exact));
    }
    CHECK(err <= 1e-6);

    // F_prev == 1 kills the source as well; identical system, identical bits
    std::vector<double> one(static_cast<size_t>(n), 1.0);
    const auto F1 = kpp_inner_solve(one, c, g, kRef);
    for (int i = 0; i < n; ++i) {
        CHECK(F1[static_cast<size_t>(i)] == F[static_cast<size_t>(i)]);
    }
}

TEST_CASE("converged profile is a fixed point of the sweep") {
    const Grid g = Grid::uniform(15.0, 0.02);
    const SolverConfig cfg;
    const WaveProfile wp = solve_kpp(g, kRef, cfg);
    const auto swept = kpp_inner_solve(wp.F, wp.c, g, kRef);
    double change = 0.0;
    for (size_t i = 0; i < swept.size(); ++i) {
        change = std::max(change, std::abs(swept[i] - wp.F[i]));
    }
    CHECK(change <= cfg.tol_profile);
}

TEST_CASE("reference KPP speed") {
    const Grid g = Grid::uniform(40.0, 0.02);
    const SolverConfig cfg;
    SpeedSolveReport report;
    const WaveProfile wp = solve_kpp(g, kRef, cfg, &report);
    CHECK(std::abs(wp.c - 2.0 * std::sqrt(2.0)) <= 0.05);
    CHECK(std::abs(wp.F[static_cast<size_t>(g.zero_index())] - 0.5) <= cfg.tol_speed);
    CHECK(wp.c > 0.0);
    CHECK(wp.c < 2.0 * std::sqrt(kRef.kappa * kRef.alpha) + 1.0);
    CHECK(report.assemblies_dominant);

    // profile shape: in [0, 1], monotone non-increasing
    for (size_t i = 0; i < wp.F.size(); ++i) {
        CHECK(wp.F[i] >= -1e-12);
        CHECK(wp.F[i] <= 1.0 + 1e-12);
        if (i > 0) CHECK(wp.F[i] <= wp.F[i - 1] + 1e-10);
    }

    // right-tail decay matches the linearized rate within 10%
    const double beta = beta_of_c(wp.c, kRef);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.x(i);
        const double f = wp.F[static_cast<size_t>(i)];
        if (x < 20.0 || !(f > 1e-12)) continue;
        sx += x;
        sy += std::log(f);
        sxx += x * x;
        sxy += x * std::log(f);
        ++cnt;
    }
    REQUIRE(cnt >= 2);
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    CHECK(std::abs(-slope - beta) <= 0.1 * beta);
}

TEST_CASE("KPP scaling law doubles the speed") {
    // c* = 2 sqrt(kappa alpha): quadrupling alpha doubles the selected speed
    const Grid g = Grid::uniform(20.0, 0.02);
    const SolverConfig cfg;
    const WaveProfile base = solve_kpp(g, kRef, cfg);
    const WaveProfile scaled = solve_kpp(g, ModelParams{1.0, 8.0, 10.0}, cfg);
    CHECK(std::abs(scaled.c - 2.0 * base.c) <= 0.02 * scaled.c);
}

TEST_CASE("speed converges at second order under grid refinement") {
    const SolverConfig cfg;
    const double c1 = solve_kpp(Grid::uniform(15.0, 0.04), kRef, cfg).c;
    const double c2 = solve_kpp(Grid::uniform(15.0, 0.02), kRef, cfg).c;
    const double c3 = solve_kpp(Grid::uniform(15.0, 0.01), kRef, cfg).c;
    const double ratio = (c1 - c2) / (c2 - c3);
    CHECK(ratio > 2.0);
    CHECK(ratio < 8.0);
    CHECK(std::abs(c1 - c2) < 0.05);
}

TEST_CASE("speed normalization machinery on a synthetic residual") {
    const Grid g = Grid::uniform(1.0, 0.25);
    const SolverConfig cfg;
    // smooth monotone residual: F(0) = 1/(1+c), root of F(0)-1/2 at c = 1
    const ProfileForSpeed inner = [&](double c) {
        return std::vector<double>(static_cast<size_t>(g.size()), 1.0 / (1.0 + c));
    };
    const WaveProfile wp = solve_speed_normalized(inner, g, kRef, cfg);
    CHECK(std::abs(1.0 / (1.0 + wp.c) - 0.5) <= cfg.tol_speed);

    // no sign change anywhere: no-wave error with residual report
    const ProfileForSpeed flat = [&](double) {
        return std::vector<double>(static_cast<size_t>(g.size()), 0.9);
    };
    CHECK_THROWS_AS(solve_speed_normalized(flat, g, kRef, cfg), NoWaveError);

    // failing low end: the scan still brackets
    const ProfileForSpeed partial = [&](double c) -> std::vector<double> {
        if (c < 0.5) throw NonConvergenceError("synthetic failure");
        return std::vector<double>(static_cast<size_t>(g.size()), 1.0 / (1.0 + c));
    };
    SpeedSolveReport report;
    const WaveProfile wp2 = solve_speed_normalized(partial, g, kRef, cfg, &report);
    CHECK(report.bracket_rescanned);
    CHECK(std::abs(1.0 / (1.0 + wp2.c) - 0.5) <= cfg.tol_speed);
}

TEST_SUITE_END();
