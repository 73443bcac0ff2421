#include "bgpwave/kpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "bgpwave/errors.hpp"
#include "bgpwave/numerics.hpp"
#include "profile_newton.hpp"

namespace bgpwave {

double beta_of_c(double c, const ModelParams& p) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw DomainError("beta_of_c: speed must be positive, got " + std::to_string(c));
    }
    const double disc = c * c - 4.0 * p.kappa * p.alpha;
    if (disc < 0.0) return c / (2.0 * p.kappa);
    return (c - std::sqrt(disc)) / (2.0 * p.kappa);
}

double relaxed_right_bc(double c, double half_width, const ModelParams& p) {
    return 0.5 * std::exp(-beta_of_c(c, p) * half_width);
}

double relaxed_right_bc(double c, const Grid& g, const ModelParams& p) {
    return relaxed_right_bc(c, g.half_width(), p);
}

std::vector<double> kpp_initial_profile(const Grid& g) {
    const int n = g.size();
    const double a = g.half_width();
    std::vector<double> F(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) F[static_cast<size_t>(i)] = (a - g.x(i)) / (2.0 * a);
    return F;
}

namespace {

TridiagonalSystem assemble_kpp_sweep(std::span<const double> F_prev, double c, const Grid& g,
                                     const ModelParams& p) {
    const int n = g.size();
    const double h = g.step();
    TridiagonalSystem sys(n);
    const double sub_c = c / (2.0 * h) - p.kappa / (h * h);
    const double sup_c = -c / (2.0 * h) - p.kappa / (h * h);
    const double diag_c = 2.0 * p.kappa / (h * h);
    for (int i = 1; i < n - 1; ++i) {
        sys.sub[static_cast<size_t>(i)] = sub_c;
        sys.diag[static_cast<size_t>(i)] = diag_c;
        sys.super[static_cast<size_t>(i)] = sup_c;
        const double f = F_prev[static_cast<size_t>(i)];
        sys.rhs[static_cast<size_t>(i)] = p.alpha * f * (1.0 - f);
    }
    sys.diag[0] = 1.0;
    sys.rhs[0] = 1.0;
    sys.diag[static_cast<size_t>(n - 1)] = 1.0;
    sys.rhs[static_cast<size_t>(n - 1)] = relaxed_right_bc(c, g, p);
    return sys;
}

}  // namespace

std::vector<double> kpp_inner_solve(std::span<const double> F_prev, double c, const Grid& g,
                                    const ModelParams& p) {
    if (static_cast<int>(F_prev.size()) != g.size()) {
        throw DimensionError("kpp_inner_solve: profile length does not match grid");
    }
    return solve_tridiagonal(assemble_kpp_sweep(F_prev, c, g, p));
}

WaveProfile solve_speed_normalized(const ProfileForSpeed& profile_for_speed, const Grid& g,
                                   const ModelParams& p, const SolverConfig& cfg,
                                   SpeedSolveReport* report) {
    validate_params(p);
    validate_config(cfg);
    const int i0 = g.zero_index();

    SpeedSolveReport local_report;
    SpeedSolveReport& rep = report ? *report : local_report;

    struct Eval {
        double c;
        double r;
        std::vector<double> F;
    };

    // A profile-solve failure at a probe speed is treated like missing sign
    // information; the scan below recovers a verified bracket from the
    // speeds that do converge.
    auto try_eval = [&](double c) -> std::optional<Eval> {
        ++rep.residual_evaluations;
        try {
            std::vector<double> F = profile_for_speed(c);
            const double r = F[static_cast<size_t>(i0)] - 0.5;
            return Eval{c, r, std::move(F)};
        } catch (const NonConvergenceError&) {
            return std::nullopt;
        }
    };

    const double c_lo = 1e-3;
    const double c_hi = 2.0 * std::sqrt(p.kappa * p.alpha) + 1.0;

    std::optional<Eval> lo = try_eval(c_lo);
    std::optional<Eval> hi = try_eval(c_hi);

    std::optional<Eval> left, right;  // bracket with opposite signs
    if (lo && hi && lo->r * hi->r <= 0.0) {
        left = std::move(lo);
        right = std::move(hi);
    } else {
        rep.bracket_rescanned = true;
        double first_r = std::numeric_limits<double>::quiet_NaN();
        double last_r = std::numeric_limits<double>::quiet_NaN();
        std::optional<Eval> prev = std::move(lo);
        if (prev) first_r = last_r = prev->r;
        constexpr int kScan = 64;
        for (int k = 1; k < kScan && !left; ++k) {
            const double c = c_lo + (c_hi - c_lo) * static_cast<double>(k) / (kScan - 1);
            std::optional<Eval> cur = (k == kScan - 1 && hi) ? std::move(hi) : try_eval(c);
            if (cur) {
                if (std::isnan(first_r)) first_r = cur->r;
                last_r = cur->r;
            }
            if (prev && cur && prev->r * cur->r <= 0.0) {
                left = std::move(prev);
                right = std::move(cur);
                break;
            }
            if (cur) prev = std::move(cur);
        }
        if (!left) {
            throw NoWaveError(
                "no sign change of F(0) - 1/2 across the speed bracket [" +
                    std::to_string(c_lo) + ", " + std::to_string(c_hi) + "]",
                first_r, last_r);
        }
    }

    // Safeguarded secant refinement on the verified bracket. The residual is
    // monotone only near the root, so every step stays inside [left, right].
    Eval a = std::move(*left);
    Eval b = std::move(*right);
    if (std::abs(a.r) <= cfg.tol_speed) return {std::move(a.F), a.c};
    if (std::abs(b.r) <= cfg.tol_speed) return {std::move(b.F), b.c};

    Eval prev2 = a;
    Eval prev1 = b;
    for (int it = 0; it < cfg.max_speed_iters; ++it) {
        ++rep.refinement_iterations;
        double c_next;
        if (prev1.r != prev2.r) {
            c_next = prev1.c - prev1.r * (prev1.c - prev2.c) / (prev1.r - prev2.r);
        } else {
            c_next = 0.5 * (a.c + b.c);
        }
        const double lo_gap = std::max(1e-16, 1e-12 * std::abs(a.c));
        if (!(c_next > a.c + lo_gap && c_next < b.c - lo_gap)) {
            c_next = 0.5 * (a.c + b.c);
        }
        std::optional<Eval> e = try_eval(c_next);
        if (!e) {
            e = try_eval(0.5 * (a.c + b.c));
            if (!e) {
                throw NonConvergenceError(
                    "speed refinement stalled: profile solves failed inside bracket [" +
                        std::to_string(a.c) + ", " + std::to_string(b.c) + "]",
                    {std::abs(prev1.r)}, std::move(prev1.F), prev1.c);
            }
        }
        prev2 = std::move(prev1);
        prev1 = *e;
        if (std::abs(e->r) <= cfg.tol_speed) {
            return {std::move(e->F), e->c};
        }
        if ((e->r > 0.0) == (a.r > 0.0)) {
            a = std::move(*e);
        } else {
            b = std::move(*e);
        }
    }
    throw NonConvergenceError(
        "speed root-finding exceeded max_speed_iters = " + std::to_string(cfg.max_speed_iters) +
            ", best |F(0) - 1/2| = " + std::to_string(std::abs(prev1.r)),
        {std::abs(prev1.r)}, std::move(prev1.F), prev1.c);
}

WaveProfile solve_kpp(const Grid& g, const ModelParams& p, const SolverConfig& cfg,
                      SpeedSolveReport* report) {
    validate_params(p);
    validate_config(cfg);
    detail::ProfileDriver driver(g, p, cfg, nullptr, kpp_initial_profile(g));
    const ProfileForSpeed inner = [&driver](double c) { return driver.solve(c); };
    SpeedSolveReport local;
    SpeedSolveReport& rep = report ? *report : local;
    WaveProfile wp = solve_speed_normalized(inner, g, p, cfg, &rep);
    rep.inner_iterations = driver.total_iterations();
    rep.assemblies_dominant =
        assemble_kpp_sweep(wp.F, wp.c, g, p).weakly_diagonally_dominant();
    return wp;
}

}  // namespace bgpwave
