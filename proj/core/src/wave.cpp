#include "bgpwave/wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bgpwave/numerics.hpp"
#include "bgpwave/rescaling.hpp"
#include "profile_newton.hpp"

namespace bgpwave {

namespace {

double sup_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<double> recover_Qprime(std::span<const double> Qtilde, const RescaleTables& t,
                                   const Grid& g) {
    std::vector<double> Qt_x = central_first_derivative(Qtilde, g);
    std::vector<double> Qp(Qtilde.size());
    for (size_t k = 0; k < Qtilde.size(); ++k) {
        Qp[k] = Qt_x[k] / t.g[k] - (t.g1[k] / (t.g[k] * t.g[k])) * Qtilde[k];
    }
    return Qp;
}

// Remap a warm-start array onto the target grid by node alignment (the grids
// share the step and both contain x = 0); out-of-range nodes take the edge
// values.
std::vector<double> remap(const std::vector<double>& src, double src_h, const Grid& dst) {
    const int n = dst.size();
    std::vector<double> out(static_cast<size_t>(n));
    const int src_n = static_cast<int>(src.size());
    const int src_zero = (src_n - 1) / 2;
    for (int i = 0; i < n; ++i) {
        const double x = dst.x(i);
        const double pos = x / src_h + src_zero;
        const int j = static_cast<int>(std::llround(pos));
        if (j < 0) {
            out[static_cast<size_t>(i)] = src.front();
        } else if (j >= src_n) {
            out[static_cast<size_t>(i)] = src.back();
        } else {
            out[static_cast<size_t>(i)] = src[static_cast<size_t>(j)];
        }
    }
    return out;
}

struct OuterState {
    std::vector<double> F;
    std::vector<double> Qtilde;
    double c = 0.0;
};

// One full attempt at the outer loop with fixed starting damping.
CoupledSolution run_outer_loop(const Grid& g, const ModelParams& p, const SolverConfig& cfg,
                               const OuterState& start, double omega0,
                               const RescaleTables& tables) {
    const int n = g.size();
    CoupledSolution sol;
    sol.relaxation_used = omega0;

    std::vector<double> F = start.F;
    std::vector<double> Qtilde = start.Qtilde;
    double c = start.c;
    double omega = omega0;
    int stall_anchor = 0;

    const std::vector<double> ramp = kpp_initial_profile(g);

    bool converged = false;
    int outer = 0;
    for (outer = 1; outer <= cfg.max_outer; ++outer) {
        // (a) coupling quantities from the previous iterates
        std::vector<double> Qprime = recover_Qprime(Qtilde, tables, g);
        CouplingState coupling = build_coupling_state(Qprime, F, g, p, nullptr);

        // (b) value update from H(R)
        std::vector<std::string> qt_warnings;
        ValueProfile value = solve_Qtilde(coupling.R, c, g, p, tables, &qt_warnings);
        if (sol.warnings.empty() && !qt_warnings.empty()) {
            sol.warnings.insert(sol.warnings.end(), qt_warnings.begin(), qt_warnings.end());
        }

        // (c) profile and speed update with the coupling frozen
        std::vector<double> Rprime = central_first_derivative(coupling.R, g);
        detail::FrozenCoupling frozen{coupling.R, coupling.s_star, Rprime, coupling.transition};
        detail::ProfileDriver driver(g, p, cfg, &frozen, ramp);
        driver.seed(c, F);
        const ProfileForSpeed inner = [&driver](double cc) { return driver.solve(cc); };
        WaveProfile updated = solve_speed_normalized(inner, g, p, cfg);

        if (omega != 1.0) {
            for (int i = 0; i < n; ++i) {
                const size_t k = static_cast<size_t>(i);
                updated.F[k] = (1.0 - omega) * F[k] + omega * updated.F[k];
                value.Qtilde[k] = (1.0 - omega) * Qtilde[k] + omega * value.Qtilde[k];
            }
            updated.c = (1.0 - omega) * c + omega * updated.c;
        }

        const double dF = sup_diff(updated.F, F);
        const double dQ = sup_diff(value.Qtilde, Qtilde);
        const double dc = std::abs(updated.c - c);
        sol.residual_history.push_back(std::max({dF, dQ, dc}));

        F = std::move(updated.F);
        Qtilde = std::move(value.Qtilde);
        c = updated.c;

        if (dF <= cfg.tol_profile && dQ <= cfg.tol_profile && dc <= cfg.tol_speed) {
            converged = true;
            break;
        }

        // Stall detection: no 10% residual drop over a 12-iteration window
        // means the outer map is cycling; halve the damping and move on.
        const int hist = static_cast<int>(sol.residual_history.size());
        if (hist - stall_anchor >= 12 && omega > 1.0 / 16.0) {
            const double now = sol.residual_history[static_cast<size_t>(hist - 1)];
            const double then = sol.residual_history[static_cast<size_t>(hist - 12)];
            if (now > 0.9 * then) {
                omega *= 0.5;
                stall_anchor = hist;
                sol.warnings.push_back("outer loop stalled; relaxation lowered to " +
                                       std::to_string(omega));
            }
        }
    }

    sol.iterations = std::min(outer, cfg.max_outer);
    sol.converged = converged;
    sol.relaxation_used = omega;

    // Final consistent state: recompute the coupling from the accepted (F, Qtilde).
    std::vector<double> Qprime = recover_Qprime(Qtilde, tables, g);
    sol.coupling = build_coupling_state(Qprime, F, g, p, &sol.warnings);
    sol.value.Qtilde = std::move(Qtilde);
    sol.value.Q.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        sol.value.Q[k] = sol.value.Qtilde[k] / tables.g[k];
    }
    sol.value.Qprime = std::move(Qprime);
    sol.profile.F = std::move(F);
    sol.profile.c = c;
    return sol;
}

Diagnostics compute_diagnostics(const CoupledSolution& sol, const Grid& g,
                                const ModelParams& p) {
    Diagnostics d;
    const int n = g.size();
    const double c = sol.profile.c;
    d.gamma = sol.coupling.gamma;
    d.speed_relation_residual =
        std::abs(c - 2.0 * std::sqrt(p.kappa * p.alpha * d.gamma)) / c;
    const int tail_from = (4 * (n - 1)) / 5;
    double acc = 0.0;
    for (int i = tail_from; i < n; ++i) {
        acc += sol.value.Q[static_cast<size_t>(i)] * std::exp(-g.x(i));
    }
    d.tail_ratio = acc / static_cast<double>(n - tail_from);
    d.decay_rate_theory = c / (2.0 * p.kappa);
    try {
        d.decay_rate_estimate = estimate_decay_rate(sol.profile.F, g);
    } catch (const TailWindowError&) {
        d.decay_rate_estimate = std::numeric_limits<double>::quiet_NaN();
    }
    d.left_value_limit = sol.value.Q[0];
    d.x0 = sol.coupling.transition.on_grid() ? sol.coupling.transition.x0
                                             : std::numeric_limits<double>::quiet_NaN();
    return d;
}

}  // namespace

CoupledSolution solve_coupled(const Grid& g, const ModelParams& p, const SolverConfig& cfg,
                              const CoupledOptions& options) {
    validate_config(cfg);
    std::vector<std::string> regime_warnings = validate_regime(p);
    const RescaleTables tables = build_g_tables(g);
    const int n = g.size();

    // Initialization: the KPP wave for F and c, Q = e^x for the value.
    // Warm starts skip the KPP solve entirely.
    WaveProfile kpp;
    if (!options.warm_start || options.force_kpp) {
        kpp = solve_kpp(g, p, cfg);
    }

    if (options.force_kpp) {
        // s* frozen at 1 decouples the F equation: the KPP solve above IS the
        // coupled solve. Fill the bundle from one value solve for reporting.
        CoupledSolution sol;
        sol.profile = kpp;
        sol.converged = true;
        sol.iterations = 0;
        sol.warnings = regime_warnings;
        std::vector<double> ones(static_cast<size_t>(n), 1.0);
        ValueProfile value = solve_Qtilde(ones, kpp.c, g, p, tables, &sol.warnings);
        sol.value = std::move(value);
        sol.coupling.Rtilde.assign(static_cast<size_t>(n), 0.0);
        sol.coupling.R.assign(static_cast<size_t>(n), 1.0);
        sol.coupling.s_star.assign(static_cast<size_t>(n), 1.0);
        sol.coupling.transition.side = TransitionSide::right_of_grid;
        sol.coupling.transition.x0 = std::numeric_limits<double>::infinity();
        sol.coupling.transition.node = n - 1;
        sol.coupling.gamma = compute_gamma(sol.coupling.s_star, sol.profile.F, g);
        sol.diagnostics = compute_diagnostics(sol, g, p);
        return sol;
    }

    OuterState start;
    if (options.warm_start) {
        start.F = remap(options.warm_start->F, options.warm_start->source_step, g);
        start.Qtilde = remap(options.warm_start->Qtilde, options.warm_start->source_step, g);
        start.c = options.warm_start->c;
    } else {
        start.F = kpp.F;
        start.Qtilde.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            const size_t k = static_cast<size_t>(i);
            start.Qtilde[k] = tables.g[k] * std::exp(g.x(i));
        }
        start.c = kpp.c;
    }

    // Restart ladder: a lost wave or exhausted caps at one damping level is
    // retried from scratch with half the damping.
    std::string last_failure;
    CoupledSolution last_attempt;
    bool have_attempt = false;
    double omega = cfg.relaxation;
    for (int attempt = 0; attempt < 5; ++attempt, omega *= 0.5) {
        try {
            CoupledSolution sol = run_outer_loop(g, p, cfg, start, omega, tables);
            sol.restarts = attempt;
            sol.warnings.insert(sol.warnings.begin(), regime_warnings.begin(),
                                regime_warnings.end());
            if (sol.converged) {
                sol.diagnostics = compute_diagnostics(sol, g, p);
                return sol;
            }
            last_attempt = std::move(sol);
            have_attempt = true;
            last_failure = "outer loop hit max_outer = " + std::to_string(cfg.max_outer);
        } catch (const NoWaveError& e) {
            last_failure = e.what();
        } catch (const NonConvergenceError& e) {
            last_failure = e.what();
        }
    }
    if (!have_attempt) {
        last_attempt.profile = kpp;
        last_attempt.warnings = regime_warnings;
    }
    last_attempt.converged = false;
    throw CoupledSolveError("coupled solve failed after restarts: " + last_failure,
                            std::move(last_attempt));
}

std::vector<double> coupled_F_inner(std::span<const double> F_prev, std::span<const double> R,
                                    std::span<const double> s_star, double c, const Grid& g,
                                    const ModelParams& p) {
    const int n = g.size();
    if (static_cast<int>(F_prev.size()) != n || static_cast<int>(R.size()) != n ||
        static_cast<int>(s_star.size()) != n) {
        throw DimensionError("coupled_F_inner: array length does not match grid");
    }
    const TransitionPoint transition = locate_transition(R, g);
    std::vector<double> Rprime = central_first_derivative(R, g);
    detail::FrozenCoupling frozen{R, s_star, Rprime, transition};
    detail::ProfileProblem prob(g, p, c, &frozen);

    std::vector<double> mass(static_cast<size_t>(n));
    prob.mass(F_prev, mass);

    const double h = g.step();
    TridiagonalSystem sys(n);
    const double sub_c = c / (2.0 * h) - p.kappa / (h * h);
    const double sup_c = -c / (2.0 * h) - p.kappa / (h * h);
    const double diag_c = 2.0 * p.kappa / (h * h);
    const bool on_grid = transition.side == TransitionSide::on_grid;
    for (int i = 1; i < n - 1; ++i) {
        const size_t k = static_cast<size_t>(i);
        sys.sub[k] = sub_c;
        sys.super[k] = sup_c;
        const double fp = F_prev[k];
        if (transition.side == TransitionSide::left_of_grid) {
            // no anchored form; fully lagged source
            sys.diag[k] = diag_c;
            sys.rhs[k] = p.alpha * fp * mass[k];
        } else if (on_grid && i > transition.node) {
            // mass = 1 - F R + S: the -alpha F_prev R F term goes implicit on
            // the diagonal, the sum stays lagged at F_prev (1 + S = mass + F R)
            sys.diag[k] = diag_c + p.alpha * fp * R[k];
            sys.rhs[k] = p.alpha * fp * (mass[k] + fp * R[k]);
        } else {
            // mass = 1 - F (left of the transition, or s* == 1 everywhere)
            sys.diag[k] = diag_c + p.alpha * fp;
            sys.rhs[k] = p.alpha * fp;
        }
    }
    sys.diag[0] = 1.0;
    sys.rhs[0] = 1.0;
    sys.diag[static_cast<size_t>(n - 1)] = 1.0;
    sys.rhs[static_cast<size_t>(n - 1)] = relaxed_right_bc(c, g, p);
    return solve_tridiagonal(sys);
}

double estimate_decay_rate(std::span<const double> F, const Grid& g) {
    const int n = g.size();
    if (static_cast<int>(F.size()) != n) {
        throw DimensionError("estimate_decay_rate: array length does not match grid");
    }
    const double a = g.half_width();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (int i = 0; i < n; ++i) {
        const double x = g.x(i);
        if (x < a / 2.0 || x > 3.0 * a / 4.0) continue;
        const double f = F[static_cast<size_t>(i)];
        if (!(f > 1e-12)) continue;
        const double y = std::log(f);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) {
        throw TailWindowError("estimate_decay_rate: fewer than two usable tail points in [a/2, 3a/4]");
    }
    const double denom = count * sxx - sx * sx;
    if (denom == 0.0) {
        throw TailWindowError("estimate_decay_rate: degenerate fit window");
    }
    const double slope = (count * sxy - sx * sy) / denom;
    return -slope;
}

}  // namespace bgpwave
