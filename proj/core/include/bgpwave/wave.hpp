#pragma once

#include <span>
#include <string>
#include <vector>

#include "bgpwave/coupling.hpp"
#include "bgpwave/errors.hpp"
#include "bgpwave/grid.hpp"
#include "bgpwave/hjb.hpp"
#include "bgpwave/kpp.hpp"
#include "bgpwave/model.hpp"

namespace bgpwave {

/// Quantities that certify a converged solution against the theory.
struct Diagnostics {
    double speed_relation_residual = 0.0;  ///< |c - 2 sqrt(kappa alpha gamma)| / c
    double tail_ratio = 0.0;               ///< mean of Q e^{-x} over the right fifth
    double decay_rate_estimate = 0.0;      ///< fitted log-slope of the F tail
    double decay_rate_theory = 0.0;        ///< c / (2 kappa)
    double left_value_limit = 0.0;         ///< Q(-a)
    double x0 = 0.0;                       ///< transition point
    double gamma = 0.0;                    ///< effective reaction mass
};

/// Converged bundle of the coupled solve.
struct CoupledSolution {
    WaveProfile profile;
    ValueProfile value;
    CouplingState coupling;
    Diagnostics diagnostics;
    int iterations = 0;
    bool converged = false;
    double relaxation_used = 1.0;
    int restarts = 0;
    std::vector<double> residual_history;  ///< max of (dF, dQt, dc) per outer iteration
    std::vector<std::string> warnings;
};

/// Starting state carried between sweep runs. The profile arrays live on a
/// grid of half-width source_half_width with the same step; solve_coupled
/// remaps them onto its own grid (extending by the boundary values).
struct WarmStart {
    std::vector<double> F;
    std::vector<double> Qtilde;
    double c = 0.0;
    double source_half_width = 0.0;
    double source_step = 0.0;
};

struct CoupledOptions {
    bool force_kpp = false;            ///< freeze s* == 1: the solve degenerates to the KPP path
    const WarmStart* warm_start = nullptr;
};

/// Non-convergence of the outer loop; carries the last full bundle.
class CoupledSolveError : public NonConvergenceError {
public:
    CoupledSolveError(const std::string& msg, CoupledSolution last)
        : NonConvergenceError(msg, last.residual_history, last.profile.F, last.profile.c),
          last_(std::move(last)) {}
    const CoupledSolution& last_solution() const noexcept { return last_; }

private:
    CoupledSolution last_;
};

/// Outer fixed-point loop coupling F, Q, R, s*, and c:
/// start from the speed-normalized KPP profile and Q = e^x, then repeat
/// (coupling from the previous iterates) -> (Qtilde solve) -> (F and c by
/// speed re-normalization) until the sup-norm changes of F and Qtilde fall
/// below tol_profile and the speed change below tol_speed.
///
/// Robustness beyond the plain loop (all deterministic): outer updates are
/// damped by cfg.relaxation; the damping halves itself when the residual
/// stalls for 12 iterations; and on a failed iteration (lost wave or
/// exhausted caps) the whole loop restarts with halved damping, up to four
/// times. Throws CoupledSolveError when every attempt fails.
CoupledSolution solve_coupled(const Grid& g, const ModelParams& p, const SolverConfig& cfg,
                              const CoupledOptions& options = {});

/// One semi-implicit sweep of the discretized F equation with frozen
/// coupling data: the -alpha F_prev R F term sits on the diagonal, the
/// accumulated source sum is lagged at F_prev, and the Dirichlet values are
/// F(-a) = 1, F(a) = relaxed_right_bc(c). The transition index is derived
/// from R internally (fractional first cell at the interpolated x0).
std::vector<double> coupled_F_inner(std::span<const double> F_prev, std::span<const double> R,
                                    std::span<const double> s_star, double c, const Grid& g,
                                    const ModelParams& p);

/// Least-squares log-slope of F over [a/2, 3a/4] restricted to F > 1e-12;
/// returns the positive decay rate. Throws TailWindowError when fewer than
/// two points remain.
double estimate_decay_rate(std::span<const double> F, const Grid& g);

}  // namespace bgpwave
