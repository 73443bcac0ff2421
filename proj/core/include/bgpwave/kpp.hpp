#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bgpwave/grid.hpp"
#include "bgpwave/model.hpp"

namespace bgpwave {

/// Wave profile F on the grid together with its selected speed.
struct WaveProfile {
    std::vector<double> F;
    double c = 0.0;
};

/// Decay exponent of the linearized right tail: the relevant root of
/// kappa b^2 - c b + alpha = 0. Below the critical speed (c^2 < 4 kappa alpha)
/// the root is complex and the decay rate is its real part c/(2 kappa);
/// above it, the smaller real root. Throws DomainError for c <= 0.
double beta_of_c(double c, const ModelParams& p);

/// Relaxed right boundary value F(a) = (1/2) exp(-beta(c) a) from the
/// linearized tail.
double relaxed_right_bc(double c, double half_width, const ModelParams& p);
double relaxed_right_bc(double c, const Grid& g, const ModelParams& p);

/// The affine ramp (a - x) / 2a used to start the iteration.
std::vector<double> kpp_initial_profile(const Grid& g);

/// One lagged-source sweep of the Fisher-KPP scheme: solves the tridiagonal
/// system -c F' - kappa F'' = alpha F_prev (1 - F_prev) with F(-a) = 1 and
/// F(a) = relaxed_right_bc(c), central differences throughout.
std::vector<double> kpp_inner_solve(std::span<const double> F_prev, double c, const Grid& g,
                                    const ModelParams& p);

/// Bookkeeping from a speed-normalized solve.
struct SpeedSolveReport {
    int residual_evaluations = 0;   ///< calls to the profile solver
    int refinement_iterations = 0;  ///< secant/bisection steps inside the bracket
    long long inner_iterations = 0; ///< total Newton iterations in profile solves
    bool bracket_rescanned = false; ///< the 64-speed scan was needed
    bool assemblies_dominant = true;
};

/// Converged profile for a given speed; throws NonConvergenceError if the
/// profile cannot be produced at that speed.
using ProfileForSpeed = std::function<std::vector<double>(double)>;

/// Root-finds the speed c so that the converged profile satisfies
/// F(0) = 1/2 within cfg.tol_speed. Starts from the bracket
/// [1e-3, 2 sqrt(kappa alpha) + 1]; if no sign change is found (or an end
/// point cannot be evaluated) a uniform 64-speed scan re-brackets. Inside the
/// verified bracket a secant step is tried first and falls back to bisection.
/// Throws NoWaveError when no bracket exists, NonConvergenceError when
/// cfg.max_speed_iters is exhausted.
WaveProfile solve_speed_normalized(const ProfileForSpeed& profile_for_speed, const Grid& g,
                                   const ModelParams& p, const SolverConfig& cfg,
                                   SpeedSolveReport* report = nullptr);

/// Full Fisher-KPP baseline: speed-normalized solve of the s* == 1 problem.
WaveProfile solve_kpp(const Grid& g, const ModelParams& p, const SolverConfig& cfg,
                      SpeedSolveReport* report = nullptr);

}  // namespace bgpwave
