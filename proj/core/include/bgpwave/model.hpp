#pragma once

#include <string>
#include <vector>

namespace bgpwave {

/// Economic constants of the knowledge-diffusion model.
struct ModelParams {
    double kappa = 1.0;  ///< diffusivity of log-knowledge
    double alpha = 2.0;  ///< search effectiveness (meeting rate is alpha*sqrt(s))
    double rho = 10.0;   ///< discount rate
};

/// Throws ParameterError unless kappa, alpha, rho are all positive and finite.
void validate_params(const ModelParams& p);

/// Regime checks for the value-function equation. Throws ParameterError when
/// rho <= kappa (the right tail of Q is ill posed); returns warnings for the
/// soft recommendation alpha > kappa.
std::vector<std::string> validate_regime(const ModelParams& p);

/// Iteration tolerances and caps.
struct SolverConfig {
    double tol_profile = 1e-8;   ///< sup-norm tolerance on successive F and Qtilde iterates
    double tol_speed = 1e-8;     ///< tolerance on |F(0) - 1/2|
    int max_inner = 500;         ///< cap on inner profile iterations per residual evaluation
    int max_speed_iters = 100;   ///< cap on speed root-finding iterations
    int max_outer = 200;         ///< cap on outer coupling iterations
    double relaxation = 1.0;     ///< damping factor in (0, 1] for outer updates
};

/// Throws ParameterError on non-positive tolerances or caps, or relaxation
/// outside (0, 1].
void validate_config(const SolverConfig& cfg);

}  // namespace bgpwave
