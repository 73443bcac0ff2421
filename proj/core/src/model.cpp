#include "bgpwave/model.hpp"

#include <cmath>

#include "bgpwave/errors.hpp"

namespace bgpwave {

void validate_params(const ModelParams& p) {
    if (!(p.kappa > 0.0) || !std::isfinite(p.kappa)) {
        throw ParameterError("kappa must be positive, got " + std::to_string(p.kappa));
    }
    if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) {
        throw ParameterError("alpha must be positive, got " + std::to_string(p.alpha));
    }
    if (!(p.rho > 0.0) || !std::isfinite(p.rho)) {
        throw ParameterError("rho must be positive, got " + std::to_string(p.rho));
    }
}

std::vector<std::string> validate_regime(const ModelParams& p) {
    validate_params(p);
    if (p.rho <= p.kappa) {
        throw ParameterError("rho = " + std::to_string(p.rho) + " must exceed kappa = " +
                             std::to_string(p.kappa) + " for the value equation to be well posed");
    }
    std::vector<std::string> warnings;
    if (p.alpha <= p.kappa) {
        warnings.push_back("alpha = " + std::to_string(p.alpha) +
                           " does not exceed kappa = " + std::to_string(p.kappa) +
                           "; the wave regime needs alpha above a kappa-dependent threshold, "
                           "proceeding anyway");
    }
    return warnings;
}

void validate_config(const SolverConfig& cfg) {
    if (!(cfg.tol_profile > 0.0)) throw ParameterError("tol_profile must be positive");
    if (!(cfg.tol_speed > 0.0)) throw ParameterError("tol_speed must be positive");
    if (cfg.max_inner < 1) throw ParameterError("max_inner must be at least 1");
    if (cfg.max_speed_iters < 1) throw ParameterError("max_speed_iters must be at least 1");
    if (cfg.max_outer < 1) throw ParameterError("max_outer must be at least 1");
    if (!(cfg.relaxation > 0.0) || cfg.relaxation > 1.0) {
        throw ParameterError("relaxation must lie in (0, 1]");
    }
}

}  // namespace bgpwave
