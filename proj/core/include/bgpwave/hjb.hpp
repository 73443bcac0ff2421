#pragma once

#include <span>
#include <string>
#include <vector>

#include "bgpwave/grid.hpp"
#include "bgpwave/model.hpp"
#include "bgpwave/rescaling.hpp"

namespace bgpwave {

/// Value function in its three representations: the bounded rescaled Qtilde,
/// the recovered Q = Qtilde/g, and the recovered derivative Q'.
struct ValueProfile {
    std::vector<double> Qtilde;
    std::vector<double> Q;
    std::vector<double> Qprime;
};

/// Optimized production-plus-search payoff: 2r above r = 1, 1 + r^2 on
/// [0, 1], and 1 for r < 0. Continuous at both branch points.
double hamiltonian_H(double r);

/// Maximizing search policy: clamp of r to [0, 1].
double policy_S(double r);

/// Solves the rescaled value equation
///   phi1 Qt + phi2 Qt' - kappa Qt'' = g e^x H(R)
/// with the Robin condition Qt'(-a) = (g1/g)(-a) Qt(-a) on the left and
/// Qt'(a) = 0 on the right (the images of Q'(-a) = 0 and Q'(a) = Q(a)), both
/// discretized by ghost-point elimination at second order. Recovers
/// Q = Qt/g and Q' = (Qt' - (g1/g) Qt)/g with Qt' by central differences.
///
/// phi1/phi2 are rebuilt internally for the given speed, so stale phi tables
/// in `tables` are not a hazard. A non-positive phi1 (possible in the
/// small-rho sweeps where c exceeds rho) is reported through `warnings`, not
/// an error; the assembled system stays invertible.
ValueProfile solve_Qtilde(std::span<const double> R, double c, const Grid& g,
                          const ModelParams& p, const RescaleTables& tables,
                          std::vector<std::string>* warnings = nullptr);

/// Same solve with an explicit unrescaled source f in place of e^x H(R):
/// (rho - c) Q + c Q' - kappa Q'' = f. Used by tests and oracles.
ValueProfile solve_Qtilde_rhs(std::span<const double> f, double c, const Grid& g,
                              const ModelParams& p, const RescaleTables& tables,
                              std::vector<std::string>* warnings = nullptr);

/// Closed-form solution of (rho - c) u + c u' - kappa u'' = e^x with
/// u'(-a) = 0, u'(a) = u(a):
///   u(x) = z1 e^{l1 x} + z2 e^{-l2 x} + e^x/(rho - kappa),
/// exponents l1,2 = (+-c + sqrt(c^2 + 4 kappa (rho - c)))/(2 kappa).
/// Test oracle for solve_Qtilde with R == 0. Throws DomainError when
/// rho <= c or rho <= kappa.
std::vector<double> analytic_g_solution(double c, const Grid& g, const ModelParams& p);

}  // namespace bgpwave
