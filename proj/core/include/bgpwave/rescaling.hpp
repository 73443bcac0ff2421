#pragma once

#include <limits>
#include <vector>

#include "bgpwave/grid.hpp"
#include "bgpwave/model.hpp"

namespace bgpwave {

/// Tables of the rescaling weight g and the variable coefficients of the
/// rescaled value equation phi1*Qt + phi2*Qt' - kappa*Qt'' = g e^x H(R).
///
/// g is an arctan branch for x <= 0 and e^{-x} for x >= 0; g1, g2 are its
/// analytic branch derivatives (not numerical differences). phi1/phi2 are
/// valid for the stored speed and empty until build_phi_tables runs.
struct RescaleTables {
    std::vector<double> g;
    std::vector<double> g1;
    std::vector<double> g2;
    std::vector<double> phi1;
    std::vector<double> phi2;
    double speed = std::numeric_limits<double>::quiet_NaN();
};

/// Scalar branch formulas. At x = 0 the two branches agree (g = 1, g' = -1,
/// g'' = +1); the right branch is used there for determinism.
double g_value(double x);
double g_deriv1(double x);
double g_deriv2(double x);

/// Tabulates g, g1, g2 on the grid; phi tables are left empty.
RescaleTables build_g_tables(const Grid& g);

/// Fills phi1 = rho - c - c g1/g - kappa(2 g1^2 - g g2)/g^2 and
/// phi2 = c + 2 kappa g1/g for the given speed. For x >= 0 both reduce to the
/// constants rho - kappa and c - 2 kappa. Throws ParameterError when
/// rho <= kappa.
void build_phi_tables(RescaleTables& tables, double c, const ModelParams& p);

}  // namespace bgpwave
