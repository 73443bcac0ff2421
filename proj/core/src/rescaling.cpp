#include "bgpwave/rescaling.hpp"

#include <cmath>

#include "bgpwave/errors.hpp"

namespace bgpwave {

double g_value(double x) {
    if (x < 0.0) return 1.0 + 2.0 * std::atan(1.0) - 2.0 * std::atan(x + 1.0);
    return std::exp(-x);
}

double g_deriv1(double x) {
    if (x < 0.0) {
        const double u = x + 1.0;
        return -2.0 / (1.0 + u * u);
    }
    return -std::exp(-x);
}

double g_deriv2(double x) {
    if (x < 0.0) {
        const double u = x + 1.0;
        const double d = 1.0 + u * u;
        return 4.0 * u / (d * d);
    }
    return std::exp(-x);
}

RescaleTables build_g_tables(const Grid& grid) {
    const int n = grid.size();
    RescaleTables t;
    t.g.resize(static_cast<size_t>(n));
    t.g1.resize(static_cast<size_t>(n));
    t.g2.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        t.g[static_cast<size_t>(i)] = g_value(x);
        t.g1[static_cast<size_t>(i)] = g_deriv1(x);
        t.g2[static_cast<size_t>(i)] = g_deriv2(x);
    }
    return t;
}

void build_phi_tables(RescaleTables& tables, double c, const ModelParams& p) {
    if (!std::isfinite(c)) throw ParameterError("build_phi_tables: speed must be finite");
    if (p.rho <= p.kappa) {
        throw ParameterError("build_phi_tables: rho = " + std::to_string(p.rho) +
                             " must exceed kappa = " + std::to_string(p.kappa));
    }
    const size_t n = tables.g.size();
    tables.phi1.resize(n);
    tables.phi2.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double g = tables.g[i];
        const double g1 = tables.g1[i];
        const double g2 = tables.g2[i];
        // For x >= 0: g1/g == -1 and (2 g1^2 - g g2)/g^2 == 1 exactly in
        // floating point, so the entries are bit-identical constants there.
        tables.phi1[i] = p.rho - c - c * (g1 / g) - p.kappa * (2.0 * g1 * g1 - g * g2) / (g * g);
        tables.phi2[i] = c + 2.0 * p.kappa * (g1 / g);
    }
    tables.speed = c;
}

}  // namespace bgpwave
