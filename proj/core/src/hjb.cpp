#include "bgpwave/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bgpwave/errors.hpp"
#include "bgpwave/numerics.hpp"

namespace bgpwave {

double hamiltonian_H(double r) {
    if (r > 1.0) return 2.0 * r;
    if (r >= 0.0) return 1.0 + r * r;
    return 1.0;
}

double policy_S(double r) { return std::clamp(r, 0.0, 1.0); }

namespace {

ValueProfile solve_rescaled(std::span<const double> rescaled_rhs, double c, const Grid& g,
                            const ModelParams& p, const RescaleTables& tables,
                            std::vector<std::string>* warnings) {
    const int n = g.size();
    if (static_cast<int>(tables.g.size()) != n) {
        throw DimensionError("solve_Qtilde: rescale tables do not match grid");
    }
    for (const auto& w : validate_regime(p)) {
        if (warnings) warnings->push_back(w);
    }

    // phi tables are rebuilt for this speed; the tables argument only
    // supplies g, g1, g2.
    RescaleTables t;
    t.g = tables.g;
    t.g1 = tables.g1;
    t.g2 = tables.g2;
    build_phi_tables(t, c, p);

    double min_phi1 = t.phi1[0];
    for (double v : t.phi1) min_phi1 = std::min(min_phi1, v);
    if (warnings && min_phi1 <= 0.0) {
        warnings->push_back("solve_Qtilde: phi1 reaches " + std::to_string(min_phi1) +
                            " (c likely exceeds rho); outside the comparison-principle regime");
    }

    const double h = g.step();
    const double kappa = p.kappa;
    TridiagonalSystem sys(n);
    for (int i = 1; i < n - 1; ++i) {
        const size_t k = static_cast<size_t>(i);
        sys.sub[k] = -t.phi2[k] / (2.0 * h) - kappa / (h * h);
        sys.diag[k] = t.phi1[k] + 2.0 * kappa / (h * h);
        sys.super[k] = t.phi2[k] / (2.0 * h) - kappa / (h * h);
        sys.rhs[k] = rescaled_rhs[k];
    }
    // Left Robin row by ghost elimination: Qt'(-a) = mu Qt(-a).
    const double mu = t.g1[0] / t.g[0];
    sys.diag[0] = t.phi1[0] + t.phi2[0] * mu + 2.0 * kappa / (h * h) + 2.0 * kappa * mu / h;
    sys.super[0] = -2.0 * kappa / (h * h);
    sys.rhs[0] = rescaled_rhs[0];
    // Right Neumann row: Qt'(a) = 0.
    const size_t last = static_cast<size_t>(n - 1);
    sys.sub[last] = -2.0 * kappa / (h * h);
    sys.diag[last] = t.phi1[last] + 2.0 * kappa / (h * h);
    sys.rhs[last] = rescaled_rhs[last];

    if (warnings && !sys.weakly_diagonally_dominant()) {
        warnings->push_back("solve_Qtilde: assembled system is not diagonally dominant");
    }

    ValueProfile vp;
    vp.Qtilde = solve_tridiagonal(sys);
    vp.Q.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        vp.Q[static_cast<size_t>(i)] =
            vp.Qtilde[static_cast<size_t>(i)] / t.g[static_cast<size_t>(i)];
    }
    // Q' from the bounded Qtilde: Q' = (Qt' - (g1/g) Qt)/g. Differencing Qt
    // instead of Q avoids amplifying the e^x growth.
    std::vector<double> Qt_x = central_first_derivative(vp.Qtilde, g);
    vp.Qprime.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        vp.Qprime[k] = Qt_x[k] / t.g[k] - (t.g1[k] / (t.g[k] * t.g[k])) * vp.Qtilde[k];
    }
    return vp;
}

}  // namespace

ValueProfile solve_Qtilde(std::span<const double> R, double c, const Grid& g,
                          const ModelParams& p, const RescaleTables& tables,
                          std::vector<std::string>* warnings) {
    const int n = g.size();
    if (static_cast<int>(R.size()) != n) {
        throw DimensionError("solve_Qtilde: R length does not match grid");
    }
    std::vector<double> rhs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        rhs[k] = tables.g[k] * std::exp(g.x(i)) * hamiltonian_H(R[k]);
    }
    return solve_rescaled(rhs, c, g, p, tables, warnings);
}

ValueProfile solve_Qtilde_rhs(std::span<const double> f, double c, const Grid& g,
                              const ModelParams& p, const RescaleTables& tables,
                              std::vector<std::string>* warnings) {
    const int n = g.size();
    if (static_cast<int>(f.size()) != n) {
        throw DimensionError("solve_Qtilde_rhs: source length does not match grid");
    }
    std::vector<double> rhs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        rhs[k] = tables.g[k] * f[k];
    }
    return solve_rescaled(rhs, c, g, p, tables, warnings);
}

std::vector<double> analytic_g_solution(double c, const Grid& g, const ModelParams& p) {
    if (p.rho <= c) {
        throw DomainError("analytic_g_solution: requires rho > c, got rho = " +
                          std::to_string(p.rho) + ", c = " + std::to_string(c));
    }
    if (p.rho <= p.kappa) {
        throw DomainError("analytic_g_solution: requires rho > kappa");
    }
    const double a = g.half_width();
    const double kappa = p.kappa;
    const double disc = std::sqrt(c * c + 4.0 * kappa * (p.rho - c));
    const double l1 = (c + disc) / (2.0 * kappa);
    const double l2 = (-c + disc) / (2.0 * kappa);
    const double pref = std::exp(-a) / (p.rho - p.kappa);
    const double z1 =
        pref / ((l2 * (l1 - 1.0) / (l2 + 1.0)) * std::exp((l1 + 2.0 * l2) * a) -
                l1 * std::exp(-l1 * a));
    const double z2 =
        pref / (l2 * std::exp(l2 * a) -
                (l1 * (l2 + 1.0) / (l1 - 1.0)) * std::exp(-(l2 + 2.0 * l1) * a));
    const int n = g.size();
    std::vector<double> u(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = g.x(i);
        u[static_cast<size_t>(i)] = z1 * std::exp(l1 * x) + z2 * std::exp(-l2 * x) +
                                    std::exp(x) / (p.rho - p.kappa);
    }
    return u;
}

}  // namespace bgpwave
