#include "bgpwave/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bgpwave/errors.hpp"
#include "bgpwave/numerics.hpp"

namespace bgpwave {

std::vector<double> compute_Rtilde(std::span<const double> Qprime, std::span<const double> F,
                                   const Grid& g, const ModelParams& p,
                                   std::vector<std::string>* warnings) {
    const int n = g.size();
    if (static_cast<int>(Qprime.size()) != n || static_cast<int>(F.size()) != n) {
        throw DimensionError("compute_Rtilde: array length does not match grid");
    }
    if (warnings) {
        for (int i = 0; i < n; ++i) {
            if (Qprime[static_cast<size_t>(i)] < -1e-10) {
                warnings->push_back("compute_Rtilde: Q' negative (min at first hit x = " +
                                    std::to_string(g.x(i)) + "); value gain should be nonnegative");
                break;
            }
        }
    }
    const double h = g.step();
    std::vector<double> Rt(static_cast<size_t>(n), 0.0);
    double acc = 0.0;
    for (int i = n - 2; i >= 0; --i) {
        const double ui = Qprime[static_cast<size_t>(i)] * F[static_cast<size_t>(i)];
        const double uj = Qprime[static_cast<size_t>(i + 1)] * F[static_cast<size_t>(i + 1)];
        acc += h * (ui + uj) * 0.5;
        Rt[static_cast<size_t>(i)] = acc;
    }
    const double half_alpha = 0.5 * p.alpha;
    for (auto& v : Rt) v *= half_alpha;
    return Rt;
}

TransitionPoint locate_transition(std::span<const double> R, const Grid& g) {
    const int n = g.size();
    if (static_cast<int>(R.size()) != n) {
        throw DimensionError("locate_transition: array length does not match grid");
    }
    int m = -1;
    for (int i = n - 1; i >= 0; --i) {
        if (R[static_cast<size_t>(i)] >= 1.0) {
            m = i;
            break;
        }
    }
    TransitionPoint t;
    if (m < 0) {
        t.side = TransitionSide::left_of_grid;
        t.x0 = -std::numeric_limits<double>::infinity();
        return t;
    }
    if (m == n - 1) {
        t.side = TransitionSide::right_of_grid;
        t.x0 = std::numeric_limits<double>::infinity();
        t.node = m;
        return t;
    }
    const double Rm = R[static_cast<size_t>(m)];
    const double Rn = R[static_cast<size_t>(m + 1)];
    t.side = TransitionSide::on_grid;
    t.node = m;
    t.theta = (Rm - 1.0) / (Rm - Rn);  // Rm >= 1 > Rn, so theta in [0, 1)
    t.x0 = g.x(m) + g.step() * t.theta;
    return t;
}

double compute_gamma(std::span<const double> s_star, std::span<const double> F, const Grid& g) {
    const int n = g.size();
    if (static_cast<int>(s_star.size()) != n || static_cast<int>(F.size()) != n) {
        throw DimensionError("compute_gamma: array length does not match grid");
    }
    std::vector<double> Fp = central_first_derivative(F, g);
    std::vector<double> u(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        u[static_cast<size_t>(i)] = s_star[static_cast<size_t>(i)] * (-Fp[static_cast<size_t>(i)]);
    }
    const double raw = trapezoid(u, g, 0, n - 1);
    return std::clamp(raw, 0.0, 1.0 + 1e-6);
}

double source_mass(std::span<const double> F, std::span<const double> R,
                   std::span<const double> s_star, int m, int i, const Grid& g) {
    const int n = g.size();
    if (static_cast<int>(F.size()) != n || static_cast<int>(R.size()) != n ||
        static_cast<int>(s_star.size()) != n) {
        throw DimensionError("source_mass: array length does not match grid");
    }
    if (i < 0 || i > n - 1 || m < 0 || m > n - 1) {
        throw IndexError("source_mass: node index out of range");
    }
    if (i < m) {
        return 1.0 - F[static_cast<size_t>(i)];
    }
    std::vector<double> Rp = central_first_derivative(R, g);
    const double h = g.step();
    double acc = 0.0;
    for (int j = m; j < i; ++j) {
        acc += h * (Rp[static_cast<size_t>(j)] * F[static_cast<size_t>(j)] +
                    Rp[static_cast<size_t>(j + 1)] * F[static_cast<size_t>(j + 1)]) * 0.5;
    }
    return 1.0 - F[static_cast<size_t>(i)] * R[static_cast<size_t>(i)] + acc;
}

std::vector<double> source_mass_table(std::span<const double> F, std::span<const double> R,
                                      std::span<const double> s_star,
                                      const TransitionPoint& transition, const Grid& g) {
    const int n = g.size();
    if (static_cast<int>(F.size()) != n || static_cast<int>(R.size()) != n ||
        static_cast<int>(s_star.size()) != n) {
        throw DimensionError("source_mass_table: array length does not match grid");
    }
    const double h = g.step();
    std::vector<double> mass(static_cast<size_t>(n));

    if (transition.side == TransitionSide::right_of_grid) {
        for (int i = 0; i < n; ++i) mass[static_cast<size_t>(i)] = 1.0 - F[static_cast<size_t>(i)];
        return mass;
    }
    if (transition.side == TransitionSide::left_of_grid) {
        std::vector<double> Fp = central_first_derivative(F, g);
        double acc = 0.0;
        mass[0] = 0.0;
        for (int i = 1; i < n; ++i) {
            const double ua = s_star[static_cast<size_t>(i - 1)] * (-Fp[static_cast<size_t>(i - 1)]);
            const double ub = s_star[static_cast<size_t>(i)] * (-Fp[static_cast<size_t>(i)]);
            acc += h * (ua + ub) * 0.5;
            mass[static_cast<size_t>(i)] = acc;
        }
        return mass;
    }

    const int m = transition.node;
    std::vector<double> Rp = central_first_derivative(R, g);
    for (int i = 0; i < m; ++i) mass[static_cast<size_t>(i)] = 1.0 - F[static_cast<size_t>(i)];
    double acc = 0.0;
    mass[static_cast<size_t>(m)] =
        1.0 - F[static_cast<size_t>(m)] * R[static_cast<size_t>(m)];
    for (int i = m + 1; i < n; ++i) {
        acc += h * (Rp[static_cast<size_t>(i - 1)] * F[static_cast<size_t>(i - 1)] +
                    Rp[static_cast<size_t>(i)] * F[static_cast<size_t>(i)]) * 0.5;
        mass[static_cast<size_t>(i)] =
            1.0 - F[static_cast<size_t>(i)] * R[static_cast<size_t>(i)] + acc;
    }
    return mass;
}

CouplingState build_coupling_state(std::span<const double> Qprime, std::span<const double> F,
                                   const Grid& g, const ModelParams& p,
                                   std::vector<std::string>* warnings) {
    CouplingState st;
    st.Rtilde = compute_Rtilde(Qprime, F, g, p, warnings);
    const int n = g.size();
    st.R.resize(static_cast<size_t>(n));
    st.s_star.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double r = std::exp(-g.x(i)) * st.Rtilde[static_cast<size_t>(i)];
        st.R[static_cast<size_t>(i)] = r;
        st.s_star[static_cast<size_t>(i)] = std::clamp(r, 0.0, 1.0);
    }
    st.transition = locate_transition(st.R, g);
    st.gamma = compute_gamma(st.s_star, F, g);
    return st;
}

}  // namespace bgpwave
