#pragma once

#include <span>
#include <string>
#include <vector>

#include "bgpwave/grid.hpp"
#include "bgpwave/model.hpp"

namespace bgpwave {

/// Where the search-policy transition R = 1 sits relative to the grid.
enum class TransitionSide {
    on_grid,        ///< crossing bracketed by two nodes
    left_of_grid,   ///< R < 1 everywhere, nobody searches full time
    right_of_grid,  ///< R >= 1 everywhere, everyone searches full time
};

/// Transition abscissa x0 with its bracketing node. For on_grid crossings,
/// node is the last index with R >= 1 and theta = (x0 - x_node)/h in [0, 1).
struct TransitionPoint {
    TransitionSide side = TransitionSide::left_of_grid;
    double x0 = 0.0;
    int node = -1;
    double theta = 0.0;

    bool on_grid() const noexcept { return side == TransitionSide::on_grid; }
};

/// Nonlocal coupling quantities derived from (Q', F).
struct CouplingState {
    std::vector<double> Rtilde;  ///< e^x R, bounded on the left, Rtilde(a) = 0
    std::vector<double> R;       ///< expected benefit of search
    std::vector<double> s_star;  ///< optimal policy clamp(R, 0, 1)
    TransitionPoint transition;
    double gamma = 0.0;          ///< effective reaction mass, integral of s*(-F')
};

/// Integrates Rtilde'(x) = -(alpha/2) Q'(x) F(x), Rtilde(a) = 0, backward
/// from the right end by trapezoid accumulation. Warns (when a sink is given)
/// if Q' dips negative.
std::vector<double> compute_Rtilde(std::span<const double> Qprime, std::span<const double> F,
                                   const Grid& g, const ModelParams& p,
                                   std::vector<std::string>* warnings = nullptr);

/// Linear-interpolation crossing of R through 1 between the last node with
/// R >= 1 and the next one.
TransitionPoint locate_transition(std::span<const double> R, const Grid& g);

/// Trapezoid of s*(-F') over the whole grid, clamped to [0, 1 + 1e-6].
double compute_gamma(std::span<const double> s_star, std::span<const double> F, const Grid& g);

/// Accumulated reaction mass at node i in the integrated-by-parts form:
/// 1 - F_i R_i + sum_{j=m}^{i-1} h (R'_j F_j + R'_{j+1} F_{j+1})/2 for i >= m,
/// and 1 - F_i left of the transition node m. R' is the central difference of R.
double source_mass(std::span<const double> F, std::span<const double> R,
                   std::span<const double> s_star, int m, int i, const Grid& g);

/// source_mass for every node in O(n), with the same accumulation order.
/// When the transition is left of the grid the anchored form does not apply
/// and the mass is the direct trapezoid of s*(-F'); right of the grid it is
/// the telescoped 1 - F.
std::vector<double> source_mass_table(std::span<const double> F, std::span<const double> R,
                                      std::span<const double> s_star,
                                      const TransitionPoint& transition, const Grid& g);

/// Convenience bundle: Rtilde, R = e^{-x} Rtilde, s* = clamp(R, 0, 1),
/// transition point, and gamma.
CouplingState build_coupling_state(std::span<const double> Qprime, std::span<const double> F,
                                   const Grid& g, const ModelParams& p,
                                   std::vector<std::string>* warnings = nullptr);

}  // namespace bgpwave
