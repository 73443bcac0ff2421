#pragma once

#include <array>
#include <span>
#include <vector>

#include "bgpwave/grid.hpp"

namespace bgpwave {

/// Tridiagonal linear system. sub[0] and super[n-1] are unused.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> rhs;

    explicit TridiagonalSystem(int n)
        : sub(static_cast<size_t>(n), 0.0),
          diag(static_cast<size_t>(n), 0.0),
          super(static_cast<size_t>(n), 0.0),
          rhs(static_cast<size_t>(n), 0.0) {}

    int size() const noexcept { return static_cast<int>(diag.size()); }

    /// Weak row dominance |diag_i| >= |sub_i| + |super_i|; the Thomas solve
    /// below does not pivot, so assemblies are expected to satisfy this.
    bool weakly_diagonally_dominant() const noexcept;

    /// y = A u, for residual checks.
    std::vector<double> apply(std::span<const double> u) const;
};

/// Thomas elimination without pivoting; O(n).
/// Throws SingularSystemError naming the row on a vanishing pivot.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys);

/// In-place variant reusing caller workspace (cprime/solution sized n).
void solve_tridiagonal(const TridiagonalSystem& sys, std::span<double> cprime,
                       std::span<double> solution);

/// Central first derivative on the grid interior; second-order one-sided
/// 3-point stencils at the two endpoints.
std::vector<double> central_first_derivative(std::span<const double> u, const Grid& g);
void central_first_derivative(std::span<const double> u, const Grid& g, std::span<double> out);

/// Composite trapezoid of u over nodes [i_from, i_to]; zero when i_from == i_to.
double trapezoid(std::span<const double> u, const Grid& g, int i_from, int i_to);

/// Block tridiagonal system with 2x2 blocks (row-major {a00,a01,a10,a11}).
/// Row i: sub[i] U_{i-1} + diag[i] U_i + super[i] U_{i+1} = rhs[i].
struct BlockTridiagonalSystem {
    std::vector<std::array<double, 4>> sub;
    std::vector<std::array<double, 4>> diag;
    std::vector<std::array<double, 4>> super;
    std::vector<std::array<double, 2>> rhs;

    explicit BlockTridiagonalSystem(int n)
        : sub(static_cast<size_t>(n), {0, 0, 0, 0}),
          diag(static_cast<size_t>(n), {0, 0, 0, 0}),
          super(static_cast<size_t>(n), {0, 0, 0, 0}),
          rhs(static_cast<size_t>(n), {0, 0}) {}

    int size() const noexcept { return static_cast<int>(diag.size()); }
};

/// Block Thomas elimination; throws SingularSystemError on a singular block pivot.
std::vector<std::array<double, 2>> solve_block_tridiagonal(const BlockTridiagonalSystem& sys);

}  // namespace bgpwave
