#include "bgpwave/numerics.hpp"

#include <cmath>
#include <string>

#include "bgpwave/errors.hpp"

namespace bgpwave {

bool TridiagonalSystem::weakly_diagonally_dominant() const noexcept {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        const double off = (i > 0 ? std::abs(sub[static_cast<size_t>(i)]) : 0.0) +
                           (i < n - 1 ? std::abs(super[static_cast<size_t>(i)]) : 0.0);
        if (std::abs(diag[static_cast<size_t>(i)]) < off) return false;
    }
    return true;
}

std::vector<double> TridiagonalSystem::apply(std::span<const double> u) const {
    const size_t n = diag.size();
    if (u.size() != n) throw DimensionError("apply: vector length does not match system size");
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) {
        double v = diag[i] * u[i];
        if (i > 0) v += sub[i] * u[i - 1];
        if (i + 1 < n) v += super[i] * u[i + 1];
        y[i] = v;
    }
    return y;
}

void solve_tridiagonal(const TridiagonalSystem& sys, std::span<double> cprime,
                       std::span<double> solution) {
    const size_t n = sys.diag.size();
    if (n == 0) throw DimensionError("solve_tridiagonal: empty system");
    if (cprime.size() != n || solution.size() != n) {
        throw DimensionError("solve_tridiagonal: workspace length mismatch");
    }

    auto pivot_ok = [](double den, double scale) {
        return std::abs(den) > 1e-14 * scale && den != 0.0;
    };

    double scale0 = std::abs(sys.diag[0]) + std::abs(sys.super.size() > 1 ? sys.super[0] : 0.0);
    if (scale0 == 0.0) scale0 = 1.0;
    if (!pivot_ok(sys.diag[0], scale0)) {
        throw SingularSystemError("zero pivot in tridiagonal elimination at row 0", 0);
    }
    cprime[0] = (n > 1) ? sys.super[0] / sys.diag[0] : 0.0;
    solution[0] = sys.rhs[0] / sys.diag[0];

    for (size_t i = 1; i < n; ++i) {
        const double den = sys.diag[i] - sys.sub[i] * cprime[i - 1];
        double scale = std::abs(sys.diag[i]) + std::abs(sys.sub[i]) +
                       (i + 1 < n ? std::abs(sys.super[i]) : 0.0);
        if (scale == 0.0) scale = 1.0;
        if (!pivot_ok(den, scale)) {
            throw SingularSystemError(
                "zero pivot in tridiagonal elimination at row " + std::to_string(i),
                static_cast<int>(i));
        }
        cprime[i] = (i + 1 < n) ? sys.super[i] / den : 0.0;
        solution[i] = (sys.rhs[i] - sys.sub[i] * solution[i - 1]) / den;
    }
    for (size_t i = n - 1; i-- > 0;) {
        solution[i] -= cprime[i] * solution[i + 1];
    }
}

std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
    const size_t n = sys.diag.size();
    std::vector<double> cprime(n), solution(n);
    solve_tridiagonal(sys, cprime, solution);
    return solution;
}

void central_first_derivative(std::span<const double> u, const Grid& g, std::span<double> out) {
    const int n = g.size();
    if (static_cast<int>(u.size()) != n) {
        throw DimensionError("central_first_derivative: array length " +
                             std::to_string(u.size()) + " does not match grid size " +
                             std::to_string(n));
    }
    if (static_cast<int>(out.size()) != n) {
        throw DimensionError("central_first_derivative: output length mismatch");
    }
    const double h = g.step();
    const double inv2h = 1.0 / (2.0 * h);
    for (int i = 1; i < n - 1; ++i) {
        out[static_cast<size_t>(i)] =
            (u[static_cast<size_t>(i + 1)] - u[static_cast<size_t>(i - 1)]) * inv2h;
    }
    out[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv2h;
    out[static_cast<size_t>(n - 1)] =
        (3.0 * u[static_cast<size_t>(n - 1)] - 4.0 * u[static_cast<size_t>(n - 2)] +
         u[static_cast<size_t>(n - 3)]) * inv2h;
}

std::vector<double> central_first_derivative(std::span<const double> u, const Grid& g) {
    std::vector<double> d(u.size());
    central_first_derivative(u, g, d);
    return d;
}

double trapezoid(std::span<const double> u, const Grid& g, int i_from, int i_to) {
    const int n = g.size();
    if (static_cast<int>(u.size()) != n) {
        throw DimensionError("trapezoid: array length does not match grid size");
    }
    if (i_from < 0 || i_to > n - 1 || i_from > i_to) {
        throw IndexError("trapezoid: invalid index range [" + std::to_string(i_from) + ", " +
                         std::to_string(i_to) + "] for grid of size " + std::to_string(n));
    }
    const double h = g.step();
    double sum = 0.0;
    for (int j = i_from; j < i_to; ++j) {
        sum += h * (u[static_cast<size_t>(j)] + u[static_cast<size_t>(j + 1)]) * 0.5;
    }
    return sum;
}

namespace {

// 2x2 helpers, row-major {a00, a01, a10, a11}
using Block = std::array<double, 4>;
using Vec2 = std::array<double, 2>;

inline Block mul(const Block& a, const Block& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Vec2 mulv(const Block& a, const Vec2& v) {
    return {a[0] * v[0] + a[1] * v[1], a[2] * v[0] + a[3] * v[1]};
}

inline Block sub2(const Block& a, const Block& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

}  // namespace

std::vector<std::array<double, 2>> solve_block_tridiagonal(const BlockTridiagonalSystem& sys) {
    const size_t n = sys.diag.size();
    if (n == 0) throw DimensionError("solve_block_tridiagonal: empty system");

    std::vector<Block> dp(n);
    std::vector<Vec2> rp(n);
    dp[0] = sys.diag[0];
    rp[0] = sys.rhs[0];

    auto invert = [](const Block& b, size_t row) -> Block {
        const double det = b[0] * b[3] - b[1] * b[2];
        const double scale = std::abs(b[0]) + std::abs(b[1]) + std::abs(b[2]) + std::abs(b[3]);
        if (std::abs(det) <= 1e-14 * scale * scale || det == 0.0) {
            throw SingularSystemError(
                "singular 2x2 pivot block at row " + std::to_string(row), static_cast<int>(row));
        }
        const double inv = 1.0 / det;
        return {b[3] * inv, -b[1] * inv, -b[2] * inv, b[0] * inv};
    };

    for (size_t i = 1; i < n; ++i) {
        const Block w = mul(sys.sub[i], invert(dp[i - 1], i - 1));
        dp[i] = sub2(sys.diag[i], mul(w, sys.super[i - 1]));
        const Vec2 wr = mulv(w, rp[i - 1]);
        rp[i] = {sys.rhs[i][0] - wr[0], sys.rhs[i][1] - wr[1]};
    }

    std::vector<Vec2> u(n);
    u[n - 1] = mulv(invert(dp[n - 1], n - 1), rp[n - 1]);
    for (size_t i = n - 1; i-- > 0;) {
        const Vec2 cu = mulv(sys.super[i], u[i + 1]);
        const Vec2 b = {rp[i][0] - cu[0], rp[i][1] - cu[1]};
        u[i] = mulv(invert(dp[i], i), b);
    }
    return u;
}

}  // namespace bgpwave
