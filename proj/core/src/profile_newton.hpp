#pragma once

// Internal solver for the profile boundary value problems
//   -c F' - kappa F'' = alpha F * mass(F),   F(-a) = 1, F(a) = rbc(c),
// where mass is either the logistic 1 - F (Fisher-KPP) or the frozen-coupling
// reaction mass in its integrated-by-parts form. The driver is a Newton
// iteration with pseudo-transient continuation: each step solves
//   (I/dtau + J(F)) dF = -N(F)
// with the exact Jacobian. For the coupled mass the prefix sum makes J lower
// Hessenberg; carrying the linearized sum as a second unknown per node turns
// the step into a 2x2 block tridiagonal solve, so every step stays O(n).
// dtau follows the residual ratio (SER) and shrinks on rejected steps, which
// carries the iteration from arbitrary starts into the Newton basin. Fixed
// points solve the discrete BVP regardless of the dtau path.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "bgpwave/coupling.hpp"
#include "bgpwave/errors.hpp"
#include "bgpwave/grid.hpp"
#include "bgpwave/kpp.hpp"
#include "bgpwave/model.hpp"
#include "bgpwave/numerics.hpp"

namespace bgpwave::detail {

// Frozen coupling data for the F equation; null means the KPP problem.
struct FrozenCoupling {
    std::span<const double> R;
    std::span<const double> s_star;
    std::span<const double> Rprime;  // central differences of R
    TransitionPoint transition;
};

struct PtcStats {
    int iterations = 0;
    bool converged = false;
};

class ProfileProblem {
public:
    ProfileProblem(const Grid& grid, const ModelParams& params, double c,
                   const FrozenCoupling* coupling)
        : grid_(grid),
          params_(params),
          c_(c),
          rbc_(relaxed_right_bc(c, grid, params)),
          coupling_(coupling) {}

    const Grid& grid() const noexcept { return grid_; }
    const ModelParams& params() const noexcept { return params_; }
    double speed() const noexcept { return c_; }
    double right_bc() const noexcept { return rbc_; }

    bool has_sigma_chain() const noexcept {
        return coupling_ && coupling_->transition.side == TransitionSide::on_grid;
    }

    // Reaction mass at every node for the current iterate. For an on-grid
    // transition the first cell of the lagged sum covers only the fraction of
    // [x_m, x_{m+1}] right of the interpolated x0, which keeps the discrete
    // source continuous as the crossing moves through a node.
    void mass(std::span<const double> F, std::span<double> out) const {
        const int n = grid_.size();
        if (!coupling_ || coupling_->transition.side == TransitionSide::right_of_grid) {
            for (int i = 0; i < n; ++i) out[i] = 1.0 - F[i];
            return;
        }
        const double h = grid_.step();
        if (coupling_->transition.side == TransitionSide::left_of_grid) {
            const auto& s = coupling_->s_star;
            double acc = 0.0;
            out[0] = 0.0;
            double fp_prev = -(-3.0 * F[0] + 4.0 * F[1] - F[2]) / (2.0 * h);
            for (int i = 1; i < n; ++i) {
                const double fp =
                    (i < n - 1) ? -(F[i + 1] - F[i - 1]) / (2.0 * h)
                                : -(3.0 * F[n - 1] - 4.0 * F[n - 2] + F[n - 3]) / (2.0 * h);
                acc += h * (s[i - 1] * fp_prev + s[i] * fp) * 0.5;
                out[i] = acc;
                fp_prev = fp;
            }
            return;
        }
        const auto& R = coupling_->R;
        const auto& Rp = coupling_->Rprime;
        const int m = coupling_->transition.node;
        const double theta = coupling_->transition.theta;
        for (int i = 0; i <= m; ++i) out[i] = 1.0 - F[i];
        const double vm = Rp[m] * F[m];
        const double vm1 = Rp[m + 1] * F[m + 1];
        const double v0 = (1.0 - theta) * vm + theta * vm1;
        double acc = h * (1.0 - theta) * (v0 + vm1) * 0.5;
        if (m + 1 < n) out[m + 1] = 1.0 - F[m + 1] * R[m + 1] + acc;
        for (int i = m + 2; i < n; ++i) {
            acc += h * (Rp[i - 1] * F[i - 1] + Rp[i] * F[i]) * 0.5;
            out[i] = 1.0 - F[i] * R[i] + acc;
        }
    }

    void residual(std::span<const double> F, std::span<const double> mass_vals,
                  std::span<double> N) const {
        const int n = grid_.size();
        const double h = grid_.step();
        const double inv2h = 1.0 / (2.0 * h);
        const double invh2 = 1.0 / (h * h);
        const double kappa = params_.kappa;
        const double alpha = params_.alpha;
        for (int i = 1; i < n - 1; ++i) {
            N[i] = -c_ * (F[i + 1] - F[i - 1]) * inv2h -
                   kappa * (F[i + 1] - 2.0 * F[i] + F[i - 1]) * invh2 -
                   alpha * F[i] * mass_vals[i];
        }
        N[0] = F[0] - 1.0;
        N[n - 1] = F[n - 1] - rbc_;
    }

    // d(-alpha F_i mass_i)/dF_i without the prefix-sum coupling (the sigma
    // variable carries that part when present).
    double local_jacobian(std::span<const double> F, std::span<const double> mass_vals,
                          int i) const {
        const double alpha = params_.alpha;
        if (!coupling_ || coupling_->transition.side == TransitionSide::right_of_grid) {
            return -alpha * (1.0 - 2.0 * F[i]);
        }
        if (coupling_->transition.side == TransitionSide::left_of_grid) {
            // sigma chain omitted here; the diagonal alone is enough for the
            // PTC globalization in this weak-coupling mode.
            return -alpha * mass_vals[i];
        }
        const int m = coupling_->transition.node;
        if (i <= m) return -alpha * (1.0 - 2.0 * F[i]);
        return -alpha * (mass_vals[i] - F[i] * coupling_->R[i]);
    }

    const FrozenCoupling* coupling() const noexcept { return coupling_; }

private:
    const Grid& grid_;
    ModelParams params_;
    double c_;
    double rbc_;
    const FrozenCoupling* coupling_;
};

// Workspace reused across PTC iterations and solves on one grid.
struct PtcWorkspace {
    std::vector<double> mass_vals, N, mass_new, N_new, F_new, dF;
    std::vector<double> cprime, sol;  // tridiagonal scratch
    std::vector<std::array<double, 4>> blk_dp;  // block elimination scratch
    std::vector<std::array<double, 2>> blk_rp;
    std::vector<std::array<double, 2>> blk_u;
    void resize(int n) {
        const size_t un = static_cast<size_t>(n);
        mass_vals.resize(un);
        N.resize(un);
        mass_new.resize(un);
        N_new.resize(un);
        F_new.resize(un);
        dF.resize(un);
        cprime.resize(un);
        sol.resize(un);
        blk_dp.resize(un);
        blk_rp.resize(un);
        blk_u.resize(un);
    }
};

inline double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// One PTC-Newton solve; F holds the start on entry and the result on exit.
inline PtcStats ptc_solve(const ProfileProblem& prob, std::vector<double>& F, int max_iters,
                          PtcWorkspace& ws) {
    const int n = prob.grid().size();
    const double h = prob.grid().step();
    const double kappa = prob.params().kappa;
    const double alpha = prob.params().alpha;
    const double sub_c = prob.speed() / (2.0 * h) - kappa / (h * h);
    const double sup_c = -prob.speed() / (2.0 * h) - kappa / (h * h);
    const double diag_c = 2.0 * kappa / (h * h);
    const double tol_step = 1e-12;
    const double tol_resid = 3e-12 * std::max(1.0, alpha);
    const double dtau_floor = 1e-3 / alpha;

    ws.resize(n);
    PtcStats stats;
    F[0] = 1.0;
    F[static_cast<size_t>(n - 1)] = prob.right_bc();

    prob.mass(F, ws.mass_vals);
    prob.residual(F, ws.mass_vals, ws.N);
    double nrm = sup_norm(ws.N);
    if (nrm <= tol_resid) {
        stats.converged = true;
        return stats;
    }

    double dtau = 1.0 / alpha;

    const bool blocks = prob.has_sigma_chain();
    TridiagonalSystem tri(blocks ? 1 : n);
    if (!blocks) {
        for (int i = 1; i < n - 1; ++i) {
            tri.sub[static_cast<size_t>(i)] = sub_c;
            tri.super[static_cast<size_t>(i)] = sup_c;
        }
        tri.diag[0] = 1.0;
        tri.diag[static_cast<size_t>(n - 1)] = 1.0;
    }

    const FrozenCoupling* cp = prob.coupling();
    const int m = blocks ? cp->transition.node : -1;
    const double theta = blocks ? cp->transition.theta : 0.0;

    // Fused assembly + block elimination for the (dF, sigma) system; sigma is
    // the linearized lagged sum, zero for i <= m, seeded by the fractional
    // first cell at i = m + 1 and chained forward after that.
    auto block_step = [&]() -> bool {
        const auto& Rp = cp->Rprime;
        auto& dp = ws.blk_dp;
        auto& rp = ws.blk_rp;
        auto& usol = ws.blk_u;
        const double inv_dtau = 1.0 / dtau;

        auto row_blocks = [&](int i, std::array<double, 4>& A, std::array<double, 4>& B,
                              double r[2]) {
            if (i == 0 || i == n - 1) {
                A = {0, 0, 0, 0};
                B = {1, 0, 0, 1};
                r[0] = -ws.N[static_cast<size_t>(i)];
                r[1] = 0.0;
                return;
            }
            if (i == m + 1) {
                A = {sub_c, 0.0, -(h * (1.0 - theta) * (1.0 - theta) * Rp[m]) * 0.5, 0.0};
                B = {inv_dtau + diag_c + prob.local_jacobian(F, ws.mass_vals, i),
                     (i > m) ? -alpha * F[static_cast<size_t>(i)] : 0.0,
                     -(h * (1.0 - theta * theta) * Rp[i]) * 0.5, 1.0};
            } else if (i > m + 1) {
                A = {sub_c, 0.0, -(h * 0.5) * Rp[i - 1], -1.0};
                B = {inv_dtau + diag_c + prob.local_jacobian(F, ws.mass_vals, i),
                     -alpha * F[static_cast<size_t>(i)], -(h * 0.5) * Rp[i], 1.0};
            } else {
                A = {sub_c, 0.0, 0.0, 0.0};
                B = {inv_dtau + diag_c + prob.local_jacobian(F, ws.mass_vals, i), 0.0, 0.0,
                     1.0};
            }
            r[0] = -ws.N[static_cast<size_t>(i)];
            r[1] = 0.0;
        };

        // forward elimination; C_{i-1} has a single (0,0) entry sup_c except
        // after a boundary row
        {
            std::array<double, 4> A, B;
            double r[2];
            row_blocks(0, A, B, r);
            dp[0] = B;
            rp[0] = {r[0], r[1]};
        }
        for (int i = 1; i < n; ++i) {
            std::array<double, 4> A, B;
            double r[2];
            row_blocks(i, A, B, r);
            const auto& P = dp[static_cast<size_t>(i - 1)];
            const double det = P[0] * P[3] - P[1] * P[2];
            if (det == 0.0 || !std::isfinite(det)) return false;
            const double inv = 1.0 / det;
            const double i00 = P[3] * inv, i01 = -P[1] * inv;
            const double i10 = -P[2] * inv, i11 = P[0] * inv;
            // W = A * inv(P)
            const double w00 = A[0] * i00 + A[1] * i10;
            const double w01 = A[0] * i01 + A[1] * i11;
            const double w10 = A[2] * i00 + A[3] * i10;
            const double w11 = A[2] * i01 + A[3] * i11;
            const double c_prev = (i - 1 == 0) ? 0.0 : sup_c;  // C_{i-1}(0,0)
            dp[static_cast<size_t>(i)] = {B[0] - w00 * c_prev, B[1], B[2] - w10 * c_prev, B[3]};
            const auto& rprev = rp[static_cast<size_t>(i - 1)];
            rp[static_cast<size_t>(i)] = {r[0] - (w00 * rprev[0] + w01 * rprev[1]),
                                          r[1] - (w10 * rprev[0] + w11 * rprev[1])};
        }
        // back substitution
        {
            const auto& P = dp[static_cast<size_t>(n - 1)];
            const double det = P[0] * P[3] - P[1] * P[2];
            if (det == 0.0 || !std::isfinite(det)) return false;
            const double inv = 1.0 / det;
            const auto& r = rp[static_cast<size_t>(n - 1)];
            usol[static_cast<size_t>(n - 1)] = {(P[3] * r[0] - P[1] * r[1]) * inv,
                                                (-P[2] * r[0] + P[0] * r[1]) * inv};
        }
        for (int i = n - 2; i >= 0; --i) {
            const double c_here = (i == 0 || i == n - 1) ? 0.0 : sup_c;  // C_i(0,0)
            const auto& un = usol[static_cast<size_t>(i + 1)];
            const auto& r = rp[static_cast<size_t>(i)];
            const double b0 = r[0] - c_here * un[0];
            const double b1 = r[1];
            const auto& P = dp[static_cast<size_t>(i)];
            const double det = P[0] * P[3] - P[1] * P[2];
            if (det == 0.0 || !std::isfinite(det)) return false;
            const double inv = 1.0 / det;
            usol[static_cast<size_t>(i)] = {(P[3] * b0 - P[1] * b1) * inv,
                                            (-P[2] * b0 + P[0] * b1) * inv};
        }
        for (int i = 0; i < n; ++i) ws.dF[static_cast<size_t>(i)] = usol[static_cast<size_t>(i)][0];
        return true;
    };

    for (int it = 1; it <= max_iters; ++it) {
        stats.iterations = it;
        // A near-zero pivot from an indefinite Jacobian (possible far from
        // the solution and in the reaction-dominated right region) is treated
        // exactly like a rejected step: shrinking dtau restores dominance.
        bool solved = true;
        if (!blocks) {
            try {
                for (int i = 1; i < n - 1; ++i) {
                    tri.diag[static_cast<size_t>(i)] =
                        1.0 / dtau + diag_c + prob.local_jacobian(F, ws.mass_vals, i);
                    tri.rhs[static_cast<size_t>(i)] = -ws.N[static_cast<size_t>(i)];
                }
                tri.rhs[0] = -ws.N[0];
                tri.rhs[static_cast<size_t>(n - 1)] = -ws.N[static_cast<size_t>(n - 1)];
                solve_tridiagonal(tri, ws.cprime, ws.sol);
                std::copy(ws.sol.begin(), ws.sol.end(), ws.dF.begin());
            } catch (const SingularSystemError&) {
                solved = false;
            }
        } else {
            solved = block_step();
        }
        if (!solved) {
            dtau = std::max(dtau / 4.0, dtau_floor);
            continue;
        }

        for (int i = 0; i < n; ++i) {
            ws.F_new[static_cast<size_t>(i)] =
                F[static_cast<size_t>(i)] + ws.dF[static_cast<size_t>(i)];
        }
        prob.mass(ws.F_new, ws.mass_new);
        prob.residual(ws.F_new, ws.mass_new, ws.N_new);
        const double nn = sup_norm(ws.N_new);

        if (!std::isfinite(nn) || nn > 5.0 * nrm) {
            dtau = std::max(dtau / 4.0, dtau_floor);
            continue;
        }
        F.swap(ws.F_new);
        ws.mass_vals.swap(ws.mass_new);
        ws.N.swap(ws.N_new);
        const double ratio = std::clamp(nrm / std::max(nn, 1e-300), 0.5, 2.0);
        dtau = std::min(dtau * ratio, 1e13);
        nrm = nn;
        if (sup_norm(ws.dF) <= tol_step && nrm <= tol_resid) {
            stats.converged = true;
            return stats;
        }
    }
    return stats;
}

// Profile solver for varying speeds: warm start from the nearest archived
// speed, cold start from the initial ramp, and continuation in c as a last
// resort. Deterministic: archive order depends only on the call sequence.
class ProfileDriver {
public:
    ProfileDriver(const Grid& grid, const ModelParams& params, const SolverConfig& cfg,
                  const FrozenCoupling* coupling, std::vector<double> initial_profile)
        : grid_(grid),
          params_(params),
          coupling_(coupling),
          init_(std::move(initial_profile)),
          warm_budget_(cfg.max_inner),
          cold_budget_(40 * cfg.max_inner),
          step_budget_(6 * cfg.max_inner) {}

    long long total_iterations() const noexcept { return total_iterations_; }

    void seed(double c, std::vector<double> profile) {
        push(c, std::move(profile));
    }

    std::vector<double> solve(double c) {
        std::vector<double> F;
        bool ok = false;
        if (!archive_.empty()) {
            F = nearest(c);
            ok = attempt(c, F, warm_budget_);
        }
        if (!ok) {
            F = init_;
            ok = attempt(c, F, cold_budget_);
        }
        if (!ok && !archive_.empty()) {
            ok = continuation(c, F);
        }
        if (!ok) {
            throw NonConvergenceError(
                "profile solve did not converge at c = " + std::to_string(c), {}, F, c);
        }
        push(c, F);
        return F;
    }

private:
    bool attempt(double c, std::vector<double>& F, int budget) {
        ProfileProblem prob(grid_, params_, c, coupling_);
        const PtcStats st = ptc_solve(prob, F, budget, ws_);
        total_iterations_ += st.iterations;
        return st.converged;
    }

    bool continuation(double c_target, std::vector<double>& F_out) {
        size_t best = 0;
        for (size_t k = 1; k < archive_.size(); ++k) {
            if (std::abs(archive_[k].first - c_target) < std::abs(archive_[best].first - c_target))
                best = k;
        }
        double cur_c = archive_[best].first;
        std::vector<double> cur_F = archive_[best].second;
        double step = c_target - cur_c;
        for (int guard = 0; guard < 400 && cur_c != c_target; ++guard) {
            const double remaining = c_target - cur_c;
            const double trial =
                (std::abs(step) >= std::abs(remaining)) ? c_target : cur_c + step;
            std::vector<double> F = cur_F;
            if (attempt(trial, F, step_budget_)) {
                cur_c = trial;
                cur_F.swap(F);
                step *= 2.0;
            } else {
                step *= 0.5;
                if (std::abs(step) < 1e-7 * (1.0 + std::abs(c_target))) return false;
            }
        }
        if (cur_c != c_target) return false;
        F_out = std::move(cur_F);
        return true;
    }

    std::vector<double> nearest(double c) const {
        size_t best = 0;
        for (size_t k = 1; k < archive_.size(); ++k) {
            if (std::abs(archive_[k].first - c) < std::abs(archive_[best].first - c)) best = k;
        }
        return archive_[best].second;
    }

    void push(double c, std::vector<double> profile) {
        archive_.emplace_back(c, std::move(profile));
        if (archive_.size() > 12) archive_.erase(archive_.begin());
    }

    const Grid& grid_;
    ModelParams params_;
    const FrozenCoupling* coupling_;
    std::vector<double> init_;
    int warm_budget_;
    int cold_budget_;
    int step_budget_;
    std::vector<std::pair<double, std::vector<double>>> archive_;
    PtcWorkspace ws_;
    long long total_iterations_ = 0;
};

}  // namespace bgpwave::detail
