// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria. Reference configuration: kappa = 1, alpha = 2, rho = 10,
// a = 40, h = 0.02.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "bgpwave/coupling.hpp"
#include "bgpwave/csv.hpp"
#include "bgpwave/errors.hpp"
#include "bgpwave/grid.hpp"
#include "bgpwave/hjb.hpp"
#include "bgpwave/kpp.hpp"
#include "bgpwave/numerics.hpp"
#include "bgpwave/rescaling.hpp"
#include "bgpwave/sweep.hpp"
#include "bgpwave/wave.hpp"

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  %2d. %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double wall_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) { return bgpwave::format_double(v); }

}  // namespace

int main() {
    using namespace bgpwave;
    const ModelParams ref{1.0, 2.0, 10.0};
    const SolverConfig cfg;
    const Grid grid = Grid::uniform(40.0, 0.02);
    const double c_fkpp = 2.0 * std::sqrt(2.0);

    // ---- 1. KPP baseline speed ----
    auto t0 = std::chrono::steady_clock::now();
    const WaveProfile kpp = solve_kpp(grid, ref, cfg);
    const double kpp_seconds = wall_seconds(t0);
    criterion(1, "KPP baseline speed |c - 2*sqrt(2)| <= 0.05, runtime <= 10 s",
              std::abs(kpp.c - c_fkpp) <= 0.05 && kpp_seconds <= 10.0,
              "c = " + fmt(kpp.c) + ", " + fmt(kpp_seconds) + " s");

    // ---- 2. coupled speed bounds ----
    t0 = std::chrono::steady_clock::now();
    const CoupledSolution sol = solve_coupled(grid, ref, cfg);
    const double solve_seconds = wall_seconds(t0);
    const double c = sol.profile.c;
    criterion(2, "coupled speed in [1.95, 2.8284) and below KPP by 0.01",
              sol.converged && c >= 2.0 - 0.05 && c < 2.8284 && c <= kpp.c - 0.01 &&
                  solve_seconds <= 60.0,
              "c = " + fmt(c) + ", c_kpp - c = " + fmt(kpp.c - c) + ", " +
                  fmt(solve_seconds) + " s");

    // ---- 3. speed relation ----
    criterion(3, "speed relation |c - 2*sqrt(kappa alpha gamma)|/c <= 0.05",
              sol.diagnostics.speed_relation_residual <= 0.05,
              "residual = " + fmt(sol.diagnostics.speed_relation_residual) +
                  ", gamma = " + fmt(sol.diagnostics.gamma));

    // ---- 4. value tail ----
    criterion(4, "mean Q e^{-x} over the right fifth within 5% of 1/9",
              std::abs(sol.diagnostics.tail_ratio - 1.0 / 9.0) <= 0.05 / 9.0,
              "tail ratio = " + fmt(sol.diagnostics.tail_ratio));

    // ---- 5. decay rate ----
    {
        const double lam = sol.diagnostics.decay_rate_estimate;
        const double lam_theory = sol.diagnostics.decay_rate_theory;
        criterion(5, "tail decay within 10% of c/(2 kappa) and above 1",
                  std::isfinite(lam) && std::abs(lam - lam_theory) <= 0.1 * lam_theory &&
                      lam > 1.0,
                  "fitted = " + fmt(lam) + ", theory = " + fmt(lam_theory));
    }

    // ---- 6. transition point converges in the interval size ----
    {
        SweepSpec spec;
        spec.params = ref;
        spec.a = 40.0;
        spec.h = 0.02;
        spec.config = cfg;
        spec.axis = SweepAxis::a;
        spec.values = {15, 20, 25, 30, 35, 40};
        const auto records = run_sweep(spec);
        bool all_ok = true;
        for (const auto& r : records) all_ok = all_ok && r.ok;
        const double gap = std::abs(records[4].x0 - records[5].x0);
        criterion(6, "a-sweep transition point |x0(35) - x0(40)| <= 0.1", all_ok && gap <= 0.1,
                  "gap = " + fmt(gap));
    }

    // ---- 7. monotone trends ----
    {
        auto run_axis = [&](SweepAxis axis, std::vector<double> values) {
            SweepSpec spec;
            spec.params = ref;
            spec.a = 40.0;
            spec.h = 0.02;
            spec.config = cfg;
            spec.axis = axis;
            spec.values = std::move(values);
            return run_sweep(spec);
        };
        const auto rho_rec = run_axis(SweepAxis::rho, {2.2, 5, 10, 20, 35});
        const auto alpha_rec = run_axis(SweepAxis::alpha, {1.2, 1.5, 2, 2.5, 3});
        const auto kappa_rec = run_axis(SweepAxis::kappa, {0.5, 1, 1.5, 2});
        auto strict = [](const std::vector<RunRecord>& rs, auto get, bool increasing) {
            for (const auto& r : rs) {
                if (!r.ok) return false;
            }
            for (size_t i = 1; i < rs.size(); ++i) {
                const double prev = get(rs[i - 1]);
                const double cur = get(rs[i]);
                if (increasing ? !(cur > prev) : !(cur < prev)) return false;
            }
            return true;
        };
        auto get_c = [](const RunRecord& r) { return r.c; };
        auto get_x0 = [](const RunRecord& r) { return r.x0; };
        const bool rho_ok = strict(rho_rec, get_c, false) && strict(rho_rec, get_x0, false);
        const bool alpha_ok = strict(alpha_rec, get_c, true);
        const bool kappa_ok = strict(kappa_rec, get_c, true) && strict(kappa_rec, get_x0, true);
        criterion(7, "trends: c,x0 down in rho; c up in alpha; c,x0 up in kappa",
                  rho_ok && alpha_ok && kappa_ok,
                  std::string("rho ") + (rho_ok ? "ok" : "BAD") + ", alpha " +
                      (alpha_ok ? "ok" : "BAD") + ", kappa " + (kappa_ok ? "ok" : "BAD"));
    }

    // ---- 8. invariant suite at convergence ----
    {
        const int n = grid.size();
        bool shape_ok = true;
        for (int i = 0; i < n; ++i) {
            const double f = sol.profile.F[static_cast<size_t>(i)];
            shape_ok = shape_ok && f >= -1e-6 && f <= 1.0 + 1e-6;
            if (i > 0) {
                shape_ok = shape_ok &&
                           f <= sol.profile.F[static_cast<size_t>(i - 1)] + 1e-6;
            }
        }
        const bool norm_ok =
            std::abs(sol.profile.F[static_cast<size_t>(grid.zero_index())] - 0.5) <= 1e-8;
        bool q_ok = true;
        for (int i = 1; i < n; ++i) {
            q_ok = q_ok && sol.value.Q[static_cast<size_t>(i)] >=
                               sol.value.Q[static_cast<size_t>(i - 1)] - 1e-6;
        }
        bool r_ok = true;
        for (int i = 1; i < n; ++i) {
            r_ok = r_ok && sol.coupling.R[static_cast<size_t>(i)] <=
                               sol.coupling.R[static_cast<size_t>(i - 1)] + 1e-6;
        }
        bool s_ok = true;
        for (int i = 0; i < n; ++i) {
            s_ok = s_ok && sol.coupling.s_star[static_cast<size_t>(i)] ==
                               std::clamp(sol.coupling.R[static_cast<size_t>(i)], 0.0, 1.0);
        }
        bool left_ok = sol.coupling.transition.on_grid();
        if (left_ok) {
            for (int i = 0; i <= sol.coupling.transition.node; ++i) {
                left_ok = left_ok && sol.coupling.s_star[static_cast<size_t>(i)] == 1.0;
            }
        }
        double r_at_x0 = 0.0;
        if (sol.coupling.transition.on_grid()) {
            const int m = sol.coupling.transition.node;
            const double theta = sol.coupling.transition.theta;
            const double rt = sol.coupling.Rtilde[static_cast<size_t>(m)] * (1.0 - theta) +
                              sol.coupling.Rtilde[static_cast<size_t>(m + 1)] * theta;
            r_at_x0 = std::exp(-sol.coupling.transition.x0) * rt;
        }
        const bool x0_ok = std::abs(r_at_x0 - 1.0) <= 1e-3;
        const bool gamma_ok = sol.coupling.gamma > 0.0 && sol.coupling.gamma < 1.0;

        // Dirichlet energy stable under a -> a + 5
        const Grid grid45 = Grid::uniform(45.0, 0.02);
        const CoupledSolution sol45 = solve_coupled(grid45, ref, cfg);
        auto energy = [](const std::vector<double>& F, const Grid& g) {
            const auto Fp = central_first_derivative(F, g);
            std::vector<double> sq(Fp.size());
            for (size_t i = 0; i < Fp.size(); ++i) sq[i] = Fp[i] * Fp[i];
            return trapezoid(sq, g, 0, g.size() - 1);
        };
        const double e40 = energy(sol.profile.F, grid);
        const double e45 = energy(sol45.profile.F, grid45);
        const bool energy_ok = std::abs(e45 - e40) <= 0.02 * e40;

        criterion(8, "invariant suite at convergence",
                  shape_ok && norm_ok && q_ok && r_ok && s_ok && left_ok && x0_ok &&
                      gamma_ok && energy_ok,
                  std::string("F ") + (shape_ok && norm_ok ? "ok" : "BAD") + ", Q " +
                      (q_ok ? "ok" : "BAD") + ", R " + (r_ok ? "ok" : "BAD") + ", s* " +
                      (s_ok && left_ok ? "ok" : "BAD") + ", R(x0) = " + fmt(r_at_x0) +
                      ", gamma = " + fmt(sol.coupling.gamma) + ", energy drift = " +
                      fmt(std::abs(e45 - e40) / e40));
    }

    // ---- 9. oracle equivalences ----
    {
        // tridiagonal vs dense elimination on random dominant 12x12 systems
        std::mt19937 rng(2026);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        bool tri_ok = true;
        for (int rep = 0; rep < 10; ++rep) {
            const int n = 12;
            TridiagonalSystem sys(n);
            std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
            for (int i = 0; i < n; ++i) {
                const double sub = (i > 0) ? dist(rng) : 0.0;
                const double sup = (i < n - 1) ? dist(rng) : 0.0;
                sys.sub[static_cast<size_t>(i)] = sub;
                sys.super[static_cast<size_t>(i)] = sup;
                sys.diag[static_cast<size_t>(i)] = std::abs(sub) + std::abs(sup) + 1.0;
                sys.rhs[static_cast<size_t>(i)] = dist(rng);
                A[i][i] = sys.diag[static_cast<size_t>(i)];
                if (i > 0) A[i][i - 1] = sub;
                if (i < n - 1) A[i][i + 1] = sup;
            }
            const auto x = solve_tridiagonal(sys);
            // dense Gaussian elimination with partial pivoting
            auto Ad = A;
            auto b = sys.rhs;
            for (int col = 0; col < n; ++col) {
                int piv = col;
                for (int r = col + 1; r < n; ++r) {
                    if (std::abs(Ad[r][col]) > std::abs(Ad[piv][col])) piv = r;
                }
                std::swap(Ad[piv], Ad[col]);
                std::swap(b[static_cast<size_t>(piv)], b[static_cast<size_t>(col)]);
                for (int r = col + 1; r < n; ++r) {
                    const double f = Ad[r][col] / Ad[col][col];
                    for (int k = col; k < n; ++k) Ad[r][k] -= f * Ad[col][k];
                    b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(col)];
                }
            }
            std::vector<double> y(n);
            for (int i = n - 1; i >= 0; --i) {
                double s = b[static_cast<size_t>(i)];
                for (int k = i + 1; k < n; ++k) s -= Ad[i][k] * y[static_cast<size_t>(k)];
                y[static_cast<size_t>(i)] = s / Ad[i][i];
            }
            for (int i = 0; i < n; ++i) {
                tri_ok = tri_ok &&
                         std::abs(x[static_cast<size_t>(i)] - y[static_cast<size_t>(i)]) <= 1e-12;
            }
        }

        // value solve vs the closed form with the e^x source
        const RescaleTables tables = build_g_tables(grid);
        const auto exact = analytic_g_solution(2.0, grid, ref);
        std::vector<double> zero_R(static_cast<size_t>(grid.size()), 0.0);
        const ValueProfile vp = solve_Qtilde(zero_R, 2.0, grid, ref, tables);
        double q_err = 0.0;
        for (int i = 0; i < grid.size(); ++i) {
            const size_t k = static_cast<size_t>(i);
            q_err = std::max(q_err, std::abs(vp.Qtilde[k] - tables.g[k] * exact[k]));
        }
        const bool q_ok = q_err <= 1e-4;

        // frozen policy reproduces KPP bit for bit
        CoupledOptions fk;
        fk.force_kpp = true;
        const CoupledSolution frozen = solve_coupled(grid, ref, cfg, fk);
        const bool frozen_ok =
            frozen.profile.c == kpp.c &&
            std::memcmp(frozen.profile.F.data(), kpp.F.data(),
                        kpp.F.size() * sizeof(double)) == 0;

        // manufactured-solution order for the value solve
        auto mms_err = [&](double h) {
            const Grid gh = Grid::uniform(40.0, h);
            const RescaleTables th = build_g_tables(gh);
            std::vector<double> f(static_cast<size_t>(gh.size()));
            for (int i = 0; i < gh.size(); ++i) {
                f[static_cast<size_t>(i)] =
                    (ref.rho - ref.kappa) * std::exp(gh.x(i)) + (ref.rho - 2.5);
            }
            const ValueProfile v = solve_Qtilde_rhs(f, 2.5, gh, ref, th);
            double err = 0.0;
            for (int i = 0; i < gh.size(); ++i) {
                const size_t k = static_cast<size_t>(i);
                err = std::max(err,
                               std::abs(v.Qtilde[k] - th.g[k] * (std::exp(gh.x(i)) + 1.0)));
            }
            return err;
        };
        const double order = std::log2(mms_err(0.04) / mms_err(0.02));
        const bool mms_ok = order >= 1.9;

        criterion(9, "oracle equivalences (dense solve, closed form, frozen policy, MMS)",
                  tri_ok && q_ok && frozen_ok && mms_ok,
                  "closed-form err = " + fmt(q_err) + ", MMS order = " + fmt(order));
    }

    // ---- 10. determinism and round trip ----
    {
        const CoupledSolution again = solve_coupled(grid, ref, cfg);
        const bool solve_det =
            again.profile.c == sol.profile.c &&
            std::memcmp(again.profile.F.data(), sol.profile.F.data(),
                        sol.profile.F.size() * sizeof(double)) == 0 &&
            std::memcmp(again.value.Qtilde.data(), sol.value.Qtilde.data(),
                        sol.value.Qtilde.size() * sizeof(double)) == 0;

        SweepSpec spec;
        spec.params = ref;
        spec.a = 15.0;
        spec.h = 0.02;
        spec.config = cfg;
        spec.axis = SweepAxis::alpha;
        spec.values = {1.8, 2.0, 2.2};
        spec.warm_start = false;
        spec.workers = 1;
        const auto one = run_sweep(spec);
        spec.workers = 3;
        const auto three = run_sweep(spec);
        bool sweep_det = true;
        for (size_t i = 0; i < one.size(); ++i) {
            sweep_det = sweep_det && one[i].c == three[i].c && one[i].x0 == three[i].x0 &&
                        one[i].gamma == three[i].gamma;
        }

        const auto tmp = std::filesystem::temp_directory_path() / "bgpwave_acceptance_profile.csv";
        write_profile_csv(tmp, grid, sol);
        const CsvTable back = read_csv(tmp);
        const bool csv_ok =
            back.rows() == grid.size() &&
            std::memcmp(back.columns[1].data(), sol.profile.F.data(),
                        sol.profile.F.size() * sizeof(double)) == 0 &&
            std::memcmp(back.columns[2].data(), sol.value.Q.data(),
                        sol.value.Q.size() * sizeof(double)) == 0 &&
            std::memcmp(back.columns[5].data(), sol.coupling.s_star.data(),
                        sol.coupling.s_star.size() * sizeof(double)) == 0;
        std::filesystem::remove(tmp);

        criterion(10, "determinism and CSV round trip", solve_det && sweep_det && csv_ok,
                  std::string("resolve ") + (solve_det ? "ok" : "BAD") + ", sweep workers " +
                      (sweep_det ? "ok" : "BAD") + ", csv " + (csv_ok ? "ok" : "BAD"));
    }

    std::printf("%d of 10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
