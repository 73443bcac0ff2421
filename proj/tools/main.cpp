// Command line front end: solve, kpp, sweep, compare-kpp.
//
// Exit codes: 0 success, 2 non-convergence, 3 invalid parameters or regime,
// 4 I/O failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bgpwave/config.hpp"
#include "bgpwave/csv.hpp"
#include "bgpwave/errors.hpp"
#include "bgpwave/grid.hpp"
#include "bgpwave/kpp.hpp"
#include "bgpwave/model.hpp"
#include "bgpwave/sweep.hpp"
#include "bgpwave/wave.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoConvergence = 2;
constexpr int kExitBadParams = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
    double kappa = 1.0, alpha = 2.0, rho = 10.0;
    double a = 40.0, h = 0.02;
    std::optional<double> tol;
    std::optional<int> max_iters;
    std::optional<double> relax;
    std::string config_path;
};

void apply_file_config(const bgpwave::FileConfig& fc, CommonArgs& args,
                       bgpwave::SolverConfig& cfg) {
    if (fc.kappa) args.kappa = *fc.kappa;
    if (fc.alpha) args.alpha = *fc.alpha;
    if (fc.rho) args.rho = *fc.rho;
    if (fc.a) args.a = *fc.a;
    if (fc.h) args.h = *fc.h;
    if (fc.tol_profile) cfg.tol_profile = *fc.tol_profile;
    if (fc.tol_speed) cfg.tol_speed = *fc.tol_speed;
    if (fc.relaxation) cfg.relaxation = *fc.relaxation;
    if (fc.max_inner) cfg.max_inner = *fc.max_inner;
    if (fc.max_speed_iters) cfg.max_speed_iters = *fc.max_speed_iters;
    if (fc.max_outer) cfg.max_outer = *fc.max_outer;
}

void apply_overrides(const CommonArgs& args, bgpwave::SolverConfig& cfg) {
    if (args.tol) {
        cfg.tol_profile = *args.tol;
        cfg.tol_speed = *args.tol;
    }
    if (args.max_iters) cfg.max_outer = *args.max_iters;
    if (args.relax) cfg.relaxation = *args.relax;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int run_solve(const CommonArgs& args, bgpwave::SolverConfig cfg, const std::string& out_path,
              const std::string& diag_path) {
    apply_overrides(args, cfg);
    const bgpwave::ModelParams params{args.kappa, args.alpha, args.rho};
    const bgpwave::Grid grid = bgpwave::Grid::uniform(args.a, args.h);
    bgpwave::CoupledSolution sol;
    try {
        sol = bgpwave::solve_coupled(grid, params, cfg);
    } catch (const bgpwave::CoupledSolveError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNoConvergence;
    }
    print_warnings(sol.warnings);
    std::cout << "c = " << bgpwave::format_double(sol.profile.c)
              << "  x0 = " << bgpwave::format_double(sol.diagnostics.x0)
              << "  gamma = " << bgpwave::format_double(sol.diagnostics.gamma)
              << "  outer iterations = " << sol.iterations << '\n';
    std::cout << "speed relation residual = "
              << bgpwave::format_double(sol.diagnostics.speed_relation_residual)
              << "  tail ratio = " << bgpwave::format_double(sol.diagnostics.tail_ratio)
              << "  decay rate = " << bgpwave::format_double(sol.diagnostics.decay_rate_estimate)
              << " (theory " << bgpwave::format_double(sol.diagnostics.decay_rate_theory) << ")\n";
    if (!out_path.empty()) bgpwave::write_profile_csv(out_path, grid, sol);
    if (!diag_path.empty()) bgpwave::write_diagnostics_json(diag_path, sol.diagnostics);
    return kExitOk;
}

int run_kpp(const CommonArgs& args, bgpwave::SolverConfig cfg, const std::string& out_path) {
    apply_overrides(args, cfg);
    // rho is not used by the Fisher-KPP problem; keep it clear of kappa so
    // the shared parameter checks stay quiet.
    const bgpwave::ModelParams params{args.kappa, args.alpha,
                                      std::max(10.0, 2.0 * args.kappa)};
    const bgpwave::Grid grid = bgpwave::Grid::uniform(args.a, args.h);
    bgpwave::SpeedSolveReport report;
    const bgpwave::WaveProfile wp = bgpwave::solve_kpp(grid, params, cfg, &report);
    std::cout << "c = " << bgpwave::format_double(wp.c)
              << "  residual evaluations = " << report.residual_evaluations
              << "  newton iterations = " << report.inner_iterations << '\n';
    if (!out_path.empty()) bgpwave::write_profile_csv(out_path, grid, wp);
    return kExitOk;
}

int run_sweep_cmd(const CommonArgs& args, bgpwave::SolverConfig cfg, const std::string& axis,
                  const std::string& values_text, int workers, bool cold_start,
                  bool check_trends, const std::string& out_path,
                  const bgpwave::FileConfig& fc) {
    apply_overrides(args, cfg);
    bgpwave::SweepSpec spec;
    spec.params = bgpwave::ModelParams{args.kappa, args.alpha, args.rho};
    spec.a = args.a;
    spec.h = args.h;
    spec.config = cfg;
    std::string axis_name = axis;
    if (axis_name.empty() && fc.axis) axis_name = *fc.axis;
    if (axis_name.empty()) throw bgpwave::ParameterError("sweep: --axis is required");
    spec.axis = bgpwave::sweep_axis_from_string(axis_name);
    if (!values_text.empty()) {
        spec.values = bgpwave::parse_value_list(values_text);
    } else if (fc.values) {
        spec.values = *fc.values;
    } else {
        throw bgpwave::ParameterError("sweep: --values is required");
    }
    spec.workers = (workers > 0) ? workers : fc.workers.value_or(1);
    spec.warm_start = !cold_start && fc.warm_start.value_or(true);

    const std::vector<bgpwave::RunRecord> records = bgpwave::run_sweep(spec);
    int failures = 0;
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        std::cout << bgpwave::to_string(spec.axis) << " = "
                  << bgpwave::format_double(spec.values[i]) << ": " << r.status;
        if (r.ok) {
            std::cout << "  c = " << bgpwave::format_double(r.c)
                      << "  x0 = " << bgpwave::format_double(r.x0)
                      << "  gamma = " << bgpwave::format_double(r.gamma);
        }
        std::cout << '\n';
        if (!r.ok) ++failures;
    }
    if (!out_path.empty()) bgpwave::write_sweep_csv(out_path, records, spec.outputs);

    if (check_trends) {
        auto monotone = [&](auto getter, bool increasing) {
            for (size_t i = 1; i < records.size(); ++i) {
                if (!records[i - 1].ok || !records[i].ok) return false;
                const double prev = getter(records[i - 1]);
                const double cur = getter(records[i]);
                if (increasing ? !(cur > prev) : !(cur < prev)) return false;
            }
            return !records.empty();
        };
        auto get_c = [](const bgpwave::RunRecord& r) { return r.c; };
        auto get_x0 = [](const bgpwave::RunRecord& r) { return r.x0; };
        bool expect_ok = true;
        switch (spec.axis) {
            case bgpwave::SweepAxis::rho:
                expect_ok = monotone(get_c, false) && monotone(get_x0, false);
                std::cout << "trend check (c, x0 decreasing in rho): "
                          << (expect_ok ? "PASS" : "FAIL") << '\n';
                break;
            case bgpwave::SweepAxis::alpha:
                expect_ok = monotone(get_c, true);
                std::cout << "trend check (c increasing in alpha): "
                          << (expect_ok ? "PASS" : "FAIL") << '\n';
                break;
            case bgpwave::SweepAxis::kappa:
                expect_ok = monotone(get_c, true) && monotone(get_x0, true);
                std::cout << "trend check (c, x0 increasing in kappa): "
                          << (expect_ok ? "PASS" : "FAIL") << '\n';
                break;
            case bgpwave::SweepAxis::a:
                expect_ok = monotone(get_c, true);
                std::cout << "trend check (c increasing in a): "
                          << (expect_ok ? "PASS" : "FAIL") << '\n';
                break;
        }
    }
    return failures == 0 ? kExitOk : kExitNoConvergence;
}

int run_compare(const CommonArgs& args, bgpwave::SolverConfig cfg, const std::string& out_path,
                const std::string& slopes_path) {
    apply_overrides(args, cfg);
    const bgpwave::ModelParams params{args.kappa, args.alpha, args.rho};
    const bgpwave::Grid grid = bgpwave::Grid::uniform(args.a, args.h);
    const bgpwave::KppComparison cmp = bgpwave::compare_kpp(params, grid, cfg);
    std::cout << "c_coupled = " << bgpwave::format_double(cmp.c_coupled)
              << "  c_kpp = " << bgpwave::format_double(cmp.c_kpp) << '\n';
    if (!out_path.empty()) bgpwave::write_comparison_csv(out_path, cmp);
    if (!slopes_path.empty()) bgpwave::write_slopes_csv(slopes_path, cmp);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Traveling-wave solver for the mean-field knowledge-diffusion system"};
    app.require_subcommand(1);

    CommonArgs args;
    bgpwave::SolverConfig cfg;
    std::string out_path, diag_path, slopes_path, axis, values_text;
    int workers = 0;
    bool cold_start = false, check_trends = false;

    app.set_help_flag("--help", "print help");

    auto add_common = [&](CLI::App* cmd, bool with_rho) {
        cmd->set_help_flag("--help", "print help");
        cmd->add_option("--kappa", args.kappa, "diffusivity");
        cmd->add_option("--alpha", args.alpha, "search effectiveness");
        if (with_rho) cmd->add_option("--rho", args.rho, "discount rate");
        cmd->add_option("--a", args.a, "half width of the interval");
        cmd->add_option("--h", args.h, "grid step");
        cmd->add_option("--config", args.config_path, "key = value config file");
        cmd->add_option("--tol", args.tol, "profile and speed tolerance");
        cmd->add_option("--max-iters", args.max_iters, "outer iteration cap");
        cmd->add_option("--relax", args.relax, "outer relaxation in (0, 1]");
    };

    CLI::App* solve = app.add_subcommand("solve", "coupled traveling-wave solve");
    add_common(solve, true);
    solve->add_option("--out", out_path, "profile CSV (x,F,Q,Qtilde,R,s_star)");
    solve->add_option("--diagnostics", diag_path, "diagnostics JSON");

    CLI::App* kpp = app.add_subcommand("kpp", "Fisher-KPP baseline solve");
    add_common(kpp, false);
    kpp->add_option("--out", out_path, "profile CSV (x,F)");

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep");
    add_common(sweep, true);
    sweep->add_option("--axis", axis, "swept parameter: a|alpha|rho|kappa");
    sweep->add_option("--values", values_text, "comma separated values, increasing");
    sweep->add_option("--workers", workers, "worker pool size for cold-start sweeps");
    sweep->add_flag("--cold-start", cold_start, "independent solves instead of warm chaining");
    sweep->add_flag("--check-trends", check_trends, "print monotone-trend checks");
    sweep->add_option("--out", out_path, "sweep CSV");

    CLI::App* compare = app.add_subcommand("compare-kpp", "coupled vs Fisher-KPP profiles");
    add_common(compare, true);
    compare->add_option("--out", out_path, "paired profiles CSV");
    compare->add_option("--slopes", slopes_path, "level-slope table CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadParams;
    }

    try {
        bgpwave::FileConfig fc;
        if (!args.config_path.empty()) {
            fc = bgpwave::load_config(args.config_path);
            // file first, then flags that the user actually passed
            CommonArgs from_file = args;
            apply_file_config(fc, from_file, cfg);
            auto keep_flag = [&](CLI::App* cmd, const std::string& name, double& file_v,
                                 double cli_v) {
                if (cmd->count(name) > 0) file_v = cli_v;
            };
            CLI::App* active = app.get_subcommands().front();
            keep_flag(active, "--kappa", from_file.kappa, args.kappa);
            keep_flag(active, "--alpha", from_file.alpha, args.alpha);
            if (active->get_option_no_throw("--rho")) {
                keep_flag(active, "--rho", from_file.rho, args.rho);
            }
            keep_flag(active, "--a", from_file.a, args.a);
            keep_flag(active, "--h", from_file.h, args.h);
            from_file.tol = args.tol;
            from_file.max_iters = args.max_iters;
            from_file.relax = args.relax;
            args = from_file;
        }

        if (solve->parsed()) return run_solve(args, cfg, out_path, diag_path);
        if (kpp->parsed()) return run_kpp(args, cfg, out_path);
        if (sweep->parsed()) {
            return run_sweep_cmd(args, cfg, axis, values_text, workers, cold_start, check_trends,
                                 out_path, fc);
        }
        if (compare->parsed()) return run_compare(args, cfg, out_path, slopes_path);
        return kExitBadParams;
    } catch (const bgpwave::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const bgpwave::NoWaveError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNoConvergence;
    } catch (const bgpwave::NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNoConvergence;
    } catch (const bgpwave::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadParams;
    } catch (const bgpwave::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadParams;
    } catch (const bgpwave::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNoConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}
