#include "bgpwave/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "bgpwave/csv.hpp"
#include "bgpwave/errors.hpp"
#include "bgpwave/numerics.hpp"

namespace bgpwave {

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "a") return SweepAxis::a;
    if (name == "alpha") return SweepAxis::alpha;
    if (name == "rho") return SweepAxis::rho;
    if (name == "kappa") return SweepAxis::kappa;
    throw ParameterError("unknown sweep axis '" + name + "' (expected a|alpha|rho|kappa)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::a: return "a";
        case SweepAxis::alpha: return "alpha";
        case SweepAxis::rho: return "rho";
        case SweepAxis::kappa: return "kappa";
    }
    return "?";
}

const std::vector<std::string>& sweep_output_columns() {
    static const std::vector<std::string> cols = {
        "c", "x0", "gamma", "q_minus", "q_plus", "speed_relation_residual",
        "decay_rate_estimate", "decay_rate_theory", "iterations", "wall_time_s",
        "last_residual"};
    return cols;
}

namespace {

struct Case {
    ModelParams params;
    double a;
    double h;
};

Case case_for_value(const SweepSpec& spec, double value) {
    Case c{spec.params, spec.a, spec.h};
    switch (spec.axis) {
        case SweepAxis::a: c.a = value; break;
        case SweepAxis::alpha: c.params.alpha = value; break;
        case SweepAxis::rho: c.params.rho = value; break;
        case SweepAxis::kappa: c.params.kappa = value; break;
    }
    return c;
}

RunRecord record_from_solution(const Case& cs, const CoupledSolution& sol, double seconds) {
    RunRecord r;
    r.params = cs.params;
    r.a = cs.a;
    r.h = cs.h;
    r.ok = sol.converged;
    r.status = sol.converged ? "ok" : "non-convergence";
    r.c = sol.profile.c;
    r.x0 = sol.diagnostics.x0;
    r.gamma = sol.diagnostics.gamma;
    r.q_minus = sol.diagnostics.left_value_limit;
    r.q_plus = sol.diagnostics.tail_ratio;
    r.speed_relation_residual = sol.diagnostics.speed_relation_residual;
    r.decay_rate_estimate = sol.diagnostics.decay_rate_estimate;
    r.decay_rate_theory = sol.diagnostics.decay_rate_theory;
    r.iterations = sol.iterations;
    r.wall_time_s = seconds;
    r.last_residual =
        sol.residual_history.empty() ? 0.0 : sol.residual_history.back();
    return r;
}

RunRecord solve_case(const Case& cs, const SolverConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    RunRecord r;
    r.params = cs.params;
    r.a = cs.a;
    r.h = cs.h;
    try {
        const Grid grid = Grid::uniform(cs.a, cs.h);
        const CoupledSolution sol = solve_coupled(grid, cs.params, cfg);
        return record_from_solution(cs, sol, elapsed());
    } catch (const CoupledSolveError& e) {
        r = record_from_solution(cs, e.last_solution(), elapsed());
        r.ok = false;
        r.status = "non-convergence";
        return r;
    } catch (const Error& e) {
        r.ok = false;
        r.status = std::string("error: ") + e.what();
        r.wall_time_s = elapsed();
        return r;
    }
}

}  // namespace

std::vector<RunRecord> run_sweep(const SweepSpec& spec) {
    if (spec.values.empty()) throw ParameterError("sweep: no axis values given");
    for (size_t i = 1; i < spec.values.size(); ++i) {
        if (!(spec.values[i] > spec.values[i - 1])) {
            throw ParameterError("sweep: values must be strictly increasing");
        }
    }
    validate_config(spec.config);

    const size_t count = spec.values.size();
    std::vector<RunRecord> records(count);

    if (spec.warm_start) {
        // Chained starts are sequential by construction.
        WarmStart warm;
        bool have_warm = false;
        for (size_t i = 0; i < count; ++i) {
            const Case cs = case_for_value(spec, spec.values[i]);
            const auto t0 = std::chrono::steady_clock::now();
            RunRecord rec;
            rec.params = cs.params;
            rec.a = cs.a;
            rec.h = cs.h;
            try {
                const Grid grid = Grid::uniform(cs.a, cs.h);
                CoupledOptions opts;
                if (have_warm) opts.warm_start = &warm;
                CoupledSolution sol;
                try {
                    sol = solve_coupled(grid, cs.params, spec.config, opts);
                } catch (const CoupledSolveError&) {
                    if (!opts.warm_start) throw;
                    opts.warm_start = nullptr;
                    sol = solve_coupled(grid, cs.params, spec.config, opts);
                }
                const double secs =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                rec = record_from_solution(cs, sol, secs);
                warm.F = sol.profile.F;
                warm.Qtilde = sol.value.Qtilde;
                warm.c = sol.profile.c;
                warm.source_half_width = cs.a;
                warm.source_step = cs.h;
                have_warm = true;
            } catch (const CoupledSolveError& e) {
                const double secs =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                rec = record_from_solution(cs, e.last_solution(), secs);
                rec.ok = false;
                rec.status = "non-convergence";
            } catch (const Error& e) {
                rec.ok = false;
                rec.status = std::string("error: ") + e.what();
                rec.wall_time_s =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            }
            records[i] = std::move(rec);
        }
        return records;
    }

    // Independent solves on a bounded pool; records keyed by index, so the
    // output does not depend on the worker count.
    const int workers = std::max(1, std::min<int>(spec.workers, static_cast<int>(count)));
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= count) return;
            const Case cs = case_for_value(spec, spec.values[i]);
            records[i] = solve_case(cs, spec.config);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return records;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records,
                     const std::vector<std::string>& outputs) {
    const std::vector<std::string>& all = sweep_output_columns();
    std::vector<std::string> cols = outputs.empty() ? all : outputs;
    for (const auto& c : cols) {
        if (std::find(all.begin(), all.end(), c) == all.end()) {
            throw ParameterError("unknown sweep output column '" + c + "'");
        }
    }
    std::vector<std::string> header = {"kappa", "alpha", "rho", "a", "h"};
    header.insert(header.end(), cols.begin(), cols.end());
    header.push_back("status");

    auto value_of = [](const RunRecord& r, const std::string& name) -> double {
        if (name == "c") return r.c;
        if (name == "x0") return r.x0;
        if (name == "gamma") return r.gamma;
        if (name == "q_minus") return r.q_minus;
        if (name == "q_plus") return r.q_plus;
        if (name == "speed_relation_residual") return r.speed_relation_residual;
        if (name == "decay_rate_estimate") return r.decay_rate_estimate;
        if (name == "decay_rate_theory") return r.decay_rate_theory;
        if (name == "iterations") return static_cast<double>(r.iterations);
        if (name == "wall_time_s") return r.wall_time_s;
        return r.last_residual;
    };

    std::vector<std::vector<std::string>> rows;
    rows.reserve(records.size());
    for (const auto& r : records) {
        std::vector<std::string> row = {
            format_double(r.params.kappa), format_double(r.params.alpha),
            format_double(r.params.rho), format_double(r.a), format_double(r.h)};
        for (const auto& c : cols) row.push_back(format_double(value_of(r, c)));
        row.push_back(r.status);
        rows.push_back(std::move(row));
    }
    write_csv_rows(path, header, rows);
}

KppComparison compare_kpp(const ModelParams& p, const Grid& g, const SolverConfig& cfg) {
    KppComparison cmp;
    cmp.x = g.points();
    WaveProfile kpp = solve_kpp(g, p, cfg);
    CoupledSolution coupled = solve_coupled(g, p, cfg);
    cmp.c_kpp = kpp.c;
    cmp.c_coupled = coupled.profile.c;
    cmp.F_kpp = std::move(kpp.F);
    cmp.F_coupled = coupled.profile.F;

    const std::vector<double> d_kpp = central_first_derivative(cmp.F_kpp, g);
    const std::vector<double> d_coupled = central_first_derivative(cmp.F_coupled, g);
    const int n = g.size();

    auto slope_at_level = [&](const std::vector<double>& F, const std::vector<double>& dF,
                              double level) -> double {
        int j = -1;
        for (int i = n - 1; i >= 0; --i) {
            if (F[static_cast<size_t>(i)] >= level) {
                j = i;
                break;
            }
        }
        if (j < 0 || j >= n - 1) return std::numeric_limits<double>::quiet_NaN();
        const double Fj = F[static_cast<size_t>(j)];
        const double Fj1 = F[static_cast<size_t>(j + 1)];
        if (Fj == Fj1) return dF[static_cast<size_t>(j)];
        const double t = (Fj - level) / (Fj - Fj1);
        return dF[static_cast<size_t>(j)] * (1.0 - t) + dF[static_cast<size_t>(j + 1)] * t;
    };

    for (int k = 1; k <= 19; ++k) {
        const double level = 0.05 * k;
        cmp.slopes.push_back({level, slope_at_level(cmp.F_coupled, d_coupled, level),
                              slope_at_level(cmp.F_kpp, d_kpp, level)});
    }
    return cmp;
}

void write_comparison_csv(const std::filesystem::path& path, const KppComparison& cmp) {
    CsvTable t;
    t.header = {"x", "F_coupled", "F_kpp"};
    t.columns = {cmp.x, cmp.F_coupled, cmp.F_kpp};
    write_csv(path, t);
}

void write_slopes_csv(const std::filesystem::path& path, const KppComparison& cmp) {
    CsvTable t;
    t.header = {"level", "slope_coupled", "slope_kpp"};
    t.columns.resize(3);
    for (const auto& row : cmp.slopes) {
        t.columns[0].push_back(row.level);
        t.columns[1].push_back(row.slope_coupled);
        t.columns[2].push_back(row.slope_kpp);
    }
    write_csv(path, t);
}

void write_profile_csv(const std::filesystem::path& path, const Grid& g,
                       const CoupledSolution& sol) {
    CsvTable t;
    t.header = {"x", "F", "Q", "Qtilde", "R", "s_star"};
    t.columns = {g.points(),    sol.profile.F, sol.value.Q,
                 sol.value.Qtilde, sol.coupling.R, sol.coupling.s_star};
    write_csv(path, t);
}

void write_profile_csv(const std::filesystem::path& path, const Grid& g, const WaveProfile& wp) {
    CsvTable t;
    t.header = {"x", "F"};
    t.columns = {g.points(), wp.F};
    write_csv(path, t);
}

void write_diagnostics_json(const std::filesystem::path& path, const Diagnostics& d) {
    nlohmann::json j;
    j["speed_relation_residual"] = d.speed_relation_residual;
    j["tail_ratio"] = d.tail_ratio;
    j["decay_rate_estimate"] = d.decay_rate_estimate;
    j["decay_rate_theory"] = d.decay_rate_theory;
    j["left_value_limit"] = d.left_value_limit;
    j["x0"] = d.x0;
    j["gamma"] = d.gamma;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace bgpwave
