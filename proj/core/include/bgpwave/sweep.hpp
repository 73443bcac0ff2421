#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bgpwave/grid.hpp"
#include "bgpwave/model.hpp"
#include "bgpwave/wave.hpp"

namespace bgpwave {

enum class SweepAxis { a, alpha, rho, kappa };

SweepAxis sweep_axis_from_string(const std::string& name);
std::string to_string(SweepAxis axis);

/// Base configuration plus the swept axis and its values.
struct SweepSpec {
    ModelParams params;
    double a = 40.0;
    double h = 0.02;
    SolverConfig config;
    SweepAxis axis = SweepAxis::a;
    std::vector<double> values;        ///< strictly increasing
    std::vector<std::string> outputs;  ///< diagnostic columns; empty = all
    bool warm_start = true;            ///< chain solves along the axis (serializes execution)
    int workers = 1;                   ///< worker pool size for independent (cold) solves
};

/// One solve outcome. Schema is identical across axes; failed rows carry the
/// failure in `status` plus the last residual and iteration count.
struct RunRecord {
    ModelParams params;
    double a = 0.0;
    double h = 0.0;
    bool ok = false;
    std::string status;  ///< "ok", "non-convergence", or "error: ..."
    double c = 0.0;
    double x0 = 0.0;
    double gamma = 0.0;
    double q_minus = 0.0;
    double q_plus = 0.0;
    double speed_relation_residual = 0.0;
    double decay_rate_estimate = 0.0;
    double decay_rate_theory = 0.0;
    int iterations = 0;
    double wall_time_s = 0.0;
    double last_residual = 0.0;
};

/// All diagnostic column names, in emission order.
const std::vector<std::string>& sweep_output_columns();

/// Runs solve_coupled once per axis value; records are ordered like the
/// inputs. With warm_start the solves chain (each starts from the previous
/// solution, falling back to a cold start on failure) and run sequentially;
/// without it the solves are independent and dispatched to `workers`
/// threads. Results are bit-identical for any worker count.
std::vector<RunRecord> run_sweep(const SweepSpec& spec);

/// Writes sweep records as CSV: parameter columns, the requested diagnostic
/// columns (all when `outputs` is empty), then the status column.
void write_sweep_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records,
                     const std::vector<std::string>& outputs);

/// Coupled vs Fisher-KPP comparison on one grid.
struct KppComparison {
    std::vector<double> x;
    std::vector<double> F_coupled;
    std::vector<double> F_kpp;
    double c_coupled = 0.0;
    double c_kpp = 0.0;
    struct SlopeRow {
        double level;
        double slope_coupled;
        double slope_kpp;
    };
    std::vector<SlopeRow> slopes;  ///< levels 0.05 .. 0.95 in steps of 0.05
};

/// Solves both problems on the same grid and tabulates the interpolated
/// profile slope at each level crossing.
KppComparison compare_kpp(const ModelParams& p, const Grid& g, const SolverConfig& cfg);

/// Writes the paired profiles (x, F_coupled, F_kpp).
void write_comparison_csv(const std::filesystem::path& path, const KppComparison& cmp);

/// Writes the level-slope table (level, slope_coupled, slope_kpp).
void write_slopes_csv(const std::filesystem::path& path, const KppComparison& cmp);

/// Writes a coupled profile with columns (x, F, Q, Qtilde, R, s_star).
void write_profile_csv(const std::filesystem::path& path, const Grid& g,
                       const CoupledSolution& sol);

/// Writes a KPP profile with columns (x, F).
void write_profile_csv(const std::filesystem::path& path, const Grid& g, const WaveProfile& wp);

/// Writes the diagnostics as a flat JSON object with snake_case keys.
void write_diagnostics_json(const std::filesystem::path& path, const Diagnostics& d);

}  // namespace bgpwave
