#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lvattract/criteria.hpp"
#include "lvattract/dynamics.hpp"
#include "lvattract/error.hpp"
#include "lvattract/serialize.hpp"

namespace lv {

inline constexpr const char* kToolVersion = "0.1.0";

/// 0 success, 2 parse/validation, 3 integration fault, 4 regime error.
int exit_code_for(Errc code) noexcept;

struct RunRecord {
  std::string spec_hash;
  std::string command;
  json parameters = json::object();
  json verdict;  // null when the command produced none
  std::string trajectory_path;
  std::string started;
  std::string finished;
  std::string tool_version = kToolVersion;
};

json to_json_value(const RunRecord& r);

/// Appends one JSON line to the run index; safe across threads of one process.
void append_run_record(const std::filesystem::path& index, const RunRecord& record);

std::string utc_timestamp();

/// Human-readable analysis report.
std::string render_report(const SystemSpec& spec, const Analysis& a);

struct SimulateOptions {
  double h = 0.01;
  double T = 300.0;
  double window = 50.0;
  double tol = 1e-4;
  double osc_floor = 1e-3;
  std::string init = "random";  // random | constant
  std::uint64_t seed = 1;
  double init_lo = 0.1;
  double init_hi = 2.0;
  std::vector<double> x0;  // for init = constant
  std::vector<double> u0;
  std::optional<std::vector<double>> target;  // explicit x target; auto when empty
  bool table_quadrature = false;
};

struct SimulationOutcome {
  Trajectory trajectory;
  std::string status;  // converged | sustained-oscillation | inconclusive
  std::optional<Eigen::VectorXd> target;  // (x*, u*)
  std::optional<ConvergenceReport> convergence;
  OscillationReport oscillation;
  std::string criterion;  // verdict used for the automatic target
};

InitialData make_initial_data(const SystemSpec& spec, const SimulateOptions& opts);

SimulationOutcome simulate(const SystemSpec& spec, const SimulateOptions& opts);

/// Header t,x1..xn,u1..un; 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj);

std::string gnuplot_script(const std::string& csv_path, std::size_t n);

/// Thresholds as CSV: n,tau,omega,spacing,residual.
void write_hopf_csv(std::ostream& os, const std::vector<HopfThreshold>& t);

struct SweepJob {
  std::uint64_t seed = 1;
  std::filesystem::path csv;
};

struct SweepResult {
  std::uint64_t seed = 1;
  std::string status;
  double deviation = 0.0;
  double amplitude = 0.0;
  std::string error;
};

/// Runs one simulation per job in parallel (LV_ATTRACT_THREADS caps the
/// thread count); each job writes its own CSV and appends to the run index.
std::vector<SweepResult> run_sweep(const SystemSpec& spec, const SimulateOptions& base,
                                   const std::vector<SweepJob>& jobs,
                                   const std::optional<std::filesystem::path>& index);

}  // namespace lv
