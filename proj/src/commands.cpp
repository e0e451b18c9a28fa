#include "lvattract/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>

#include "lvattract/parallel.hpp"
#include "lvattract/spec_io.hpp"

namespace lv {

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::PositivityViolation:
    case Errc::NonFiniteState:
      return 3;
    case Errc::NoCrossing:
    case Errc::InvalidRegime:
      return 4;
    default:
      return 2;
  }
}

json to_json_value(const RunRecord& r) {
  return json{{"spec_hash", r.spec_hash},   {"command", r.command},
              {"parameters", r.parameters}, {"verdict", r.verdict},
              {"trajectory", r.trajectory_path}, {"started", r.started},
              {"finished", r.finished},     {"tool_version", r.tool_version}};
}

void append_run_record(const std::filesystem::path& index, const RunRecord& record) {
  static std::mutex mu;
  const std::string line = to_json_value(record).dump() + "\n";
  std::lock_guard<std::mutex> lock(mu);
  std::ofstream out(index, std::ios::app | std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot append to run index " + index.string());
  out << line;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

void print_matrix(std::ostream& os, const std::string& name, const Eigen::MatrixXd& m) {
  os << name << ":\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << "  [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << std::setw(10) << m(r, c);
    os << "]\n";
  }
}

std::string vec(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << std::setprecision(10) << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ")";
  return os.str();
}

std::string cert_line(const ClassCertificate& c) {
  std::ostringstream os;
  os << c.matrix_class << "-matrix test by " << to_string(c.method) << ": " << (c.verdict ? "yes" : "no");
  if (!c.note.empty()) os << " (" << c.note << ")";
  return os.str();
}

}  // namespace

std::string render_report(const SystemSpec& spec, const Analysis& a) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "system: n = " << spec.n << (spec.controlled ? ", controlled" : ", uncontrolled") << "\n";
  print_matrix(os, spec.controlled ? "M = N + A + C" : "M0 = N + A", a.matrices.M);
  print_matrix(os, spec.controlled ? "M_hat = N - |A| - C" : "M_hat0 = N - |A|", a.matrices.M_hat);
  print_matrix(os, "M0^- = N - A^-", a.matrices.M0_minus);
  os << "P-matrix: " << (a.p_certificate.verdict ? "yes" : "no") << "\n";
  if (a.equilibrium) {
    os << "saturated equilibrium: x* = " << vec(a.equilibrium->x) << ", u* = " << vec(a.equilibrium->u)
       << (a.equilibrium->degenerate ? " [degenerate]" : "") << "\n";
  }
  os << "\ncriteria:\n";
  for (const Verdict& v : a.evaluated) {
    os << "  " << std::left << std::setw(26) << to_string(v.criterion) << std::right;
    if (!v.applicable) {
      os << "not applicable";
      if (!v.note.empty()) os << " (" << v.note << ")";
    } else {
      os << (v.fired ? "fires" : "does not fire");
    }
    os << "\n";
    for (const auto& c : v.certificates) os << "      " << cert_line(c) << "\n";
  }
  os << "\nverdict: " << to_string(a.verdict.criterion) << " -> " << to_string(a.verdict.attractor_kind);
  if (a.verdict.attractor) os << " " << vec(a.verdict.attractor->x);
  if (a.verdict.bound && a.verdict.criterion == Criterion::Thm3_3)
    os << ", ultimate bound X* = " << vec(a.verdict.bound->x);
  if (a.verdict.gas) os << " (globally asymptotically stable)";
  if (a.verdict.blocks && a.verdict.blocks->p > 0 && a.verdict.blocks->p < static_cast<int>(spec.n))
    os << ", " << spec.n - a.verdict.blocks->p << " species driven to extinction";
  os << "\n";
  if (!a.verdict.note.empty() && !a.verdict.fired) os << "  " << a.verdict.note << "\n";
  if (a.planar) {
    os << "planar case: " << to_string(a.planar->planar_case);
    if (!a.planar->equilibrium.empty()) os << " at " << a.planar->equilibrium;
    os << (a.planar->attractive ? ", conditions hold" : ", conditions fail") << "\n";
    for (const auto& c : a.planar->conditions) os << "  " << c.name << ": " << (c.holds ? "holds" : "fails") << "\n";
  }
  if (a.planar_equilibria) {
    for (const auto* e : a.planar_equilibria->all())
      os << "  " << e->label << " = " << vec(Eigen::VectorXd(e->x)) << (e->saturated ? " saturated" : " unsaturated")
         << "\n";
  }
  for (const auto& w : a.warnings) os << "warning: " << w << "\n";
  return os.str();
}

InitialData make_initial_data(const SystemSpec& spec, const SimulateOptions& opts) {
  if (opts.init == "random") return random_constant_initial_data(spec.n, opts.seed, opts.init_lo, opts.init_hi);
  if (opts.init == "constant") {
    if (opts.x0.size() != spec.n || opts.u0.size() != spec.n)
      throw Error(Errc::InvalidInitialData, "constant init needs n values for x0 and u0");
    return constant_initial_data(Eigen::Map<const Eigen::VectorXd>(opts.x0.data(), static_cast<Eigen::Index>(spec.n)),
                                 Eigen::Map<const Eigen::VectorXd>(opts.u0.data(), static_cast<Eigen::Index>(spec.n)));
  }
  throw Error(Errc::InvalidArgument, "init must be 'random' or 'constant'");
}

SimulationOutcome simulate(const SystemSpec& spec, const SimulateOptions& opts) {
  SimulationOutcome out;
  if (opts.target) {
    if (opts.target->size() != spec.n) throw Error(Errc::DimensionMismatch, "target needs n components");
    out.target = state_target(spec, Eigen::Map<const Eigen::VectorXd>(opts.target->data(),
                                                                      static_cast<Eigen::Index>(spec.n)));
    out.criterion = "explicit";
  } else if (spec.n <= 12) {
    const Analysis a = analyze(spec);
    if (a.verdict.attractor) {
      out.target = state_target(spec, a.verdict.attractor->x);
      out.criterion = to_string(a.verdict.criterion);
    } else if (a.equilibrium) {
      out.target = state_target(spec, a.equilibrium->x);
      out.criterion = "saturated-equilibrium";
    }
  }
  const InitialData init = make_initial_data(spec, opts);
  IntegrateOptions io;
  io.continuous_as_table = opts.table_quadrature;
  out.trajectory = integrate(spec, init, opts.h, opts.T, io);
  out.oscillation = detect_oscillation(out.trajectory, opts.window, opts.osc_floor);
  if (out.target) out.convergence = detect_convergence(out.trajectory, *out.target, opts.window, opts.tol);
  if (out.convergence && out.convergence->converged)
    out.status = "converged";
  else if (out.oscillation.sustained)
    out.status = "sustained-oscillation";
  else
    out.status = "inconclusive";
  return out;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  os << "t";
  for (std::size_t i = 0; i < traj.n; ++i) os << ",x" << i + 1;
  for (std::size_t i = 0; i < traj.n; ++i) os << ",u" << i + 1;
  os << "\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    put(traj.t[k]);
    const auto r = static_cast<Eigen::Index>(k);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(traj.n); ++i) {
      os << ',';
      put(traj.x(r, i));
    }
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(traj.n); ++i) {
      os << ',';
      put(traj.u(r, i));
    }
    os << '\n';
  }
}

std::string gnuplot_script(const std::string& csv_path, std::size_t n) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 't'\n"
     << "set multiplot layout 2,1\n"
     << "set ylabel 'x'\n"
     << "plot ";
  for (std::size_t i = 0; i < n; ++i) os << (i ? ", " : "") << "'" << csv_path << "' using 1:" << i + 2 << " with lines";
  os << "\nset ylabel 'u'\nplot ";
  for (std::size_t i = 0; i < n; ++i)
    os << (i ? ", " : "") << "'" << csv_path << "' using 1:" << n + i + 2 << " with lines";
  os << "\nunset multiplot\n";
  return os.str();
}

void write_hopf_csv(std::ostream& os, const std::vector<HopfThreshold>& t) {
  os << "n,tau,omega,spacing,residual\n";
  char buf[128];
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double spacing = k == 0 ? 0.0 : t[k].tau - t[k - 1].tau;
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.3g\n", t[k].index, t[k].tau, t[k].omega, spacing,
                  t[k].residual);
    os << buf;
  }
}

std::vector<SweepResult> run_sweep(const SystemSpec& spec, const SimulateOptions& base,
                                   const std::vector<SweepJob>& jobs,
                                   const std::optional<std::filesystem::path>& index) {
  std::vector<SweepResult> results(jobs.size());
  const std::string hash = spec_hash(spec);
  parallel_for_jobs(jobs.size(), [&](std::size_t k) {
    SweepResult& r = results[k];
    r.seed = jobs[k].seed;
    RunRecord rec;
    rec.spec_hash = hash;
    rec.command = "sweep";
    rec.started = utc_timestamp();
    rec.parameters = json{{"seed", r.seed}, {"h", base.h}, {"T", base.T}, {"window", base.window}, {"tol", base.tol}};
    try {
      SimulateOptions opts = base;
      opts.init = "random";
      opts.seed = jobs[k].seed;
      const SimulationOutcome o = simulate(spec, opts);
      r.status = o.status;
      r.deviation = o.convergence ? o.convergence->deviation : -1.0;
      r.amplitude = o.oscillation.amplitude;
      if (!jobs[k].csv.empty()) {
        std::ofstream csv(jobs[k].csv, std::ios::binary);
        if (!csv) throw Error(Errc::InvalidArgument, "cannot write " + jobs[k].csv.string());
        write_csv(csv, o.trajectory);
        rec.trajectory_path = jobs[k].csv.string();
      }
      rec.verdict = json{{"status", r.status}, {"criterion", o.criterion}};
    } catch (const Error& e) {
      r.status = "error";
      r.error = e.what();
      rec.verdict = json{{"status", "error"}, {"error", r.error}};
    }
    rec.finished = utc_timestamp();
    if (index) append_run_record(*index, rec);
  });
  return results;
}

}  // namespace lv
