#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "lvattract/commands.hpp"
#include "lvattract/spec_io.hpp"
#include "lvattract/spectral.hpp"

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw lv::Error(lv::Errc::InvalidArgument, "not a number list: '" + s + "'");
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lv::Error(lv::Errc::InvalidArgument, "cannot write " + path);
  out << text;
}

struct Common {
  std::string index;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global attractivity and extinction analysis for delayed Lotka-Volterra systems with feedback controls"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  Common common;
  app.add_option("--index", common.index, "append a JSON line per run to this file");

  std::string spec_path;
  std::string json_out;
  auto* analyze = app.add_subcommand("analyze", "match the system against the attractivity criteria");
  analyze->add_option("spec", spec_path, "TOML system description")->required();
  analyze->add_option("--json", json_out, "write the JSON report here ('-' for stdout)");

  lv::SimulateOptions sim;
  std::string x0, u0, target = "auto", csv_out, plot_out;
  auto* simulate = app.add_subcommand("simulate", "integrate the system and test convergence");
  simulate->add_option("spec", spec_path, "TOML system description")->required();
  simulate->add_option("--h", sim.h, "time step")->capture_default_str();
  simulate->add_option("--T", sim.T, "horizon")->capture_default_str();
  simulate->add_option("--window", sim.window, "terminal window")->capture_default_str();
  simulate->add_option("--tol", sim.tol, "convergence tolerance")->capture_default_str();
  simulate->add_option("--init", sim.init, "random | constant")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "seed for random histories")->capture_default_str();
  simulate->add_option("--init-max", sim.init_hi, "upper end of the random history range")->capture_default_str();
  simulate->add_option("--x0", x0, "comma-separated x history constants");
  simulate->add_option("--u0", u0, "comma-separated u history constants");
  simulate->add_option("--target", target, "auto or comma-separated x target")->capture_default_str();
  simulate->add_option("--csv", csv_out, "trajectory CSV output");
  simulate->add_option("--plot", plot_out, "gnuplot script output");
  simulate->add_flag("--table-quadrature", sim.table_quadrature, "tabulate continuous kernels instead of chains");

  double hb = 1.0, hc = 2.0, tau = 0.0, eps = 1e-6;
  int hn = 2;
  std::string fixture_out;
  auto* hopf = app.add_subcommand("hopf", "Hopf delay thresholds for (l + b)^2 + c e^{-l tau}");
  hopf->add_option("--b", hb, "b > 0")->capture_default_str();
  hopf->add_option("--c", hc, "c > b^2")->capture_default_str();
  hopf->add_option("--n", hn, "largest threshold index")->capture_default_str();
  hopf->add_option("--export-fixture", fixture_out, "write the planar fixture realizing (b, c) as TOML");
  hopf->add_option("--tau", tau, "total delay tau12 + tau21 for the exported fixture")->capture_default_str();
  hopf->add_option("--eps", eps, "control gain of the exported fixture")->capture_default_str();

  std::uint64_t seed0 = 1;
  int count = 5;
  std::string out_dir = ".";
  auto* sweep = app.add_subcommand("sweep", "simulate several seeded random histories in parallel");
  sweep->add_option("spec", spec_path, "TOML system description")->required();
  sweep->add_option("--seed0", seed0, "first seed")->capture_default_str();
  sweep->add_option("--count", count, "number of runs")->capture_default_str();
  sweep->add_option("--out-dir", out_dir, "directory for per-run CSV files")->capture_default_str();
  sweep->add_option("--h", sim.h, "time step")->capture_default_str();
  sweep->add_option("--T", sim.T, "horizon")->capture_default_str();
  sweep->add_option("--window", sim.window, "terminal window")->capture_default_str();
  sweep->add_option("--tol", sim.tol, "convergence tolerance")->capture_default_str();

  auto* hash = app.add_subcommand("hash", "print the canonical hash of a system description");
  hash->add_option("spec", spec_path, "TOML system description")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::optional<std::filesystem::path> index;
  if (!common.index.empty()) index = common.index;
  lv::RunRecord rec;
  rec.started = lv::utc_timestamp();

  try {
    if (*analyze) {
      const lv::SystemSpec spec = lv::load_spec(spec_path);
      const lv::Analysis a = lv::analyze(spec);
      const lv::json report = lv::to_json_value(a);
      if (json_out == "-") {
        std::cout << report.dump(2) << "\n";
      } else {
        std::cout << lv::render_report(spec, a);
        if (!json_out.empty()) write_file(json_out, report.dump(2) + "\n");
      }
      rec.command = "analyze";
      rec.spec_hash = lv::spec_hash(spec);
      rec.parameters = lv::json{{"spec", spec_path}};
      rec.verdict = lv::to_json_value(a.verdict);
    } else if (*simulate) {
      const lv::SystemSpec spec = lv::load_spec(spec_path);
      if (!x0.empty()) sim.x0 = parse_list(x0);
      if (!u0.empty()) sim.u0 = parse_list(u0);
      if (target != "auto") sim.target = parse_list(target);
      const lv::SimulationOutcome o = lv::simulate(spec, sim);
      if (!csv_out.empty()) {
        std::ofstream csv(csv_out, std::ios::binary);
        if (!csv) throw lv::Error(lv::Errc::InvalidArgument, "cannot write " + csv_out);
        lv::write_csv(csv, o.trajectory);
      }
      if (!plot_out.empty()) write_file(plot_out, lv::gnuplot_script(csv_out.empty() ? "trajectory.csv" : csv_out, spec.n));
      const std::size_t last = o.trajectory.samples() - 1;
      std::cout << std::setprecision(10);
      std::cout << "final state: " << o.trajectory.state(last).transpose() << "\n";
      if (o.target) {
        std::cout << "target (" << o.criterion << "): " << o.target->transpose() << "\n";
        std::cout << "terminal deviation: " << o.convergence->deviation << "\n";
      }
      std::cout << "x1 amplitude: " << o.oscillation.amplitude << " (previous window "
                << o.oscillation.previous_amplitude << ")\n";
      if (o.status == "converged")
        std::cout << "converged to " << o.target->head(static_cast<Eigen::Index>(spec.n)).transpose() << "\n";
      else
        std::cout << o.status << "\n";
      rec.command = "simulate";
      rec.spec_hash = lv::spec_hash(spec);
      rec.parameters = lv::json{{"spec", spec_path}, {"h", sim.h}, {"T", sim.T}, {"window", sim.window},
                                {"tol", sim.tol}, {"init", sim.init}, {"seed", sim.seed}, {"target", target}};
      rec.verdict = lv::json{{"status", o.status}, {"criterion", o.criterion}};
      rec.trajectory_path = csv_out;
    } else if (*hopf) {
      const auto t = lv::hopf_thresholds(hb, hc, hn);
      lv::write_hopf_csv(std::cout, t);
      rec.command = "hopf";
      rec.parameters = lv::json{{"b", hb}, {"c", hc}, {"n", hn}};
      if (!fixture_out.empty()) {
        const lv::SystemSpec spec = lv::build_hopf_fixture(hb, hc, tau, eps);
        write_file(fixture_out, lv::to_toml(spec));
        rec.spec_hash = lv::spec_hash(spec);
        rec.parameters["tau"] = tau;
        rec.parameters["eps"] = eps;
      }
    } else if (*sweep) {
      const lv::SystemSpec spec = lv::load_spec(spec_path);
      std::filesystem::create_directories(out_dir);
      std::vector<lv::SweepJob> jobs;
      for (int k = 0; k < count; ++k) {
        const std::uint64_t s = seed0 + static_cast<std::uint64_t>(k);
        jobs.push_back({s, std::filesystem::path(out_dir) / ("run_seed" + std::to_string(s) + ".csv")});
      }
      const auto results = lv::run_sweep(spec, sim, jobs, index);
      std::cout << "seed,status,deviation,amplitude\n";
      bool fault = false;
      for (const auto& r : results) {
        std::cout << r.seed << ',' << r.status << ',' << r.deviation << ',' << r.amplitude << "\n";
        if (!r.error.empty()) {
          std::cerr << "seed " << r.seed << ": " << r.error << "\n";
          fault = true;
        }
      }
      return fault ? 3 : 0;
    } else if (*hash) {
      std::cout << lv::spec_hash(lv::load_spec(spec_path)) << "\n";
      return 0;
    }
    rec.finished = lv::utc_timestamp();
    if (index) lv::append_run_record(*index, rec);
    return 0;
  } catch (const lv::Error& e) {
    std::cerr << "error [" << lv::to_string(e.code()) << "]: " << e.what() << "\n";
    return lv::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
