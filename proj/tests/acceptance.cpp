// Acceptance suite: one PASS/FAIL line per criterion. Usage: acceptance [k...]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lvattract/criteria.hpp"
#include "lvattract/dynamics.hpp"
#include "lvattract/equilibria.hpp"
#include "lvattract/error.hpp"
#include "lvattract/matrix_class.hpp"
#include "lvattract/spec_io.hpp"
#include "lvattract/spectral.hpp"

namespace {

// Tolerances and budgets.
constexpr double kExactTol = 1e-12;
constexpr double kFixtureMs = 1.0;
constexpr double kLcpTol = 1e-10;
constexpr double kLcpSeconds = 5.0;
constexpr double kMinorTol = 1e-10;
constexpr double kClassSeconds = 5.0;
constexpr double kSimH = 0.01;
constexpr double kSimT = 300.0;
constexpr double kWindow = 50.0;
constexpr double kConvTol = 1e-4;
constexpr double kSimSeconds = 30.0;
constexpr int kSeeds = 5;
constexpr double kScalarT = 200.0;
constexpr double kScalarTol = 1e-4;
constexpr double kChainTableTol = 1e-5;
constexpr double kTau0Tol = 1e-12;
constexpr double kHopfResidual = 1e-10;
constexpr double kOscFloor = 1e-3;
constexpr double kHopfSeconds = 60.0;
constexpr double kControlResidual = 5e-6;
constexpr double kHalvingTol = 1e-6;
constexpr double kPositivityTol = 1e-12;
constexpr double kBoundSlack = 1e-3;
constexpr double kInflatedMax = 10.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fixture(const std::string& name) { return std::string(LV_FIXTURE_DIR) + "/" + name; }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

struct Fixture {
  std::string file;
  std::string tag;
  Eigen::VectorXd x;
};

std::vector<Fixture> theorem_fixtures() {
  return {
      {"example_5_1_uncontrolled.toml", "Cor4.2-uncontrolled", Eigen::Vector2d(2.0 / 3.0, 0.0)},
      {"example_5_1_controlled_alpha_0.25.toml", "Thm3.2", Eigen::Vector2d(41.0 / 72.0, 1.0 / 36.0)},
      {"example_5_2_uncontrolled.toml", "Cor4.2-uncontrolled", Eigen::Vector2d(53.0 / 80.0, 1.0 / 20.0)},
      {"example_5_2_controlled_alpha_0.2.toml", "Thm4.4-predator-prey", Eigen::Vector2d(10.0 / 17.0, 0.0)},
  };
}

// Independent principal-minor oracle via Eigen determinants.
bool oracle_p_matrix(const Eigen::MatrixXd& M) {
  const int n = static_cast<int>(M.rows());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    Eigen::MatrixXd S(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) S(r, c) = M(idx[r], idx[c]);
    if (!(S.determinant() > 0.0)) return false;
  }
  return true;
}

Outcome criterion1() {
  Outcome o;
  const std::vector<std::pair<std::string, Eigen::Vector2d>> cases = {
      {"example_5_1_uncontrolled.toml", Eigen::Vector2d(2.0 / 3.0, 0.0)},
      {"example_5_2_uncontrolled.toml", Eigen::Vector2d(53.0 / 80.0, 1.0 / 20.0)},
  };
  for (const auto& [file, want] : cases) {
    const lv::SystemSpec spec = lv::load_spec(fixture(file));
    lv::saturated_equilibrium(spec);  // warm-up
    const auto t0 = Clock::now();
    const lv::SaturatedEquilibrium eq = lv::saturated_equilibrium(spec);
    const double ms = 1e3 * seconds_since(t0);
    const double err = (eq.x - Eigen::VectorXd(want)).cwiseAbs().maxCoeff();
    o.require(err <= kExactTol, file + fmt(": error %.3g", err));
    o.require(ms < kFixtureMs, file + fmt(": %.3f ms", ms));
    o.detail += (o.detail.empty() ? "" : ", ") + file + fmt(" err %.1e in %.3f ms", err, ms);
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto t0 = Clock::now();
  int done = 0, bad = 0;
  double worst_feas = 0.0, worst_gap = 0.0;
  for (int n : {3, 4}) {
    int made = 0;
    while (made < 250) {
      Eigen::MatrixXd M(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) M(r, c) = u(rng) + (r == c ? 1.0 : 0.0);
      if (!oracle_p_matrix(M)) continue;
      ++made;
      Eigen::VectorXd b(n);
      for (int i = 0; i < n; ++i) b(i) = 2.0 * u(rng);
      const Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
      const lv::SaturatedEquilibrium eq = lv::saturated_equilibrium(M, b, d, d);
      const Eigen::VectorXd r = M * eq.x - b;
      worst_feas = std::max(worst_feas, std::max(0.0, -r.minCoeff()));
      double gap = 0.0;
      for (int i = 0; i < n; ++i) gap = std::max(gap, std::abs(eq.x(i) * r(i)));
      worst_gap = std::max(worst_gap, gap);
      // Brute-force uniqueness: count supports whose solution is a valid LCP point.
      int valid = 0;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> J;
        for (int i = 0; i < n; ++i)
          if (mask & (1u << i)) J.push_back(i);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        if (!J.empty()) {
          Eigen::MatrixXd A(J.size(), J.size());
          Eigen::VectorXd q(J.size());
          for (std::size_t a = 0; a < J.size(); ++a) {
            q(a) = b(J[a]);
            for (std::size_t c = 0; c < J.size(); ++c) A(a, c) = M(J[a], J[c]);
          }
          const Eigen::VectorXd xj = A.fullPivLu().solve(q);
          for (std::size_t a = 0; a < J.size(); ++a) x(J[a]) = xj(a);
        }
        const Eigen::VectorXd rr = M * x - b;
        bool ok = (x.array() >= -kLcpTol).all() && (rr.array() >= -kLcpTol).all();
        for (int i = 0; i < n && ok; ++i) ok = std::abs(x(i) * rr(i)) <= kLcpTol;
        if (ok && (x - eq.x).cwiseAbs().maxCoeff() > 1e-8) ++bad;
        valid += ok;
      }
      if (valid < 1) ++bad;
      ++done;
    }
  }
  const double secs = seconds_since(t0);
  o.require(worst_feas <= kLcpTol, fmt("feasibility violation %.3g", worst_feas));
  o.require(worst_gap <= kLcpTol, fmt("complementarity gap %.3g", worst_gap));
  o.require(bad == 0, "non-unique or missing solutions: " + std::to_string(bad));
  o.require(secs < kLcpSeconds, fmt("%.2f s", secs));
  o.detail += fmt("%.0f systems, max infeasibility %.1e", done, worst_feas) +
              fmt(", max gap %.1e, %.2f s", worst_gap, secs);
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> off(-1.0, 0.0), diag(0.0, 3.0);
  const auto t0 = Clock::now();
  int disagreements = 0, positives = 0;
  for (int k = 0; k < 1000; ++k) {
    Eigen::Matrix4d B;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) B(r, c) = r == c ? diag(rng) : off(rng);
    // Principal minors (library, tolerance on minors).
    const bool by_minors = lv::is_nonsingular_m_matrix(B).verdict;
    // Eigenvalues (test-side): all real parts positive.
    Eigen::EigenSolver<Eigen::Matrix4d> es(B);
    const bool by_eigen = (es.eigenvalues().real().array() > kMinorTol).all();
    // eta-vector: B eta = 1 has a positive solution.
    Eigen::FullPivLU<Eigen::Matrix4d> lu(B);
    bool by_eta = false;
    if (lu.isInvertible()) {
      const Eigen::Vector4d eta = lu.solve(Eigen::Vector4d::Ones());
      by_eta = (eta.array() > 0.0).all() && ((B * eta).array() > 0.0).all();
    }
    const bool by_inverse = lv::nonsingular_m_by_inverse(B).verdict;
    if (!(by_minors == by_eigen && by_eigen == by_eta && by_eta == by_inverse)) ++disagreements;
    positives += by_minors;
  }
  const double secs = seconds_since(t0);
  o.require(disagreements == 0, "disagreements: " + std::to_string(disagreements));
  o.require(secs < kClassSeconds, fmt("%.2f s", secs));
  o.detail += fmt("1000 matrices (%.0f nonsingular M), %.2f s", positives, secs);
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (const Fixture& f : theorem_fixtures()) {
    const lv::SystemSpec spec = lv::load_spec(fixture(f.file));
    const lv::Analysis a = lv::analyze(spec);
    const std::string tag = lv::to_string(a.verdict.criterion);
    o.require(tag == f.tag, f.file + ": tag " + tag + " != " + f.tag);
    const bool eq = a.verdict.attractor &&
                    (a.verdict.attractor->x - f.x).cwiseAbs().maxCoeff() <= kExactTol;
    o.require(eq, f.file + ": attractor mismatch");
    if (tag == f.tag && eq) o.detail += (o.detail.empty() ? "" : ", ") + tag;
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (const Fixture& f : theorem_fixtures()) {
    const lv::SystemSpec spec = lv::load_spec(fixture(f.file));
    const Eigen::VectorXd target = lv::state_target(spec, f.x);
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int s = 1; s <= kSeeds; ++s) {
      const lv::InitialData init = lv::random_constant_initial_data(spec.n, static_cast<std::uint64_t>(s));
      const lv::Trajectory tr = lv::integrate(spec, init, kSimH, kSimT);
      worst = std::max(worst, lv::detect_convergence(tr, target, kWindow, kConvTol).deviation);
    }
    const double secs = seconds_since(t0);
    o.require(worst < kConvTol, f.file + fmt(": deviation %.3g", worst));
    o.require(secs < kSimSeconds, f.file + fmt(": %.1f s", secs));
    if (worst < kConvTol) o.detail += (o.detail.empty() ? "" : ", ") + f.file + fmt(" %.1e", worst);
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const lv::SystemSpec spec = lv::load_spec(fixture("example_4_1_scalar.toml"));
  const lv::InitialData init = lv::constant_initial_data(Eigen::VectorXd::Constant(1, 0.5),
                                                         Eigen::VectorXd::Constant(1, 0.1));
  const lv::Trajectory chain = lv::integrate(spec, init, kSimH, kScalarT);
  lv::IntegrateOptions tab;
  tab.continuous_as_table = true;
  const lv::Trajectory table = lv::integrate(spec, init, kSimH, kScalarT, tab);
  const std::size_t last = chain.samples() - 1;
  const double err = std::abs(chain.x(static_cast<Eigen::Index>(last), 0) - 0.2);
  double diff = 0.0;
  for (std::size_t k = 0; k <= last; ++k)
    diff = std::max(diff, (chain.state(k) - table.state(k)).cwiseAbs().maxCoeff());
  o.require(err < kScalarTol, fmt("|x(T) - 1/5| = %.3g", err));
  o.require(diff < kChainTableTol, fmt("chain vs quadrature %.3g", diff));
  o.detail += fmt("|x(T) - 1/5| = %.1e, chain vs quadrature max %.1e", err, diff);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto thr = lv::hopf_thresholds(1.0, 2.0, 2);
  const double tau0 = thr.front().tau;
  o.require(std::abs(tau0 - std::numbers::pi / 2) <= kTau0Tol, fmt("tau0 = %.17g", tau0));
  const double h_direct = std::abs(lv::hopf_h(1.0, 2.0, tau0, {0.0, 1.0}));
  o.require(h_direct < kHopfResidual, fmt("|h(i)| = %.3g", h_direct));
  // Second path: the characteristic determinant of the built fixture in the c -> 0 limit.
  const lv::SystemSpec fx = lv::build_hopf_fixture(1.0, 2.0, tau0);
  const double r2 = std::sqrt(2.0);
  const auto pc = lv::make_planar_characteristic(fx, Eigen::Vector2d(r2, r2), true);
  const lv::cplx lam(0.0, 1.0);
  const double h_det = std::abs(lv::char_det(pc, lam) / ((lam + 1.0) * (lam + 1.0)));
  o.require(h_det < kHopfResidual, fmt("|det/((l+e1)(l+e2))| = %.3g", h_det));

  const auto run = [&](double tau) {
    const lv::SystemSpec s = lv::build_hopf_fixture(1.0, 2.0, tau);
    const lv::SaturatedEquilibrium eq = lv::saturated_equilibrium(s);
    const lv::Trajectory tr = lv::integrate(s, lv::random_constant_initial_data(2, 1), kSimH, kSimT);
    return std::make_pair(lv::detect_convergence(tr, lv::state_target(s, eq.x), kWindow, kConvTol),
                          lv::detect_oscillation(tr, kWindow, kOscFloor));
  };
  const auto [c12, o12] = run(1.2);
  const auto [c19, o19] = run(1.9);
  o.require(c12.converged, fmt("tau 1.2 deviation %.3g", c12.deviation));
  o.require(o19.sustained && o19.amplitude >= kOscFloor, fmt("tau 1.9 amplitude %.3g", o19.amplitude));
  const double secs = seconds_since(t0);
  o.require(secs < kHopfSeconds, fmt("%.1f s", secs));
  o.detail += fmt("tau0 - pi/2 = %.1e, |h(i)| = %.1e", tau0 - std::numbers::pi / 2, h_direct) +
              fmt(", tau 1.2 deviation %.1e, tau 1.9 amplitude %.3f", c12.deviation, o19.amplitude);
  (void)o12;
  (void)c19;
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::vector<std::string> files = {"example_5_1_uncontrolled.toml", "example_5_1_controlled_alpha_0.25.toml",
                                    "example_5_2_uncontrolled.toml", "example_5_2_controlled_alpha_0.2.toml",
                                    "example_4_1_scalar.toml",       "hopf_b1_c2_tau1.2.toml",
                                    "hopf_b1_c2_tau1.9.toml"};
  double worst_ctrl = 0.0, worst_half = 0.0, worst_neg = 0.0;
  for (const auto& file : files) {
    const lv::SystemSpec spec = lv::load_spec(fixture(file));
    const lv::InitialData init = lv::random_constant_initial_data(spec.n, 11);
    lv::Trajectory a, b;
    try {
      a = lv::integrate(spec, init, kSimH, kSimT);
      b = lv::integrate(spec, init, 0.5 * kSimH, kSimT);
    } catch (const lv::Error& e) {
      o.require(false, file + ": " + e.what());
      continue;
    }
    for (std::size_t i = 0; i < spec.n; ++i) {
      const double scale = 1.0 + a.u.col(static_cast<Eigen::Index>(i)).maxCoeff();
      const double r = lv::control_integral_check(a, spec, i) / scale;
      worst_ctrl = std::max(worst_ctrl, r);
      o.require(r < kControlResidual, file + fmt(": control residual %.3g (species %.0f)", r, double(i + 1)));
    }
    const double half = (a.state(a.samples() - 1) - b.state(b.samples() - 1)).cwiseAbs().maxCoeff();
    worst_half = std::max(worst_half, half);
    o.require(half < kHalvingTol, file + fmt(": step halving %.3g", half));
    worst_neg = std::min({worst_neg, a.min_raw, b.min_raw});
  }
  o.require(worst_neg >= -kPositivityTol, fmt("negative excursion %.3g", worst_neg));
  o.detail += fmt("control residual %.1e, step halving %.1e", worst_ctrl, worst_half) +
              fmt(", min raw %.1e", worst_neg);
  return o;
}

Outcome criterion9() {
  Outcome o;
  const lv::SystemSpec spec = lv::load_spec(fixture("example_5_2_uncontrolled.toml"));
  const lv::DissipativityResult dr = lv::dissipativity_bound(spec);
  o.require(dr.verdict && dr.bound, "comparison matrix is not a nonsingular M-matrix");
  if (!dr.bound) return o;
  const Eigen::VectorXd X = dr.bound->x;
  double worst = -1e300;
  for (int s = 1; s <= kSeeds; ++s) {
    const lv::InitialData init = lv::random_constant_initial_data(spec.n, 100 + s, 0.1, kInflatedMax);
    const lv::Trajectory tr = lv::integrate(spec, init, kSimH, kSimT);
    const Eigen::VectorXd m = lv::window_max(tr, 0.5 * kSimT);
    worst = std::max(worst, (m - X).maxCoeff());
  }
  o.require(worst <= kBoundSlack, fmt("limsup exceeds bound by %.3g", worst));
  o.detail += fmt("bound X* = (%.4f, %.4f)", X(0), X(1)) + fmt(", max(limsup - X*) = %.3f", worst);
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> list = {
      {"saturated-equilibrium fixtures", criterion1},
      {"LCP oracle equivalence", criterion2},
      {"matrix-class cross-validation", criterion3},
      {"theorem-engine fixtures", criterion4},
      {"simulation confirms predicted attractors", criterion5},
      {"scalar infinite-delay fixture", criterion6},
      {"Hopf threshold and oscillation onset", criterion7},
      {"integrator self-tests", criterion8},
      {"dissipativity bound respected", criterion9},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int k = 1; k < argc; ++k) which.push_back(std::atoi(argv[k]));
  if (which.empty())
    for (int k = 1; k <= static_cast<int>(criteria().size()); ++k) which.push_back(k);
  int failed = 0;
  for (int k : which) {
    if (k < 1 || k > static_cast<int>(criteria().size())) {
      std::printf("FAIL %d unknown criterion\n", k);
      ++failed;
      continue;
    }
    const auto& [name, fn] = criteria()[static_cast<std::size_t>(k - 1)];
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", k, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
