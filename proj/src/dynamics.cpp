#include "lvattract/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <variant>

#include "lvattract/error.hpp"

namespace lv {

namespace {

constexpr std::array<double, 5> kGlNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                            0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGlWeights = {0.2369268850561891, 0.4786286704993665,
                                              0.5688888888888889, 0.4786286704993665,
                                              0.2369268850561891};

// int_0^inf density(s) w(-s) ds for a history w that is constant below -S.
double history_convolution(const Kernel& k, const History& w) {
  if (w.is_constant()) return w(0.0);
  const double S = w.horizon();
  const double panel = w.grid_step();
  const auto panels = static_cast<std::size_t>(std::llround(S / panel));
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = panel * static_cast<double>(p);
    for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
      const double s = a + 0.5 * panel * (kGlNodes[q] + 1.0);
      sum += 0.5 * panel * kGlWeights[q] * density(k, s) * w(-s);
    }
  }
  return sum + tail_mass(k, S) * w(-S);
}

struct Conv {
  enum Kind { Atoms, Chain, Quadrature } kind = Atoms;
  int signal = 0;                        // index into (x, u)
  std::vector<std::pair<double, double>> nodes;  // (lag, weight)
  int chain_out = 0;                     // state index of the chain output
};

struct ChainBlock {
  int signal = 0;
  double rate = 1.0;
  int order = 1;
  int offset = 0;  // first chain variable in the state
};

class Integrator {
 public:
  Integrator(const SystemSpec& spec, const InitialData& init, double h, const IntegrateOptions& opts)
      : spec_(spec), init_(init), h_(h), opts_(opts), n_(static_cast<int>(spec.n)), m_(2 * n_) {
    int offset = m_;
    auto plan = [&](const Kernel& k, int signal) {
      Conv c;
      c.signal = signal;
      Kernel use = opts_.continuous_as_table ? tabulate_kernel(k, h_, opts_.tail_tol) : k;
      if (const auto* p = std::get_if<PointMass>(&use)) {
        for (const auto& a : p->atoms)
          if (a.weight != 0.0) c.nodes.emplace_back(a.delay, a.weight);
        c.kind = Conv::Atoms;
      } else if (const auto* t = std::get_if<Table>(&use)) {
        const std::size_t N = t->densities.size();
        for (std::size_t q = 0; q < N; ++q) {
          double w = t->step * t->densities[q];
          if (q == 0 || q + 1 == N) w *= 0.5;
          if (w != 0.0) c.nodes.emplace_back(t->step * static_cast<double>(q), w);
        }
        c.kind = Conv::Quadrature;
      } else {
        ChainBlock b;
        b.signal = signal;
        b.offset = offset;
        if (const auto* e = std::get_if<Exponential>(&use)) {
          b.rate = e->rate;
          b.order = 1;
        } else {
          const auto& g = std::get<Erlang>(use);
          b.rate = g.rate;
          b.order = g.order;
        }
        offset += b.order;
        chains_.push_back(b);
        c.kind = Conv::Chain;
        c.chain_out = b.offset + b.order - 1;
      }
      return c;
    };
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        const double a = spec_.a(i, j);
        if (a != 0.0) terms_.push_back({i, a, plan(spec_.kernel(i, j), j)});
      }
    const Eigen::VectorXd c = spec_.effective_c();
    for (int i = 0; i < n_; ++i)
      if (c(i) != 0.0) terms_.push_back({i, c(i), plan(spec_.G[i], n_ + i)});
    dim_ = offset;
    growth_.resize(static_cast<std::size_t>(n_));
  }

  Trajectory run(double T) {
    const auto steps = static_cast<std::size_t>(std::floor(T / h_ + 1e-9));
    Trajectory tr;
    tr.n = spec_.n;
    tr.h = h_;
    tr.T = T;
    tr.t.resize(steps + 1);
    tr.x.resize(static_cast<Eigen::Index>(steps + 1), n_);
    tr.u.resize(static_cast<Eigen::Index>(steps + 1), n_);
    Y_.reserve((steps + 1) * m_);
    F_.reserve((steps + 1) * m_);

    std::vector<double> y(dim_);
    for (int i = 0; i < n_; ++i) {
      y[i] = init_.phi[i](0.0);
      y[n_ + i] = init_.psi[i](0.0);
    }
    for (const auto& cb : chains_) {
      const History& w = cb.signal < n_ ? init_.phi[cb.signal] : init_.psi[cb.signal - n_];
      for (int q = 0; q < cb.order; ++q) y[cb.offset + q] = history_convolution(erlang(cb.rate, q + 1), w);
    }
    record(tr, 0, y);

    std::vector<double> k1(dim_), k2(dim_), k3(dim_), k4(dim_), tmp(dim_);
    for (std::size_t s = 0; s < steps; ++s) {
      const double t = h_ * static_cast<double>(s);
      rhs(t, y, k1);
      F_.insert(F_.end(), k1.begin(), k1.begin() + m_);
      for (int q = 0; q < dim_; ++q) tmp[q] = y[q] + 0.5 * h_ * k1[q];
      rhs(t + 0.5 * h_, tmp, k2);
      for (int q = 0; q < dim_; ++q) tmp[q] = y[q] + 0.5 * h_ * k2[q];
      rhs(t + 0.5 * h_, tmp, k3);
      for (int q = 0; q < dim_; ++q) tmp[q] = y[q] + h_ * k3[q];
      rhs(t + h_, tmp, k4);
      for (int q = 0; q < dim_; ++q) y[q] += h_ / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
      enforce(y, t + h_, tr);
      record(tr, s + 1, y);
    }
    return tr;
  }

 private:
  struct Term {
    int species;
    double coef;
    Conv conv;
  };

  void record(Trajectory& tr, std::size_t k, const std::vector<double>& y) {
    tr.t[k] = h_ * static_cast<double>(k);
    for (int i = 0; i < n_; ++i) {
      tr.x(static_cast<Eigen::Index>(k), i) = y[i];
      tr.u(static_cast<Eigen::Index>(k), i) = y[n_ + i];
    }
    Y_.insert(Y_.end(), y.begin(), y.begin() + m_);
  }

  void enforce(std::vector<double>& y, double t, Trajectory& tr) {
    for (int q = 0; q < dim_; ++q) {
      const double v = y[q];
      if (!std::isfinite(v))
        throw Error(Errc::NonFiniteState, "non-finite state at t = " + std::to_string(t));
      if (v < 0.0) {
        tr.min_raw = std::min(tr.min_raw, v);
        if (v < -opts_.pos_tol)
          throw Error(Errc::PositivityViolation,
                      "component " + std::to_string(q) + " reached " + std::to_string(v) +
                          " at t = " + std::to_string(t) + "; reduce the step");
        y[q] = 0.0;
        ++tr.clamped;
      }
    }
  }

  // Value of signal c at time tq; (tc, yc) is the stage being evaluated.
  double past(int c, double tq, double tc, const std::vector<double>& yc) const {
    if (tq >= tc) return yc[c];
    if (tq <= 0.0) {
      const History& w = c < n_ ? init_.phi[c] : init_.psi[c - n_];
      return w(tq);
    }
    const std::size_t last_y = Y_.size() / m_ - 1;
    const std::size_t last_f = F_.size() / m_;  // F_ holds indices 0..last_f-1
    auto k = static_cast<std::size_t>(tq / h_);
    if (k > last_y) k = last_y;
    const double tk = h_ * static_cast<double>(k);
    if (k == last_y) {
      // Inside the current step: linear between the last node and the stage.
      const double span = tc - tk;
      const double th = span > 0.0 ? (tq - tk) / span : 1.0;
      return (1.0 - th) * Y_[k * m_ + c] + th * yc[c];
    }
    const double y0 = Y_[k * m_ + c];
    const double y1 = Y_[(k + 1) * m_ + c];
    const double th = (tq - tk) / h_;
    if (k + 1 >= last_f) return (1.0 - th) * y0 + th * y1;
    const double f0 = F_[k * m_ + c];
    const double f1 = F_[(k + 1) * m_ + c];
    const double t2 = th * th;
    const double t3 = t2 * th;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + th) * h_ * f0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h_ * f1;
  }

  double convolve(const Conv& c, double t, const std::vector<double>& y) const {
    if (c.kind == Conv::Chain) return y[c.chain_out];
    double s = 0.0;
    for (const auto& [lag, w] : c.nodes) s += w * past(c.signal, t - lag, t, y);
    return s;
  }

  void rhs(double t, const std::vector<double>& y, std::vector<double>& dy) const {
    for (int i = 0; i < n_; ++i) {
      double g = spec_.b(i) - spec_.mu(i) * y[i];
      if (!spec_.h.empty() && !spec_.h[i].empty()) g -= spec_.h[i](t);
      growth_[i] = g;
    }
    for (const Term& term : terms_) growth_[term.species] -= term.coef * convolve(term.conv, t, y);
    for (int i = 0; i < n_; ++i) {
      dy[i] = y[i] * growth_[i];
      dy[n_ + i] = -spec_.e(i) * y[n_ + i] + spec_.d(i) * y[i];
    }
    for (const auto& cb : chains_) {
      double in = y[cb.signal];
      for (int q = 0; q < cb.order; ++q) {
        const double z = y[cb.offset + q];
        dy[cb.offset + q] = cb.rate * (in - z);
        in = z;
      }
    }
  }

  const SystemSpec& spec_;
  const InitialData& init_;
  double h_;
  IntegrateOptions opts_;
  int n_;
  int m_;  // x and u components, the ones kept in the history
  int dim_ = 0;
  std::vector<ChainBlock> chains_;
  std::vector<Term> terms_;
  std::vector<double> Y_;
  std::vector<double> F_;
  mutable std::vector<double> growth_;
};

}  // namespace

Eigen::VectorXd Trajectory::state(std::size_t k) const {
  Eigen::VectorXd s(2 * n);
  const auto r = static_cast<Eigen::Index>(k);
  s.head(static_cast<Eigen::Index>(n)) = x.row(r).transpose();
  s.tail(static_cast<Eigen::Index>(n)) = u.row(r).transpose();
  return s;
}

Kernel tabulate_kernel(const Kernel& k, double step, double tail_tol) {
  if (!std::holds_alternative<Exponential>(k) && !std::holds_alternative<Erlang>(k)) return k;
  const double S = truncation_horizon(k, tail_tol);
  const auto N = static_cast<std::size_t>(std::ceil(S / step)) + 1;
  std::vector<double> rho(N);
  for (std::size_t q = 0; q < N; ++q) rho[q] = density(k, step * static_cast<double>(q));
  return normalized_table(step, std::move(rho));
}

Trajectory integrate(const SystemSpec& spec, const InitialData& init, double h, double T,
                     const IntegrateOptions& opts) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(Errc::InvalidArgument, "step h must be positive");
  if (!(T >= 10.0 * h) || !std::isfinite(T)) throw Error(Errc::InvalidArgument, "horizon T must be >= 10 h");
  const ValidationReport vs = validate_spec(spec);
  if (!vs.ok())
    throw Error(Errc::InvalidArgument, vs.violations.front().field + ": " + vs.violations.front().message);
  const ValidationReport vi = validate_initial_data(spec, init, opts.tail_tol);
  if (!vi.ok())
    throw Error(Errc::InvalidInitialData,
                vi.violations.front().field + ": " + vi.violations.front().message);
  Integrator it(spec, init, h, opts);
  return it.run(T);
}

InitialData random_constant_initial_data(std::size_t n, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd x(static_cast<Eigen::Index>(n)), u(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    x(static_cast<Eigen::Index>(i)) = dist(rng);
    u(static_cast<Eigen::Index>(i)) = dist(rng);
  }
  return constant_initial_data(x, u);
}

Eigen::VectorXd state_target(const SystemSpec& spec, const Eigen::VectorXd& x) {
  Eigen::VectorXd s(2 * x.size());
  s.head(x.size()) = x;
  s.tail(x.size()) = (spec.d.array() * x.array() / spec.e.array()).matrix();
  return s;
}

namespace {

std::size_t window_start(const Trajectory& traj, double W) {
  if (traj.samples() == 0) throw Error(Errc::InvalidArgument, "empty trajectory");
  if (!(W > 0.0) || W > 0.5 * traj.T + 1e-12) throw Error(Errc::InvalidArgument, "window must satisfy 0 < W <= T/2");
  const double t0 = traj.t.back() - W;
  return static_cast<std::size_t>(std::max(0.0, std::ceil(t0 / traj.h - 1e-9)));
}

double amplitude(const Trajectory& traj, std::size_t from, std::size_t to) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = from; k <= to; ++k) {
    const double v = traj.x(static_cast<Eigen::Index>(k), 0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

}  // namespace

ConvergenceReport detect_convergence(const Trajectory& traj, const Eigen::VectorXd& target, double W,
                                     double tol) {
  const std::size_t from = window_start(traj, W);
  if (target.size() != static_cast<Eigen::Index>(2 * traj.n))
    throw Error(Errc::DimensionMismatch, "target must have 2n components");
  ConvergenceReport r;
  for (std::size_t k = from; k < traj.samples(); ++k)
    r.deviation = std::max(r.deviation, (traj.state(k) - target).cwiseAbs().maxCoeff());
  r.converged = r.deviation < tol;
  return r;
}

OscillationReport detect_oscillation(const Trajectory& traj, double W, double floor) {
  const std::size_t from = window_start(traj, W);
  const std::size_t last = traj.samples() - 1;
  const std::size_t width = last - from;
  OscillationReport r;
  r.amplitude = amplitude(traj, from, last);
  r.previous_amplitude = amplitude(traj, from >= width ? from - width : 0, from);
  r.sustained = r.amplitude >= floor && r.amplitude >= 0.9 * r.previous_amplitude;
  return r;
}

double control_integral_check(const Trajectory& traj, const SystemSpec& spec, std::size_t i) {
  if (i >= traj.n) throw Error(Errc::DimensionMismatch, "species index out of range");
  const std::size_t N = traj.samples();
  if (N < 3) throw Error(Errc::InvalidArgument, "control check needs at least three samples");
  const auto ci = static_cast<Eigen::Index>(i);
  const double e = spec.e(ci), d = spec.d(ci), h = traj.h;
  const double decay = std::exp(-e * h);
  // Three-point Gauss-Legendre nodes on [0, 1].
  const double r = std::sqrt(0.6);
  const std::array<double, 3> node = {0.5 * (1 - r), 0.5, 0.5 * (1 + r)};
  const std::array<double, 3> weight = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

  double U = traj.u(0, ci);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < N; ++k) {
    // Quadratic through three consecutive samples containing [t_k, t_k+1].
    const std::size_t j0 = k + 2 < N ? k : k - 1;
    const double x0 = traj.x(static_cast<Eigen::Index>(j0), ci);
    const double x1 = traj.x(static_cast<Eigen::Index>(j0 + 1), ci);
    const double x2 = traj.x(static_cast<Eigen::Index>(j0 + 2), ci);
    const double shift = static_cast<double>(k - j0);
    double integral = 0.0;
    for (int q = 0; q < 3; ++q) {
      const double s = shift + node[q];  // position in units of h from t_j0
      const double L0 = 0.5 * (s - 1) * (s - 2);
      const double L1 = -s * (s - 2);
      const double L2 = 0.5 * s * (s - 1);
      integral += weight[q] * std::exp(-e * h * (1.0 - node[q])) * (L0 * x0 + L1 * x1 + L2 * x2);
    }
    U = U * decay + d * h * integral;
    worst = std::max(worst, std::abs(traj.u(static_cast<Eigen::Index>(k + 1), ci) - U));
  }
  return worst;
}

Eigen::VectorXd window_max(const Trajectory& traj, double t0) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(traj.n));
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    if (traj.t[k] < t0 - 1e-12) continue;
    m = m.cwiseMax(traj.x.row(static_cast<Eigen::Index>(k)).transpose());
  }
  return m;
}

}  // namespace lv
