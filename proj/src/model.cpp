#include "lvattract/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lvattract/error.hpp"

namespace lv {

double Perturbation::operator()(double t) const {
  if (values.empty() || t < 0.0) return 0.0;
  const double pos = t / step;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= values.size()) {
    return (i + 1 == values.size() && pos == static_cast<double>(i)) ? values.back() : 0.0;
  }
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

Eigen::VectorXd SystemSpec::effective_c() const {
  return controlled ? c : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
}

bool SystemSpec::has_perturbations() const {
  return std::any_of(h.begin(), h.end(), [](const Perturbation& p) { return !p.empty(); });
}

SystemSpec make_spec(std::size_t n) {
  SystemSpec s;
  const auto m = static_cast<Eigen::Index>(n);
  s.n = n;
  s.b = Eigen::VectorXd::Zero(m);
  s.mu = Eigen::VectorXd::Ones(m);
  s.a = Eigen::MatrixXd::Zero(m, m);
  s.c = Eigen::VectorXd::Ones(m);
  s.d = Eigen::VectorXd::Ones(m);
  s.e = Eigen::VectorXd::Ones(m);
  s.K.assign(n * n, point_mass(0.0));
  s.G.assign(n, point_mass(0.0));
  return s;
}

ValidationReport validate_spec(const SystemSpec& spec) {
  ValidationReport r;
  auto add = [&r](std::string field, std::string msg) {
    r.violations.push_back({std::move(field), std::move(msg)});
  };
  const auto n = static_cast<Eigen::Index>(spec.n);
  if (spec.n == 0) {
    add("n", "species count must be at least 1");
    return r;
  }
  const bool shapes_ok = spec.b.size() == n && spec.mu.size() == n && spec.a.rows() == n &&
                         spec.a.cols() == n && spec.c.size() == n && spec.d.size() == n &&
                         spec.e.size() == n && spec.K.size() == spec.n * spec.n &&
                         spec.G.size() == spec.n && (spec.h.empty() || spec.h.size() == spec.n);
  if (!shapes_ok) {
    add("shape", "coefficient dimensions do not match n");
    return r;
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string idx = "[" + std::to_string(i + 1) + "]";
    if (!std::isfinite(spec.b(i))) add("b" + idx, "b must be finite");
    if (!(spec.mu(i) > 0.0) || !std::isfinite(spec.mu(i))) add("mu" + idx, "mu must be positive");
    if (!(spec.d(i) > 0.0) || !std::isfinite(spec.d(i))) add("d" + idx, "d must be positive");
    if (!(spec.e(i) > 0.0) || !std::isfinite(spec.e(i))) add("e" + idx, "e must be positive");
    if (spec.controlled && (!(spec.c(i) > 0.0) || !std::isfinite(spec.c(i))))
      add("c" + idx, "c must be positive");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(spec.a(i, j)))
        add("a[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]", "a must be finite");
    }
  }

  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < spec.n; ++j) {
      const std::string f = "K[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]";
      const Kernel& k = spec.kernel(i, j);
      if (!is_normalized(k)) add(f, "kernel mass must equal 1");
      // An atom of K_ii at zero belongs in mu_i; only meaningful when a_ii != 0.
      if (i == j && spec.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) != 0.0 &&
          has_atom_at_zero(k))
        add(f, "diagonal kernel must be non-atomic at zero");
    }
    const std::string g = "G[" + std::to_string(i + 1) + "]";
    if (!is_normalized(spec.G[i])) add(g, "kernel mass must equal 1");
    if (spec.controlled && !validate_control_kernel(spec.G[i]))
      add(g, "control kernel fails the effectiveness condition (needs mass at or near zero)");
  }

  for (std::size_t i = 0; i < spec.h.size(); ++i) {
    const auto& p = spec.h[i];
    if (p.empty()) continue;
    const std::string f = "h[" + std::to_string(i + 1) + "]";
    if (!(p.step > 0.0)) add(f, "perturbation step must be positive");
    if (std::any_of(p.values.begin(), p.values.end(), [](double v) { return !std::isfinite(v); }))
      add(f, "perturbation values must be finite");
  }
  return r;
}

History::History(double horizon, std::vector<double> values) : S_(horizon), values_(std::move(values)) {
  if (values_.empty()) throw Error(Errc::InvalidArgument, "history needs at least one sample");
  if (values_.size() == 1) {
    slopes_.assign(1, 0.0);
    return;
  }
  if (!(horizon > 0.0)) throw Error(Errc::InvalidArgument, "history horizon must be positive");
  const std::size_t m = values_.size();
  step_ = horizon / static_cast<double>(m - 1);

  std::vector<double> delta(m - 1);
  for (std::size_t k = 0; k + 1 < m; ++k) delta[k] = (values_[k + 1] - values_[k]) / step_;
  slopes_.assign(m, 0.0);
  slopes_[0] = delta[0];
  slopes_[m - 1] = delta[m - 2];
  for (std::size_t k = 1; k + 1 < m; ++k)
    slopes_[k] = (delta[k - 1] * delta[k] <= 0.0) ? 0.0 : 0.5 * (delta[k - 1] + delta[k]);
  // Fritsch-Carlson limiter keeps the interpolant monotone between samples.
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (delta[k] == 0.0) {
      slopes_[k] = slopes_[k + 1] = 0.0;
      continue;
    }
    const double al = slopes_[k] / delta[k];
    const double be = slopes_[k + 1] / delta[k];
    const double r2 = al * al + be * be;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      slopes_[k] = tau * al * delta[k];
      slopes_[k + 1] = tau * be * delta[k];
    }
  }
}

History History::constant(double value) { return History(0.0, std::vector<double>{value}); }

double History::operator()(double s) const {
  if (values_.size() == 1 || s <= -S_) return values_.front();
  if (s >= 0.0) return values_.back();
  const double pos = (s + S_) / step_;
  auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= values_.size()) k = values_.size() - 2;
  const double t = pos - static_cast<double>(k);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[k] + h10 * step_ * slopes_[k] + h01 * values_[k + 1] +
         h11 * step_ * slopes_[k + 1];
}

double History::horizon() const {
  return is_constant() ? std::numeric_limits<double>::infinity() : S_;
}

double History::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

InitialData constant_initial_data(const Eigen::VectorXd& x0, const Eigen::VectorXd& u0) {
  InitialData init;
  for (Eigen::Index i = 0; i < x0.size(); ++i) init.phi.push_back(History::constant(x0(i)));
  for (Eigen::Index i = 0; i < u0.size(); ++i) init.psi.push_back(History::constant(u0(i)));
  return init;
}

double required_history_horizon(const SystemSpec& spec, double tail_tol) {
  double S = 0.0;
  for (const auto& k : spec.K) S = std::max(S, truncation_horizon(k, tail_tol));
  if (spec.controlled)
    for (const auto& g : spec.G) S = std::max(S, truncation_horizon(g, tail_tol));
  return S;
}

ValidationReport validate_initial_data(const SystemSpec& spec, const InitialData& init,
                                       double tail_tol) {
  ValidationReport r;
  auto add = [&r](std::string field, std::string msg) {
    r.violations.push_back({std::move(field), std::move(msg)});
  };
  if (init.phi.size() != spec.n || init.psi.size() != spec.n) {
    add("init", "initial data must provide one history per species for x and u");
    return r;
  }
  const double S_req = required_history_horizon(spec, tail_tol);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::string idx = "[" + std::to_string(i + 1) + "]";
    for (const auto* pair : {&init.phi, &init.psi}) {
      const History& f = (*pair)[i];
      const std::string name = (pair == &init.phi ? "phi" : "psi") + idx;
      if (f.min_value() < 0.0) add(name, "history must be non-negative");
      if (!(f(0.0) > 0.0)) add(name, "history must be positive at s = 0");
      if (!f.is_constant() && f.horizon() < S_req)
        add(name, "history horizon shorter than required " + std::to_string(S_req));
    }
  }
  return r;
}

}  // namespace lv
