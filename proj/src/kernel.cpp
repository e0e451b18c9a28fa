#include "lvattract/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lvattract/error.hpp"

namespace lv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double trapezoid_mass(const Table& t) {
  const auto& f = t.densities;
  if (f.size() < 2) return 0.0;
  double sum = std::accumulate(f.begin(), f.end(), 0.0);
  sum -= 0.5 * (f.front() + f.back());
  return t.step * sum;
}

// P(Gamma(order, rate) > S)
double erlang_tail(double rate, int order, double S) {
  if (S <= 0.0) return 1.0;
  const double z = rate * S;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < order; ++m) {
    term *= z / m;
    sum += term;
  }
  return std::exp(-z) * sum;
}

}  // namespace

Kernel point_mass(double delay) { return point_mixture({Atom{delay, 1.0}}); }

Kernel point_mixture(std::vector<Atom> atoms) {
  if (atoms.empty()) throw Error(Errc::InvalidArgument, "point mass kernel needs at least one atom");
  for (const auto& a : atoms) {
    if (!(a.delay >= 0.0) || !std::isfinite(a.delay))
      throw Error(Errc::InvalidArgument, "atom delay must be finite and >= 0");
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
      throw Error(Errc::InvalidArgument, "atom weight must be finite and >= 0");
  }
  return PointMass{std::move(atoms)};
}

Kernel exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw Error(Errc::InvalidArgument, "exponential rate must be positive");
  return Exponential{rate};
}

Kernel erlang(double rate, int order) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw Error(Errc::InvalidArgument, "erlang rate must be positive");
  if (order < 1) throw Error(Errc::InvalidArgument, "erlang order must be >= 1");
  return Erlang{rate, order};
}

Kernel table(double step, std::vector<double> densities) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw Error(Errc::InvalidArgument, "table step must be positive");
  if (densities.size() < 2) throw Error(Errc::InvalidArgument, "table needs at least two nodes");
  for (double v : densities) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(Errc::InvalidArgument, "table densities must be finite and >= 0");
  }
  return Table{step, std::move(densities)};
}

Kernel normalized_table(double step, std::vector<double> densities) {
  auto k = std::get<Table>(table(step, std::move(densities)));
  const double m = trapezoid_mass(k);
  if (!(m > 0.0)) throw Error(Errc::InvalidArgument, "table has zero mass");
  for (double& v : k.densities) v /= m;
  return k;
}

const char* kind_name(const Kernel& k) {
  return std::visit(overloaded{
                        [](const PointMass&) { return "point"; },
                        [](const Exponential&) { return "exponential"; },
                        [](const Erlang&) { return "erlang"; },
                        [](const Table&) { return "table"; },
                    },
                    k);
}

double total_mass(const Kernel& k) {
  return std::visit(overloaded{
                        [](const PointMass& p) {
                          double s = 0.0;
                          for (const auto& a : p.atoms) s += a.weight;
                          return s;
                        },
                        [](const Exponential&) { return 1.0; },
                        [](const Erlang&) { return 1.0; },
                        [](const Table& t) { return trapezoid_mass(t); },
                    },
                    k);
}

bool is_normalized(const Kernel& k, double tol) { return std::abs(total_mass(k) - 1.0) <= tol; }

bool has_atom_at_zero(const Kernel& k) {
  const auto* p = std::get_if<PointMass>(&k);
  if (!p) return false;
  return std::any_of(p->atoms.begin(), p->atoms.end(),
                     [](const Atom& a) { return a.delay == 0.0 && a.weight > 0.0; });
}

double max_atom_delay(const Kernel& k) {
  const auto* p = std::get_if<PointMass>(&k);
  if (!p) return 0.0;
  double m = 0.0;
  for (const auto& a : p->atoms) m = std::max(m, a.delay);
  return m;
}

bool is_continuous(const Kernel& k) { return !std::holds_alternative<PointMass>(k); }

double tail_mass(const Kernel& k, double S) {
  return std::visit(overloaded{
                        [S](const PointMass& p) {
                          double s = 0.0;
                          for (const auto& a : p.atoms)
                            if (a.delay > S) s += a.weight;
                          return s;
                        },
                        [S](const Exponential& e) { return S <= 0.0 ? 1.0 : std::exp(-e.rate * S); },
                        [S](const Erlang& e) { return erlang_tail(e.rate, e.order, S); },
                        [](const Table&) { return 0.0; },
                    },
                    k);
}

double truncation_horizon(const Kernel& k, double tol) {
  return std::visit(overloaded{
                        [](const PointMass& p) {
                          double m = 0.0;
                          for (const auto& a : p.atoms) m = std::max(m, a.delay);
                          return m;
                        },
                        [tol](const Exponential& e) { return std::log(1.0 / tol) / e.rate; },
                        [tol](const Erlang& e) {
                          double hi = 1.0 / e.rate;
                          while (erlang_tail(e.rate, e.order, hi) > tol) hi *= 2.0;
                          double lo = 0.0;
                          for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
                            const double mid = 0.5 * (lo + hi);
                            (erlang_tail(e.rate, e.order, mid) > tol ? lo : hi) = mid;
                          }
                          return hi;
                        },
                        [](const Table& t) { return t.horizon(); },
                    },
                    k);
}

double density(const Kernel& k, double s) {
  if (s < 0.0) return 0.0;
  return std::visit(overloaded{
                        [](const PointMass&) { return 0.0; },
                        [s](const Exponential& e) { return e.rate * std::exp(-e.rate * s); },
                        [s](const Erlang& e) {
                          if (e.order == 1) return e.rate * std::exp(-e.rate * s);
                          if (s == 0.0) return 0.0;
                          return std::exp(e.order * std::log(e.rate) + (e.order - 1) * std::log(s) -
                                          e.rate * s - std::lgamma(static_cast<double>(e.order)));
                        },
                        [s](const Table& t) {
                          const double pos = s / t.step;
                          const auto i = static_cast<std::size_t>(pos);
                          if (i + 1 >= t.densities.size()) {
                            return (i + 1 == t.densities.size() && pos == static_cast<double>(i))
                                       ? t.densities.back()
                                       : 0.0;
                          }
                          const double w = pos - static_cast<double>(i);
                          return (1.0 - w) * t.densities[i] + w * t.densities[i + 1];
                        },
                    },
                    k);
}

std::complex<double> laplace(const Kernel& k, std::complex<double> z) {
  using C = std::complex<double>;
  return std::visit(overloaded{
                        [z](const PointMass& p) {
                          C s{0.0, 0.0};
                          for (const auto& a : p.atoms) s += a.weight * std::exp(-z * a.delay);
                          return s;
                        },
                        [z](const Exponential& e) { return C(e.rate) / (e.rate + z); },
                        [z](const Erlang& e) { return std::pow(C(e.rate) / (e.rate + z), e.order); },
                        [z](const Table& t) {
                          C s{0.0, 0.0};
                          const std::size_t n = t.densities.size();
                          for (std::size_t i = 0; i < n; ++i) {
                            const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
                            s += w * t.densities[i] * std::exp(-z * (t.step * static_cast<double>(i)));
                          }
                          return s * t.step;
                        },
                    },
                    k);
}

bool validate_control_kernel(const Kernel& g) {
  return std::visit(overloaded{
                        [&g](const PointMass&) { return has_atom_at_zero(g); },
                        [](const Exponential&) { return true; },
                        [](const Erlang&) { return true; },
                        [](const Table& t) { return !t.densities.empty() && t.densities.front() > 0.0; },
                    },
                    g);
}

}  // namespace lv
