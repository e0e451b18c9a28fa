#include "lvattract/spectral.hpp"

#include <cmath>
#include <numbers>

#include "lvattract/error.hpp"

namespace lv {

PlanarCharacteristic make_planar_characteristic(const SystemSpec& spec, const Eigen::Vector2d& x,
                                                bool drop_controls) {
  if (spec.n != 2) throw Error(Errc::DimensionMismatch, "characteristic analysis needs n = 2");
  PlanarCharacteristic pc;
  pc.spec = spec;
  pc.x = x;
  pc.drop_controls = drop_controls;
  if (x(0) > 0.0 && x(1) > 0.0) {
    pc.equilibrium = "E*";
  } else if (x(0) > 0.0 && x(1) == 0.0) {
    pc.equilibrium = "E1";
  } else {
    throw Error(Errc::InvalidArgument, "characteristic analysis supports E1 = (X1, 0) and E* > 0");
  }
  return pc;
}

Eigen::Matrix4cd linearization_matrix(const PlanarCharacteristic& pc, cplx lambda) {
  const SystemSpec& s = pc.spec;
  const Eigen::VectorXd c = pc.drop_controls ? Eigen::VectorXd::Zero(2) : s.effective_c();
  Eigen::Matrix4cd L = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 2; ++i) {
    const int r = 2 * i;  // x_i row; u_i row is r + 1
    const double xi = pc.x(i);
    if (xi > 0.0) {
      for (int j = 0; j < 2; ++j) {
        cplx v = xi * s.a(i, j) * laplace(s.kernel(i, j), lambda);
        if (i == j) v += xi * s.mu(i);
        L(r, 2 * j) += v;
      }
      L(r, r + 1) = xi * c(i) * laplace(s.G[i], lambda);
    } else {
      double growth = s.b(i);
      for (int j = 0; j < 2; ++j) growth -= s.a(i, j) * pc.x(j);
      L(r, r) = -growth;
    }
    L(r + 1, r) = -s.d(i);
    L(r + 1, r + 1) = s.e(i);
  }
  return L;
}

cplx char_det(const PlanarCharacteristic& pc, cplx lambda) {
  const Eigen::Matrix4cd D = lambda * Eigen::Matrix4cd::Identity() + linearization_matrix(pc, lambda);
  return D.partialPivLu().determinant();
}

E1Factors e1_factors(const PlanarCharacteristic& pc, cplx lambda) {
  if (pc.equilibrium != "E1") throw Error(Errc::InvalidArgument, "factorization applies at E1");
  const SystemSpec& s = pc.spec;
  const double X1 = pc.x(0);
  const double c1 = pc.drop_controls ? 0.0 : s.effective_c()(0);
  E1Factors f;
  f.decay = lambda + s.e(1);
  f.invasion = lambda - (s.b(1) - s.a(1, 0) * X1);
  f.h = (lambda + X1 * (s.mu(0) + s.a(0, 0) * laplace(s.kernel(0, 0), lambda))) * (lambda + s.e(0)) +
        X1 * s.d(0) * c1 * laplace(s.G[0], lambda);
  return f;
}

cplx hopf_h(double b, double c, double tau, cplx lambda) {
  return (lambda + b) * (lambda + b) + c * std::exp(-lambda * tau);
}

std::vector<HopfThreshold> hopf_thresholds(double b, double c, int n_max) {
  if (!(c > b * b)) throw Error(Errc::NoCrossing, "no imaginary-axis crossing unless c > b^2");
  if (n_max < 0) throw Error(Errc::InvalidArgument, "n_max must be >= 0");
  const double omega = std::sqrt(c - b * b);
  const double theta0 = std::atan2(2.0 * b * omega, c - 2.0 * b * b);
  std::vector<HopfThreshold> out;
  for (int k = 0; k <= n_max; ++k) {
    HopfThreshold t;
    t.index = k;
    t.omega = omega;
    t.tau = (theta0 + 2.0 * std::numbers::pi * k) / omega;
    t.residual = std::abs(hopf_h(b, c, t.tau, cplx(0.0, omega)));
    out.push_back(t);
  }
  return out;
}

SystemSpec build_hopf_fixture(double b, double c, double tau, double eps) {
  if (!(b > 0.0) || !(c > b * b)) throw Error(Errc::InvalidRegime, "Hopf fixture needs c > b^2 > 0");
  if (!(tau >= 0.0)) throw Error(Errc::InvalidRegime, "delay must be >= 0");
  if (!(eps > 0.0)) throw Error(Errc::InvalidRegime, "control gain must be positive");
  const double r = std::sqrt(c);
  SystemSpec s = make_spec(2);
  s.controlled = true;
  s.b << b + r, b - r;
  s.mu << b / r, b / r;
  s.a << 0.0, 1.0, -1.0, 0.0;
  s.c << eps, eps;
  s.d << 1.0, 1.0;
  s.e << 1.0, 1.0;
  s.kernel(0, 1) = point_mass(0.5 * tau);
  s.kernel(1, 0) = point_mass(0.5 * tau);
  return s;
}

}  // namespace lv
