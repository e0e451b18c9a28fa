#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "lvattract/model.hpp"

namespace lv {

using cplx = std::complex<double>;

/// Linearization of a planar system about E1 = (X1, 0) or E* = (x1*, x2*).
/// Delayed terms enter through the kernels' Laplace transforms, so discrete
/// delays and distributed kernels are handled alike.
struct PlanarCharacteristic {
  std::string equilibrium;  // "E1" or "E*"
  SystemSpec spec;
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  bool drop_controls = false;  // the c_i -> 0+ limit
};

/// Throws DimensionMismatch unless n = 2, InvalidArgument if x is not an
/// equilibrium of the requested type.
PlanarCharacteristic make_planar_characteristic(const SystemSpec& spec, const Eigen::Vector2d& x,
                                                bool drop_controls = false);

/// D + L(e^{lambda .} I_4) in the variable order (x1, u1, x2, u2), so that
/// Delta(lambda) = lambda I_4 + this matrix.
Eigen::Matrix4cd linearization_matrix(const PlanarCharacteristic& pc, cplx lambda);

/// det Delta(lambda) by complex LU.
cplx char_det(const PlanarCharacteristic& pc, cplx lambda);

/// Factors of det Delta at E1: (lambda + e2), (lambda - (b2 - a21 X1)) and
/// h(lambda) = (lambda + X1(mu1 + a11 K11^)) (lambda + e1) + X1 d1 c1 G1^.
struct E1Factors {
  cplx decay;       // lambda + e2
  cplx invasion;    // lambda - (b2 - a21 X1)
  cplx h;           // the (x1, u1) block determinant
};

E1Factors e1_factors(const PlanarCharacteristic& pc, cplx lambda);

/// h(lambda) = (lambda + b)^2 + c e^{-lambda tau}.
cplx hopf_h(double b, double c, double tau, cplx lambda);

struct HopfThreshold {
  int index = 0;
  double tau = 0.0;
  double omega = 0.0;
  double residual = 0.0;  // |h(i omega)| at tau
};

/// Delays tau_n = (theta0 + 2 n pi) / omega, n = 0..n_max, at which
/// (lambda + b)^2 + c e^{-lambda tau} has the roots +-i omega,
/// omega = sqrt(c - b^2). Throws NoCrossing when c <= b^2.
std::vector<HopfThreshold> hopf_thresholds(double b, double c, int n_max);

/// Planar spec with equilibrium (sqrt(c), sqrt(c)), a_ii = 0, a12 = 1,
/// a21 = -1, mu_i = b / sqrt(c), control gains eps and tau12 = tau21 = tau/2,
/// reducing the interior characteristic function to (lambda + b)^2 +
/// c e^{-lambda tau} as eps -> 0. Throws InvalidRegime unless c > b^2 > 0.
SystemSpec build_hopf_fixture(double b, double c, double tau, double eps = 1e-6);

}  // namespace lv
