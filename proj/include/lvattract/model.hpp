#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lvattract/kernel.hpp"

namespace lv {

/// Tabulated forcing h_i(t) on [0, step*(N-1)], linearly interpolated and
/// zero afterwards. Subtracted from the per-capita growth rate.
struct Perturbation {
  double step = 1.0;
  std::vector<double> values;

  bool empty() const { return values.empty(); }
  double operator()(double t) const;
};

/// n-species Lotka-Volterra system with distributed delays and feedback
/// controls:
///
///   x_i' = x_i (b_i - mu_i x_i - sum_j a_ij (K_ij * x_j) - c_i (G_i * u_i) - h_i(t))
///   u_i' = -e_i u_i + d_i x_i
///
/// With `controlled == false` the control term is dropped (c is ignored) and
/// u_i is still integrated as a passive observer.
struct SystemSpec {
  std::size_t n = 0;
  bool controlled = true;
  Eigen::VectorXd b;
  Eigen::VectorXd mu;
  Eigen::MatrixXd a;
  Eigen::VectorXd c;
  Eigen::VectorXd d;
  Eigen::VectorXd e;
  std::vector<Kernel> K;  // row-major n x n
  std::vector<Kernel> G;
  std::vector<Perturbation> h;  // empty, or one entry per species (possibly empty)

  const Kernel& kernel(std::size_t i, std::size_t j) const { return K[i * n + j]; }
  Kernel& kernel(std::size_t i, std::size_t j) { return K[i * n + j]; }

  /// Effective control gains c_i, or zeros for the uncontrolled system.
  Eigen::VectorXd effective_c() const;
  bool has_perturbations() const;
};

/// Spec with every kernel a point mass at zero and every control kernel a
/// point mass at zero; caller fills in coefficients.
SystemSpec make_spec(std::size_t n);

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate_spec(const SystemSpec& spec);

/// Scalar history on (-inf, 0]: samples on a uniform grid over [-S, 0]
/// joined by a monotone (Fritsch-Carlson) cubic, constant below -S.
class History {
 public:
  History() = default;
  /// values[0] is the sample at s = -S, values.back() the sample at s = 0.
  History(double horizon, std::vector<double> values);
  static History constant(double value);

  double operator()(double s) const;
  /// Horizon of the tabulated segment; infinity for constant histories.
  double horizon() const;
  bool is_constant() const { return values_.size() == 1; }
  const std::vector<double>& values() const { return values_; }
  double grid_step() const { return step_; }
  double min_value() const;

 private:
  double S_ = 0.0;
  double step_ = 0.0;
  std::vector<double> values_{0.0};
  std::vector<double> slopes_{0.0};
};

struct InitialData {
  std::vector<History> phi;  // densities
  std::vector<History> psi;  // controls
};

InitialData constant_initial_data(const Eigen::VectorXd& x0, const Eigen::VectorXd& u0);

/// Smallest history horizon that covers every point-mass delay and leaves at
/// most `tail_tol` of each continuous kernel's mass beyond it.
double required_history_horizon(const SystemSpec& spec, double tail_tol = 1e-8);

ValidationReport validate_initial_data(const SystemSpec& spec, const InitialData& init,
                                       double tail_tol = 1e-8);

}  // namespace lv
