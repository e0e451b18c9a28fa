#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lvattract/model.hpp"

namespace lv {

/// Samples of (x(t), u(t)) on the grid t_k = k h, k = 0..floor(T/h).
struct Trajectory {
  std::size_t n = 0;
  double h = 0.0;
  double T = 0.0;
  std::vector<double> t;
  Eigen::MatrixXd x;  // samples x n
  Eigen::MatrixXd u;  // samples x n
  double min_raw = 0.0;         // most negative value seen before clamping
  std::size_t clamped = 0;      // components clamped from [-pos_tol, 0) to 0

  std::size_t samples() const { return t.size(); }
  /// (x_1..x_n, u_1..u_n) at sample k.
  Eigen::VectorXd state(std::size_t k) const;
};

struct IntegrateOptions {
  double pos_tol = 1e-12;
  double tail_tol = 1e-8;
  /// Replace Exponential/Erlang kernels by normalized tables with node step h
  /// (direct quadrature on the stored history instead of chain variables).
  bool continuous_as_table = false;
};

/// Fixed-step RK4 on the system augmented with linear-chain variables for
/// Exponential/Erlang kernels. Point-mass and table kernels read the stored
/// trajectory through cubic Hermite interpolation. Throws InvalidArgument,
/// InvalidInitialData, PositivityViolation or NonFiniteState.
Trajectory integrate(const SystemSpec& spec, const InitialData& init, double h, double T,
                     const IntegrateOptions& opts = {});

/// Normalized table with node step `step` covering the kernel up to its
/// truncation horizon for `tail_tol`. Tables and point masses are returned
/// unchanged.
Kernel tabulate_kernel(const Kernel& k, double step, double tail_tol = 1e-8);

/// Positive constant histories drawn uniformly from [lo, hi] (mt19937_64),
/// x first, then u, species by species.
InitialData random_constant_initial_data(std::size_t n, std::uint64_t seed, double lo = 0.1,
                                         double hi = 2.0);

/// Target point (x*, u*) with u* = d x* / e.
Eigen::VectorXd state_target(const SystemSpec& spec, const Eigen::VectorXd& x);

struct ConvergenceReport {
  bool converged = false;
  double deviation = 0.0;  // sup over the window of |state - target|_inf
};

/// sup over [T - W, T] of |(x, u) - target|_inf < tol. Requires W <= T/2.
ConvergenceReport detect_convergence(const Trajectory& traj, const Eigen::VectorXd& target, double W,
                                     double tol);

struct OscillationReport {
  double amplitude = 0.0;           // max - min of x_1 over [T - W, T]
  double previous_amplitude = 0.0;  // same over [T - 2W, T - W]
  bool sustained = false;
};

OscillationReport detect_oscillation(const Trajectory& traj, double W, double floor = 1e-3);

/// max_k |u_i(t_k) - (u_i(0) e^{-e t} + d int_0^t e^{-e (t - s)} x_i(s) ds)|
/// with the integral evaluated from the recorded x_i (quadratic interpolation,
/// three-point Gauss-Legendre per interval).
double control_integral_check(const Trajectory& traj, const SystemSpec& spec, std::size_t i);

/// max over the run of |x_i| restricted to [t0, T], per species.
Eigen::VectorXd window_max(const Trajectory& traj, double t0);

}  // namespace lv
