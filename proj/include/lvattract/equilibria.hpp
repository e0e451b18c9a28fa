#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lvattract/matrix_class.hpp"
#include "lvattract/model.hpp"

namespace lv {

/// Non-negative equilibrium (x*, u*) with (M x*)_i >= b_i wherever x*_i = 0.
struct SaturatedEquilibrium {
  Eigen::VectorXd x;
  Eigen::VectorXd u;          // d_i x_i / e_i
  std::vector<int> support;   // {i : x_i > 0}, zero-based, ascending
  Eigen::VectorXd residual;   // M x - b
  double gap = 0.0;           // max_i x_i * r_i
  bool degenerate = false;    // an off-support residual sits in the tie band
  int accepted_supports = 0;  // supports that passed the acceptance test
};

struct LcpResult {
  Eigen::VectorXd x;
  std::uint32_t support_mask = 0;
  int accepted = 0;
  bool degenerate = false;
};

/// Tie band used by the support test: 1e-12 * max(1, |b|_inf, |M|_inf).
double lcp_tolerance(const Eigen::MatrixXd& M, const Eigen::VectorXd& b);

/// Finds x >= 0 with M x >= b and (M x)_i = b_i on the support, by checking
/// every support J: solve M_JJ x_J = b_J, accept iff x_J > tol and the
/// off-support residuals are >= -tol. OpenMP over supports; the answer is the
/// accepted support of smallest size (then smallest mask). No P-matrix check.
LcpResult solve_lcp_enumeration(const Eigen::MatrixXd& M, const Eigen::VectorXd& b);
/// Single-threaded reference for solve_lcp_enumeration.
LcpResult solve_lcp_enumeration_serial(const Eigen::MatrixXd& M, const Eigen::VectorXd& b);

/// Unique saturated equilibrium for a P-matrix M. Throws NotPMatrix,
/// NoSupportFound or DimensionTooLarge (n > 12).
SaturatedEquilibrium saturated_equilibrium(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                                           const Eigen::VectorXd& d, const Eigen::VectorXd& e);
SaturatedEquilibrium saturated_equilibrium(const SystemSpec& spec);

/// Packs an arbitrary non-negative x into the equilibrium record (residuals,
/// support, gap) without solving anything.
SaturatedEquilibrium describe_point(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                                    const Eigen::VectorXd& d, const Eigen::VectorXd& e,
                                    const Eigen::VectorXd& x);

struct DissipativityResult {
  bool verdict = false;
  ClassCertificate certificate;  // M0^- nonsingular M-matrix test
  std::optional<SaturatedEquilibrium> bound;
};

/// Ultimate bound from the cooperative comparison system with community
/// matrix M0^- = diag(mu) - A^- and the same b, d, e.
DissipativityResult dissipativity_bound(const SystemSpec& spec);

struct PlanarEquilibrium {
  std::string label;  // E0, E1, E2, E*
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  Eigen::Vector2d residual = Eigen::Vector2d::Zero();  // M x - b
  bool saturated = false;
  // Boundary equilibria that are not saturated are unstable.
  bool unstable_boundary = false;
};

struct PlanarEquilibria {
  PlanarEquilibrium E0;
  std::optional<PlanarEquilibrium> E1;
  std::optional<PlanarEquilibrium> E2;
  std::optional<PlanarEquilibrium> Estar;

  std::vector<const PlanarEquilibrium*> all() const;
};

/// Closed-form equilibria of the planar system. Throws DimensionMismatch
/// unless n == 2.
PlanarEquilibria planar_equilibria(const SystemSpec& spec);

}  // namespace lv
