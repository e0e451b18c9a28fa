#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "lvattract/model.hpp"

namespace lv {

/// Community matrices of the controlled system. Uncontrolled specs get C = 0,
/// so M == M0 and M_hat == M_hat0.
struct CommunityMatrices {
  Eigen::MatrixXd N;        // diag(mu)
  Eigen::MatrixXd A;        // [a_ij]
  Eigen::MatrixXd A_abs;    // [|a_ij|]
  Eigen::MatrixXd A_plus;   // [max(a_ij, 0)]
  Eigen::MatrixXd A_minus;  // [max(-a_ij, 0)]
  Eigen::MatrixXd C;        // diag(c_i d_i / e_i)
  Eigen::MatrixXd M0;       // N + A
  Eigen::MatrixXd M;        // N + A + C
  Eigen::MatrixXd M_hat0;   // N - |A|
  Eigen::MatrixXd M_hat;    // N - |A| - C
  Eigen::MatrixXd M0_minus; // N - A^-
};

CommunityMatrices build_matrices(const SystemSpec& spec);

enum class ClassMethod { PrincipalMinors, EtaVector, InverseNonneg, Eigenvalues };

const char* to_string(ClassMethod m) noexcept;

struct PrincipalMinor {
  std::uint32_t mask = 0;  // bit i set <=> row/column i in the minor
  double value = 0.0;

  std::vector<int> indices() const;
};

struct ClassCertificate {
  std::string matrix_class;  // "M", "nonsingular-M", "P"
  bool verdict = false;
  ClassMethod method = ClassMethod::PrincipalMinors;
  Eigen::MatrixXd matrix;
  std::vector<PrincipalMinor> minors;
  // Positive vector with (matrix + eta_shift * I) * eta > 0, when available.
  Eigen::VectorXd eta;
  double eta_shift = 0.0;
  std::vector<std::complex<double>> eigenvalues;
  double tolerance = 0.0;
  std::string note;
};

/// Scale-aware zero band for a principal minor of the given order:
/// 1e-12 * max|b_ij|^order.
double minor_tolerance(const Eigen::MatrixXd& B, int order);

bool is_z_matrix(const Eigen::MatrixXd& B);

/// All 2^n - 1 principal minors, entry k holding the minor of mask k + 1.
/// OpenMP-parallel over masks; n <= 20.
std::vector<double> principal_minors(const Eigen::MatrixXd& B);
/// Single-threaded reference for principal_minors.
std::vector<double> principal_minors_serial(const Eigen::MatrixXd& B);

/// Determinant of a small dense matrix by partial-pivot elimination.
double small_determinant(const Eigen::MatrixXd& B);

ClassCertificate is_m_matrix(const Eigen::MatrixXd& B);
ClassCertificate is_nonsingular_m_matrix(const Eigen::MatrixXd& B);
ClassCertificate is_p_matrix(const Eigen::MatrixXd& B);
/// Z-matrix B is a nonsingular M-matrix iff B^{-1} exists and is >= 0.
ClassCertificate nonsingular_m_by_inverse(const Eigen::MatrixXd& B);

/// Re-checks a certificate's claim against its stored matrix.
bool certificate_consistent(const ClassCertificate& cert);

}  // namespace lv
