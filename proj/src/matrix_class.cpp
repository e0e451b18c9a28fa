#include "lvattract/matrix_class.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "lvattract/error.hpp"
#include "lvattract/parallel.hpp"

namespace lv {

namespace {

constexpr int kMaxMinorDim = 20;
constexpr int kExhaustiveMDim = 6;
constexpr int kExhaustivePDim = 12;
constexpr double kEtaShift = 1e-6;

double lu_determinant(double* a, int k) {
  double det = 1.0;
  for (int col = 0; col < k; ++col) {
    int piv = col;
    double best = std::abs(a[col * k + col]);
    for (int r = col + 1; r < k; ++r) {
      const double v = std::abs(a[r * k + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (int c = 0; c < k; ++c) std::swap(a[col * k + c], a[piv * k + c]);
      det = -det;
    }
    const double p = a[col * k + col];
    det *= p;
    for (int r = col + 1; r < k; ++r) {
      const double f = a[r * k + col] / p;
      if (f == 0.0) continue;
      for (int c = col + 1; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
    }
  }
  return det;
}

double minor_of_mask(const Eigen::MatrixXd& B, std::uint32_t mask) {
  std::array<int, kMaxMinorDim> idx{};
  int k = 0;
  for (int i = 0; i < B.rows(); ++i)
    if (mask & (1u << i)) idx[k++] = i;
  std::array<double, kMaxMinorDim * kMaxMinorDim> buf{};
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) buf[r * k + c] = B(idx[r], idx[c]);
  return lu_determinant(buf.data(), k);
}

void require_square(const Eigen::MatrixXd& B) {
  if (B.rows() != B.cols()) throw Error(Errc::DimensionMismatch, "matrix must be square");
}

std::vector<PrincipalMinor> pack(const std::vector<double>& values) {
  std::vector<PrincipalMinor> out(values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    out[k] = {static_cast<std::uint32_t>(k + 1), values[k]};
  return out;
}

std::vector<std::complex<double>> eigenvalues_of(const Eigen::MatrixXd& B) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(B, false);
  std::vector<std::complex<double>> ev(static_cast<std::size_t>(B.rows()));
  for (Eigen::Index i = 0; i < B.rows(); ++i) ev[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return ev;
}

double eigen_tolerance(const Eigen::MatrixXd& B) {
  const double s = B.cwiseAbs().maxCoeff();
  return 1e-10 * std::max(1.0, s);
}

// eta solving (B + shift I) eta = 1 with one residual refinement step;
// returns an empty vector when the result is not a valid certificate.
Eigen::VectorXd eta_certificate(const Eigen::MatrixXd& B, double shift) {
  const Eigen::Index n = B.rows();
  const Eigen::MatrixXd S = B + shift * Eigen::MatrixXd::Identity(n, n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd eta = lu.solve(one);
  eta += lu.solve(one - S * eta);
  if (!eta.allFinite() || (eta.array() <= 0.0).any()) return {};
  if (((S * eta).array() <= 0.0).any()) return {};
  return eta;
}

}  // namespace

const char* to_string(ClassMethod m) noexcept {
  switch (m) {
    case ClassMethod::PrincipalMinors: return "principal-minors";
    case ClassMethod::EtaVector: return "eta-vector";
    case ClassMethod::InverseNonneg: return "inverse-nonneg";
    case ClassMethod::Eigenvalues: return "eigenvalues";
  }
  return "unknown";
}

std::vector<int> PrincipalMinor::indices() const {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (mask & (1u << i)) out.push_back(i);
  return out;
}

CommunityMatrices build_matrices(const SystemSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.n);
  CommunityMatrices m;
  m.N = spec.mu.asDiagonal();
  m.A = spec.a;
  m.A_abs = spec.a.cwiseAbs();
  m.A_plus = spec.a.cwiseMax(0.0);
  m.A_minus = (-spec.a).cwiseMax(0.0);
  m.C = Eigen::MatrixXd::Zero(n, n);
  const Eigen::VectorXd c = spec.effective_c();
  for (Eigen::Index i = 0; i < n; ++i) m.C(i, i) = c(i) * spec.d(i) / spec.e(i);
  m.M0 = m.N + m.A;
  m.M = m.M0 + m.C;
  m.M_hat0 = m.N - m.A_abs;
  m.M_hat = m.M_hat0 - m.C;
  m.M0_minus = m.N - m.A_minus;
  return m;
}

double minor_tolerance(const Eigen::MatrixXd& B, int order) {
  const double s = B.size() == 0 ? 0.0 : B.cwiseAbs().maxCoeff();
  return 1e-12 * std::pow(s, order);
}

bool is_z_matrix(const Eigen::MatrixXd& B) {
  require_square(B);
  for (Eigen::Index i = 0; i < B.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      if (i != j && B(i, j) > 0.0) return false;
  return true;
}

double small_determinant(const Eigen::MatrixXd& B) {
  require_square(B);
  if (B.rows() == 0) return 1.0;
  if (B.rows() > kMaxMinorDim) return B.partialPivLu().determinant();
  return minor_of_mask(B, (1u << B.rows()) - 1u);
}

std::vector<double> principal_minors_serial(const Eigen::MatrixXd& B) {
  require_square(B);
  const int n = static_cast<int>(B.rows());
  if (n > kMaxMinorDim) throw Error(Errc::DimensionTooLarge, "principal minor enumeration limited to n <= 20");
  const std::uint32_t count = (1u << n) - 1u;
  std::vector<double> out(count);
  for (std::uint32_t mask = 1; mask <= count; ++mask) out[mask - 1] = minor_of_mask(B, mask);
  return out;
}

std::vector<double> principal_minors(const Eigen::MatrixXd& B) {
  require_square(B);
  const int n = static_cast<int>(B.rows());
  if (n > kMaxMinorDim) throw Error(Errc::DimensionTooLarge, "principal minor enumeration limited to n <= 20");
  const long count = (1L << n) - 1L;
  std::vector<double> out(static_cast<std::size_t>(count));
  // Small n: thread start-up dominates.
  const int threads = n < 8 ? 1 : thread_budget();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long k = 0; k < count; ++k)
    out[static_cast<std::size_t>(k)] = minor_of_mask(B, static_cast<std::uint32_t>(k + 1));
  return out;
}

ClassCertificate is_m_matrix(const Eigen::MatrixXd& B) {
  require_square(B);
  if (!is_z_matrix(B)) throw Error(Errc::NotZMatrix, "M-matrix test requires non-positive off-diagonals");
  ClassCertificate cert;
  cert.matrix_class = "M";
  cert.matrix = B;
  const int n = static_cast<int>(B.rows());
  if (n <= kExhaustiveMDim) {
    cert.method = ClassMethod::PrincipalMinors;
    cert.minors = pack(principal_minors(B));
    cert.verdict = true;
    for (const auto& m : cert.minors) {
      const int order = std::popcount(m.mask);
      if (m.value < -minor_tolerance(B, order)) {
        cert.verdict = false;
        break;
      }
    }
    cert.tolerance = minor_tolerance(B, n);
  } else {
    cert.method = ClassMethod::Eigenvalues;
    cert.eigenvalues = eigenvalues_of(B);
    cert.tolerance = eigen_tolerance(B);
    cert.verdict = std::all_of(cert.eigenvalues.begin(), cert.eigenvalues.end(),
                               [&](const auto& l) { return l.real() >= -cert.tolerance; });
  }
  if (cert.verdict) {
    // B + delta0 I is a nonsingular M-matrix for every delta0 > 0.
    cert.eta = eta_certificate(B, kEtaShift);
    cert.eta_shift = kEtaShift;
    if (cert.eta.size() == 0) cert.note = "eta certificate for B + 1e-6 I could not be verified";
  }
  return cert;
}

ClassCertificate is_nonsingular_m_matrix(const Eigen::MatrixXd& B) {
  require_square(B);
  if (!is_z_matrix(B))
    throw Error(Errc::NotZMatrix, "nonsingular M-matrix test requires non-positive off-diagonals");
  ClassCertificate cert;
  cert.matrix_class = "nonsingular-M";
  cert.matrix = B;
  const int n = static_cast<int>(B.rows());
  bool by_class = true;
  if (n <= kExhaustivePDim) {
    cert.method = ClassMethod::PrincipalMinors;
    cert.minors = pack(principal_minors(B));
    for (const auto& m : cert.minors) {
      if (m.value <= minor_tolerance(B, std::popcount(m.mask))) {
        by_class = false;
        break;
      }
    }
    cert.tolerance = minor_tolerance(B, n);
  } else {
    cert.method = ClassMethod::Eigenvalues;
    cert.eigenvalues = eigenvalues_of(B);
    cert.tolerance = eigen_tolerance(B);
    by_class = std::all_of(cert.eigenvalues.begin(), cert.eigenvalues.end(),
                           [&](const auto& l) { return l.real() > cert.tolerance; });
  }
  cert.verdict = by_class;
  if (by_class) {
    cert.eta = eta_certificate(B, 0.0);
    if (cert.eta.size() == 0) {
      cert.verdict = false;
      cert.note = "minors positive but B eta = 1 has no positive solution (ill-conditioned)";
    }
  }
  return cert;
}

ClassCertificate is_p_matrix(const Eigen::MatrixXd& B) {
  require_square(B);
  const int n = static_cast<int>(B.rows());
  if (n > kExhaustivePDim) throw Error(Errc::DimensionTooLarge, "P-matrix test is exhaustive and limited to n <= 12");
  ClassCertificate cert;
  cert.matrix_class = "P";
  cert.matrix = B;
  cert.method = ClassMethod::PrincipalMinors;
  cert.minors = pack(principal_minors(B));
  cert.verdict = std::all_of(cert.minors.begin(), cert.minors.end(), [&](const PrincipalMinor& m) {
    return m.value > minor_tolerance(B, std::popcount(m.mask));
  });
  cert.tolerance = minor_tolerance(B, n);
  return cert;
}

ClassCertificate nonsingular_m_by_inverse(const Eigen::MatrixXd& B) {
  require_square(B);
  if (!is_z_matrix(B)) throw Error(Errc::NotZMatrix, "inverse test requires non-positive off-diagonals");
  ClassCertificate cert;
  cert.matrix_class = "nonsingular-M";
  cert.matrix = B;
  cert.method = ClassMethod::InverseNonneg;
  const Eigen::Index n = B.rows();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
  if (!lu.isInvertible()) return cert;
  const Eigen::MatrixXd inv = lu.inverse();
  const double tol = 1e-12 * std::max(1.0, inv.cwiseAbs().maxCoeff());
  cert.tolerance = tol;
  cert.verdict = (inv.array() >= -tol).all();
  if (cert.verdict) cert.eta = inv * Eigen::VectorXd::Ones(n);
  return cert;
}

bool certificate_consistent(const ClassCertificate& cert) {
  const Eigen::MatrixXd& B = cert.matrix;
  if (cert.verdict && cert.eta.size() > 0) {
    const Eigen::MatrixXd S = B + cert.eta_shift * Eigen::MatrixXd::Identity(B.rows(), B.cols());
    if ((cert.eta.array() <= 0.0).any() || ((S * cert.eta).array() <= 0.0).any()) return false;
  }
  const std::vector<double> minors = principal_minors_serial(B);
  if (cert.matrix_class == "P") {
    for (std::size_t k = 0; k < minors.size(); ++k)
      if ((minors[k] > minor_tolerance(B, std::popcount(k + 1))) != true) return !cert.verdict;
    return cert.verdict;
  }
  if (!is_z_matrix(B)) return !cert.verdict;
  const bool singular_ok = cert.matrix_class == "M";
  bool ok = true;
  for (std::size_t k = 0; k < minors.size(); ++k) {
    const double tol = minor_tolerance(B, std::popcount(k + 1));
    if (singular_ok ? minors[k] < -tol : minors[k] <= tol) {
      ok = false;
      break;
    }
  }
  return ok == cert.verdict;
}

}  // namespace lv
