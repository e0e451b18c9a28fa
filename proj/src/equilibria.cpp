#include "lvattract/equilibria.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "lvattract/error.hpp"
#include "lvattract/parallel.hpp"

namespace lv {

namespace {

constexpr int kMaxDim = 12;

struct SmallLu {
  int k = 0;
  std::array<double, kMaxDim * kMaxDim> lu{};
  std::array<int, kMaxDim> perm{};

  bool factor(const std::array<double, kMaxDim * kMaxDim>& a, int dim) {
    k = dim;
    lu = a;
    for (int i = 0; i < k; ++i) perm[i] = i;
    double scale = 0.0;
    for (int i = 0; i < k * k; ++i) scale = std::max(scale, std::abs(a[i]));
    const double tiny = 1e-14 * std::max(scale, 1e-300);
    for (int col = 0; col < k; ++col) {
      int piv = col;
      for (int r = col + 1; r < k; ++r)
        if (std::abs(lu[r * k + col]) > std::abs(lu[piv * k + col])) piv = r;
      if (std::abs(lu[piv * k + col]) <= tiny) return false;
      if (piv != col) {
        for (int c = 0; c < k; ++c) std::swap(lu[col * k + c], lu[piv * k + c]);
        std::swap(perm[col], perm[piv]);
      }
      for (int r = col + 1; r < k; ++r) {
        const double f = lu[r * k + col] / lu[col * k + col];
        lu[r * k + col] = f;
        for (int c = col + 1; c < k; ++c) lu[r * k + c] -= f * lu[col * k + c];
      }
    }
    return true;
  }

  void solve(const double* rhs, double* x) const {
    std::array<double, kMaxDim> y{};
    for (int i = 0; i < k; ++i) {
      double s = rhs[perm[i]];
      for (int j = 0; j < i; ++j) s -= lu[i * k + j] * y[j];
      y[i] = s;
    }
    for (int i = k - 1; i >= 0; --i) {
      double s = y[i];
      for (int j = i + 1; j < k; ++j) s -= lu[i * k + j] * x[j];
      x[i] = s / lu[i * k + i];
    }
  }
};

struct Candidate {
  bool accepted = false;
  bool degenerate = false;
  std::array<double, kMaxDim> x{};
};

// Evaluates one support; x holds the full-length candidate on acceptance.
Candidate try_support(const Eigen::MatrixXd& M, const Eigen::VectorXd& b, std::uint32_t mask,
                      double tol) {
  Candidate cand;
  const int n = static_cast<int>(M.rows());
  std::array<int, kMaxDim> idx{};
  int k = 0;
  for (int i = 0; i < n; ++i)
    if (mask & (1u << i)) idx[k++] = i;

  std::array<double, kMaxDim> xJ{};
  if (k > 0) {
    std::array<double, kMaxDim * kMaxDim> a{};
    std::array<double, kMaxDim> rhs{};
    for (int r = 0; r < k; ++r) {
      rhs[r] = b(idx[r]);
      for (int c = 0; c < k; ++c) a[r * k + c] = M(idx[r], idx[c]);
    }
    SmallLu lu;
    if (!lu.factor(a, k)) return cand;  // singular block: not a P-matrix support
    lu.solve(rhs.data(), xJ.data());
    std::array<double, kMaxDim> res{};
    std::array<double, kMaxDim> corr{};
    for (int r = 0; r < k; ++r) {
      double s = rhs[r];
      for (int c = 0; c < k; ++c) s -= a[r * k + c] * xJ[c];
      res[r] = s;
    }
    lu.solve(res.data(), corr.data());
    for (int r = 0; r < k; ++r) xJ[r] += corr[r];
    for (int r = 0; r < k; ++r)
      if (!(xJ[r] > tol)) return cand;  // components in [0, tol] collapse to a smaller support
  }
  for (int r = 0; r < k; ++r) cand.x[idx[r]] = xJ[r];
  for (int i = 0; i < n; ++i) {
    if (mask & (1u << i)) continue;
    double s = -b(i);
    for (int j = 0; j < n; ++j) s += M(i, j) * cand.x[j];
    if (s < -tol) return cand;
    if (s <= tol) cand.degenerate = true;
  }
  cand.accepted = true;
  return cand;
}

void check_dims(const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
  if (M.rows() != M.cols() || M.rows() != b.size())
    throw Error(Errc::DimensionMismatch, "LCP needs square M and matching b");
  if (M.rows() > kMaxDim) throw Error(Errc::DimensionTooLarge, "support enumeration limited to n <= 12");
}

LcpResult reduce(const std::vector<Candidate>& cands, int n) {
  LcpResult out;
  out.x = Eigen::VectorXd::Zero(n);
  int best_size = n + 1;
  for (std::uint32_t mask = 0; mask < cands.size(); ++mask) {
    const auto& c = cands[mask];
    if (!c.accepted) continue;
    ++out.accepted;
    const int size = std::popcount(mask);
    if (size < best_size) {
      best_size = size;
      out.support_mask = mask;
      out.degenerate = c.degenerate;
      for (int i = 0; i < n; ++i) out.x(i) = c.x[i];
    }
  }
  return out;
}

}  // namespace

double lcp_tolerance(const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
  double scale = 1.0;
  if (b.size() > 0) scale = std::max(scale, b.cwiseAbs().maxCoeff());
  if (M.size() > 0) scale = std::max(scale, M.cwiseAbs().rowwise().sum().maxCoeff());
  return 1e-12 * scale;
}

LcpResult solve_lcp_enumeration_serial(const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
  check_dims(M, b);
  const int n = static_cast<int>(M.rows());
  const double tol = lcp_tolerance(M, b);
  std::vector<Candidate> cands(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < cands.size(); ++mask) cands[mask] = try_support(M, b, mask, tol);
  return reduce(cands, n);
}

LcpResult solve_lcp_enumeration(const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
  check_dims(M, b);
  const int n = static_cast<int>(M.rows());
  const double tol = lcp_tolerance(M, b);
  const long count = 1L << n;
  std::vector<Candidate> cands(static_cast<std::size_t>(count));
  const int threads = n < 7 ? 1 : thread_budget();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long mask = 0; mask < count; ++mask)
    cands[static_cast<std::size_t>(mask)] = try_support(M, b, static_cast<std::uint32_t>(mask), tol);
  return reduce(cands, n);
}

SaturatedEquilibrium describe_point(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                                    const Eigen::VectorXd& d, const Eigen::VectorXd& e,
                                    const Eigen::VectorXd& x) {
  SaturatedEquilibrium eq;
  eq.x = x;
  eq.u = (d.array() * x.array() / e.array()).matrix();
  eq.residual = M * x - b;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) > 0.0) eq.support.push_back(static_cast<int>(i));
  eq.gap = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) eq.gap = std::max(eq.gap, x(i) * eq.residual(i));
  return eq;
}

SaturatedEquilibrium saturated_equilibrium(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                                           const Eigen::VectorXd& d, const Eigen::VectorXd& e) {
  check_dims(M, b);
  if (d.size() != b.size() || e.size() != b.size())
    throw Error(Errc::DimensionMismatch, "d and e must match the species count");
  if (!is_p_matrix(M).verdict)
    throw Error(Errc::NotPMatrix, "saturated equilibrium requires a P-matrix community matrix");
  const LcpResult lcp = solve_lcp_enumeration(M, b);
  if (lcp.accepted == 0)
    throw Error(Errc::NoSupportFound, "no support passed the complementarity test (tolerance failure)");
  SaturatedEquilibrium eq = describe_point(M, b, d, e, lcp.x);
  eq.degenerate = lcp.degenerate;
  eq.accepted_supports = lcp.accepted;
  return eq;
}

SaturatedEquilibrium saturated_equilibrium(const SystemSpec& spec) {
  return saturated_equilibrium(build_matrices(spec).M, spec.b, spec.d, spec.e);
}

DissipativityResult dissipativity_bound(const SystemSpec& spec) {
  const CommunityMatrices m = build_matrices(spec);
  DissipativityResult r;
  r.certificate = is_nonsingular_m_matrix(m.M0_minus);
  r.verdict = r.certificate.verdict;
  if (r.verdict) r.bound = saturated_equilibrium(m.M0_minus, spec.b, spec.d, spec.e);
  return r;
}

std::vector<const PlanarEquilibrium*> PlanarEquilibria::all() const {
  std::vector<const PlanarEquilibrium*> out{&E0};
  for (const auto* p : {&E1, &E2, &Estar})
    if (*p) out.push_back(&**p);
  return out;
}

PlanarEquilibria planar_equilibria(const SystemSpec& spec) {
  if (spec.n != 2) throw Error(Errc::DimensionMismatch, "planar equilibria need n = 2");
  const CommunityMatrices m = build_matrices(spec);
  const Eigen::Matrix2d M = m.M;
  const Eigen::Vector2d b = spec.b;
  const double tol = lcp_tolerance(m.M, spec.b);

  auto finish = [&](std::string label, Eigen::Vector2d x) {
    PlanarEquilibrium eq;
    eq.label = std::move(label);
    eq.x = x;
    for (int i = 0; i < 2; ++i) eq.u(i) = spec.d(i) * x(i) / spec.e(i);
    eq.residual = M * x - b;
    eq.saturated = true;
    for (int i = 0; i < 2; ++i)
      if (x(i) == 0.0 && eq.residual(i) < -tol) eq.saturated = false;
    eq.unstable_boundary = !eq.saturated;
    return eq;
  };

  PlanarEquilibria out;
  out.E0 = finish("E0", Eigen::Vector2d::Zero());
  // lambda_i + a_ii is the diagonal of M.
  if (b(0) > 0.0 && M(0, 0) > 0.0) out.E1 = finish("E1", Eigen::Vector2d(b(0) / M(0, 0), 0.0));
  if (b(1) > 0.0 && M(1, 1) > 0.0) out.E2 = finish("E2", Eigen::Vector2d(0.0, b(1) / M(1, 1)));
  const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  if (det != 0.0) {
    const double x1 = (b(0) * M(1, 1) - M(0, 1) * b(1)) / det;
    const double x2 = (b(1) * M(0, 0) - M(1, 0) * b(0)) / det;
    // Existence inequalities are strict; ties belong to the boundary.
    if (x1 > tol && x2 > tol) out.Estar = finish("E*", Eigen::Vector2d(x1, x2));
  }
  return out;
}

}  // namespace lv
