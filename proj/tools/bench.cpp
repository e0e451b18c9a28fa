#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "lvattract/equilibria.hpp"
#include "lvattract/matrix_class.hpp"
#include "lvattract/parallel.hpp"

namespace {

double time_ms(const std::function<void()>& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

// Strictly diagonally dominant with positive diagonal: a P-matrix.
Eigen::MatrixXd random_p_matrix(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd M(n, n);
  for (int r = 0; r < n; ++r) {
    double off = 0.0;
    for (int c = 0; c < n; ++c) {
      M(r, c) = u(rng);
      if (c != r) off += std::abs(M(r, c));
    }
    M(r, r) = off + 0.5 + std::abs(u(rng));
  }
  return M;
}

}  // namespace

int main() {
  std::mt19937_64 rng(7);
  std::printf("threads: %d\n", lv::thread_budget());
  std::printf("%-22s %4s %12s %12s %8s %s\n", "kernel", "n", "serial_ms", "omp_ms", "speedup", "agree");
  for (int n : {8, 10, 12, 14, 16}) {
    const Eigen::MatrixXd M = random_p_matrix(n, rng);
    const int reps = n <= 12 ? 5 : 1;
    std::vector<double> a, b;
    const double ts = time_ms([&] { a = lv::principal_minors_serial(M); }, reps);
    const double tp = time_ms([&] { b = lv::principal_minors(M); }, reps);
    std::printf("%-22s %4d %12.3f %12.3f %8.2f %s\n", "principal_minors", n, ts, tp, ts / tp, a == b ? "yes" : "NO");
  }
  std::uniform_real_distribution<double> ub(-2.0, 2.0);
  for (int n : {8, 10, 12}) {
    const Eigen::MatrixXd M = random_p_matrix(n, rng);
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) q(i) = ub(rng);
    lv::LcpResult a, b;
    const double ts = time_ms([&] { a = lv::solve_lcp_enumeration_serial(M, q); }, 5);
    const double tp = time_ms([&] { b = lv::solve_lcp_enumeration(M, q); }, 5);
    const bool same = a.support_mask == b.support_mask && a.x == b.x;
    std::printf("%-22s %4d %12.3f %12.3f %8.2f %s\n", "lcp_enumeration", n, ts, tp, ts / tp, same ? "yes" : "NO");
  }
  return 0;
}
