#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lvattract/equilibria.hpp"
#include "lvattract/error.hpp"
#include "lvattract/matrix_class.hpp"
#include "lvattract/spectral.hpp"
#include "support.hpp"

TEST_CASE("characteristic determinant at zero factors through M") {
  lv::SystemSpec s = lvtest::planar(1.0, 1.0, 2.0, 0.3, -0.4, 2.0, 0.5, true, 0.5);
  s.e << 2.0, 0.5;
  const auto eq = lv::saturated_equilibrium(s);
  const auto pc = lv::make_planar_characteristic(s, eq.x.head<2>(), false);
  const auto M = lv::build_matrices(s).M;
  const double want = eq.x(0) * eq.x(1) * s.e(0) * s.e(1) * M.determinant();
  CHECK(std::abs(lv::char_det(pc, 0.0) - want) < 1e-12);
}

TEST_CASE("delay-free zeros are the Jacobian eigenvalues") {
  lv::SystemSpec s = lvtest::planar(1.0, 1.0, 2.0, 0.3, -0.4, 2.0, 0.0, true, 0.5);
  const auto eq = lv::saturated_equilibrium(s);
  const auto pc = lv::make_planar_characteristic(s, eq.x.head<2>(), false);
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) J(2 * i, 2 * j) = -eq.x(i) * (s.mu(i) * (i == j) + s.a(i, j));
    J(2 * i, 2 * i + 1) = -eq.x(i) * s.c(i);
    J(2 * i + 1, 2 * i) = s.d(i);
    J(2 * i + 1, 2 * i + 1) = -s.e(i);
  }
  Eigen::EigenSolver<Eigen::Matrix4d> es(J);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(lv::char_det(pc, es.eigenvalues()(k))) < 1e-8);
}

TEST_CASE("boundary factorization") {
  lv::SystemSpec s = lvtest::planar(1.0, 1.0 / 3.0, 0.5, 0.125, 0.5, 0.5, 0.5, true, 0.25);
  s.G.assign(2, lv::exponential(2.0));
  const double X1 = 1.0 / 1.75;
  const auto pc = lv::make_planar_characteristic(s, Eigen::Vector2d(X1, 0.0), false);
  REQUIRE(pc.equilibrium == "E1");
  const lv::cplx lam(0.2, 0.9);
  const auto f = lv::e1_factors(pc, lam);
  CHECK(std::abs(lv::char_det(pc, lam) - f.decay * f.invasion * f.h) < 1e-12);
  CHECK(std::abs(f.invasion - (lam - (1.0 / 3.0 - 0.5 * X1))) < 1e-15);
  const lv::cplx at_decay = lv::e1_factors(pc, -s.e(0)).h;
  CHECK(std::abs(at_decay - X1 * s.d(0) * 0.25 * 2.0) < 1e-14);
}

TEST_CASE("Hopf thresholds") {
  const auto t = lv::hopf_thresholds(1.0, 2.0, 3);
  REQUIRE(t.size() == 4);
  CHECK(t[0].tau == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
  CHECK(t[0].omega == doctest::Approx(1.0));
  for (std::size_t k = 1; k < t.size(); ++k) CHECK(t[k].tau - t[k - 1].tau == doctest::Approx(2 * std::numbers::pi));
  for (const auto& h : t) CHECK(h.residual < 1e-10);
  CHECK_THROWS_AS(lv::hopf_thresholds(1.0, 1.0, 2), lv::Error);
  CHECK_THROWS_AS(lv::hopf_thresholds(1.0, 2.0, -1), lv::Error);
}

TEST_CASE("Hopf fixture realizes the reduced quasi-polynomial") {
  const double tau = 1.3;
  const auto s = lv::build_hopf_fixture(1.0, 2.0, tau);
  const auto eq = lv::saturated_equilibrium(s);
  CHECK(eq.x(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
  CHECK(eq.x(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
  const auto pc = lv::make_planar_characteristic(s, Eigen::Vector2d(std::sqrt(2.0), std::sqrt(2.0)), true);
  const lv::cplx lam(0.1, 0.8);
  const lv::cplx reduced = lv::char_det(pc, lam) / ((lam + s.e(0)) * (lam + s.e(1)));
  CHECK(std::abs(reduced - lv::hopf_h(1.0, 2.0, tau, lam)) < 1e-12);
  CHECK_THROWS_AS(lv::build_hopf_fixture(1.0, 0.5, tau), lv::Error);
}
