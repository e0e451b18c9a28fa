#include <doctest.h>

#include <cmath>

#include "lvattract/error.hpp"
#include "lvattract/kernel.hpp"

namespace {

// Composite Simpson on [0, L] as an independent quadrature oracle.
template <class F>
double simpson(F f, double L, int m = 20000) {
  const double h = L / m;
  double s = f(0.0) + f(L);
  for (int k = 1; k < m; ++k) s += f(k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("kernel masses agree with quadrature") {
  const auto exp2 = lv::exponential(2.0);
  const auto erl = lv::erlang(1.5, 3);
  CHECK(lv::total_mass(exp2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(simpson([&](double s) { return lv::density(exp2, s); }, 40.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(simpson([&](double s) { return lv::density(erl, s); }, 60.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(lv::is_normalized(lv::point_mixture({{0.0, 0.25}, {1.0, 0.75}})));
  CHECK_FALSE(lv::is_normalized(lv::table(0.5, {1.0, 1.0})));
  CHECK(lv::is_normalized(lv::normalized_table(0.5, {1.0, 3.0, 2.0})));
}

TEST_CASE("tail masses match closed forms") {
  CHECK(lv::tail_mass(lv::exponential(2.0), 1.5) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
  const double r = 1.5, S = 2.0;
  const double want = std::exp(-r * S) * (1.0 + r * S + 0.5 * r * r * S * S);
  CHECK(lv::tail_mass(lv::erlang(r, 3), S) == doctest::Approx(want).epsilon(1e-12));
  CHECK(lv::tail_mass(lv::point_mixture({{0.5, 0.5}, {2.0, 0.5}}), 1.0) == doctest::Approx(0.5));
  CHECK(lv::tail_mass(lv::exponential(1.0), lv::truncation_horizon(lv::exponential(1.0), 1e-8)) <= 1e-8 * (1 + 1e-9));
}

TEST_CASE("Laplace transforms agree with quadrature") {
  const auto erl = lv::erlang(2.0, 2);
  const std::complex<double> z(0.3, 0.7);
  const double re = simpson([&](double s) { return lv::density(erl, s) * std::exp(-0.3 * s) * std::cos(0.7 * s); }, 50.0);
  const double im = -simpson([&](double s) { return lv::density(erl, s) * std::exp(-0.3 * s) * std::sin(0.7 * s); }, 50.0);
  const auto got = lv::laplace(erl, z);
  CHECK(got.real() == doctest::Approx(re).epsilon(1e-8));
  CHECK(got.imag() == doctest::Approx(im).epsilon(1e-8));
  const auto pm = lv::laplace(lv::point_mass(1.2), z);
  CHECK(std::abs(pm - std::exp(-z * 1.2)) < 1e-15);
}

TEST_CASE("control kernels need no atom at zero to be admissible only when normalized") {
  CHECK(lv::has_atom_at_zero(lv::point_mixture({{0.0, 0.5}, {1.0, 0.5}})));
  CHECK_FALSE(lv::has_atom_at_zero(lv::exponential(1.0)));
  CHECK(lv::max_atom_delay(lv::point_mixture({{0.0, 0.5}, {1.5, 0.5}})) == 1.5);
  CHECK(lv::is_continuous(lv::erlang(1.0, 2)));
  CHECK_FALSE(lv::is_continuous(lv::point_mass(1.0)));
}

TEST_CASE("invalid kernels are rejected") {
  CHECK_THROWS_AS(lv::exponential(-1.0), lv::Error);
  CHECK_THROWS_AS(lv::erlang(1.0, 0), lv::Error);
  CHECK_THROWS_AS(lv::point_mass(-0.5), lv::Error);
  CHECK_THROWS_AS(lv::table(0.0, {1.0}), lv::Error);
  CHECK_THROWS_AS(lv::table(1.0, {-1.0, 2.0}), lv::Error);
}
