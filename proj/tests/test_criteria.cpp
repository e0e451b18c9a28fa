#include <doctest.h>

#include <string>

#include "lvattract/criteria.hpp"
#include "lvattract/error.hpp"
#include "support.hpp"

namespace {

std::string tag(const lv::SystemSpec& s) { return lv::to_string(lv::analyze(s).verdict.criterion); }

lv::SystemSpec controlled(lv::SystemSpec s, double c) {
  s.controlled = true;
  s.c.setConstant(c);
  return s;
}

// Instantaneous self-limitation dominates every delayed and control term.
lv::SystemSpec self_limited() {
  lv::SystemSpec s = controlled(lvtest::planar(1.0, 1.0, 0.5, 0.3, -0.4, 0.5), 0.5);
  s.mu << 3.0, 3.0;
  return s;
}

}  // namespace

TEST_CASE("uncontrolled boundary attractor") {
  const auto s = lvtest::planar(1.0, 1.0 / 3.0, 0.5, 0.125, 0.5, 0.5);
  const auto a = lv::analyze(s);
  CHECK(std::string(lv::to_string(a.verdict.criterion)) == "Cor4.2-uncontrolled");
  REQUIRE(a.verdict.attractor);
  CHECK(a.verdict.attractor->x(0) == doctest::Approx(2.0 / 3.0));
  CHECK(a.verdict.attractor->x(1) == 0.0);
  REQUIRE(a.planar);
  CHECK(std::string(lv::to_string(a.planar->planar_case)) == "Prop5.1-iii");
}

TEST_CASE("control moves the attractor into the interior") {
  auto s = controlled(lvtest::planar(1.0, 1.0 / 3.0, 0.5, 0.125, 0.5, 0.5), 0.25);
  s.G.assign(2, lv::point_mixture({{0.0, 0.5}, {1.0, 0.5}}));
  const auto a = lv::analyze(s);
  CHECK(std::string(lv::to_string(a.verdict.criterion)) == "Thm3.2");
  CHECK(a.verdict.gas);
  REQUIRE(a.verdict.attractor);
  CHECK(a.verdict.attractor->x(0) == doctest::Approx(41.0 / 72.0).epsilon(1e-13));
  CHECK(a.verdict.attractor->x(1) == doctest::Approx(1.0 / 36.0).epsilon(1e-13));
}

TEST_CASE("predator-prey: uncontrolled coexistence, controlled predator extinction") {
  const auto s = lvtest::planar(1.0, -1.25, 0.5, 0.125, -2.0, 0.5);
  CHECK(tag(s) == "Cor4.2-uncontrolled");
  const auto a = lv::analyze(controlled(s, 0.2));
  CHECK(std::string(lv::to_string(a.verdict.criterion)) == "Thm4.4-predator-prey");
  REQUIRE(a.verdict.attractor);
  CHECK(a.verdict.attractor->x(0) == doctest::Approx(10.0 / 17.0).epsilon(1e-13));
  CHECK(a.verdict.attractor->x(1) == 0.0);
}

TEST_CASE("total extinction when every growth rate is non-positive") {
  const auto s = controlled(lvtest::planar(-1.0, -0.5, 0.5, 0.2, 0.2, 0.5), 0.1);
  const auto a = lv::analyze(s);
  CHECK(std::string(lv::to_string(a.verdict.criterion)) == "Thm4.1-total-extinction");
  REQUIRE(a.verdict.attractor);
  CHECK(a.verdict.attractor->x.isZero());
}

TEST_CASE("strongly self-limited system is globally attractive") {
  const auto s = self_limited();
  const auto v = lv::check_global_attractivity(s);
  CHECK(v.fired);
  CHECK(v.gas);
}

TEST_CASE("not a P-matrix falls back to dissipativity and reports it") {
  const auto s = lvtest::planar(1.0, 1.0, 0.0, 2.0, 2.0, 0.0);
  const auto a = lv::analyze(s);
  CHECK_FALSE(a.p_certificate.verdict);
  CHECK_FALSE(a.equilibrium);
  CHECK_FALSE(a.warnings.empty());
}

TEST_CASE("None carries every failed certificate") {
  const auto s = lvtest::planar(1.0, 1.0, 0.0, 2.0, 2.0, 0.0);
  const auto a = lv::analyze(s);
  if (a.verdict.criterion == lv::Criterion::None) {
    CHECK_FALSE(a.verdict.certificates.empty());
  }
}

TEST_CASE("verdict is invariant under relabelling species") {
  auto s = controlled(lvtest::planar(1.0, -1.25, 0.5, 0.125, -2.0, 0.5), 0.2);
  auto r = controlled(lvtest::planar(-1.25, 1.0, 0.5, -2.0, 0.125, 0.5), 0.2);
  const auto a = lv::analyze(s), b = lv::analyze(r);
  CHECK(a.verdict.criterion == b.verdict.criterion);
  REQUIRE(a.verdict.attractor);
  REQUIRE(b.verdict.attractor);
  CHECK(a.verdict.attractor->x(0) == doctest::Approx(b.verdict.attractor->x(1)));
  CHECK(a.verdict.attractor->x(1) == doctest::Approx(b.verdict.attractor->x(0)));
}

TEST_CASE("perturbations extend fired verdicts") {
  auto s = self_limited();
  lv::Perturbation p;
  p.step = 1.0;
  p.values = {0.1, 0.05};
  s.h = {p, p};
  const auto a = lv::analyze(s);
  CHECK(a.verdict.fired);
  CHECK(a.verdict.extends_to_perturbed);
}

TEST_CASE("cooperative-positive check is informational") {
  const auto s = controlled(lvtest::planar(1.0, 1.0, 0.5, -0.3, -0.4, 0.5), 0.5);
  const auto a = lv::analyze(s);
  CHECK(a.verdict.criterion != lv::Criterion::Thm3_4);
}

TEST_CASE("dimension guard") {
  CHECK_THROWS_AS(lv::analyze(lv::make_spec(13)), lv::Error);
}
