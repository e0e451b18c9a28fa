#include <doctest.h>

#include <string>

#include "lvattract/error.hpp"
#include "lvattract/spec_io.hpp"
#include "support.hpp"

namespace {

const char* kPlanar = R"(
[system]
n = 2
controlled = true

[species.1]
b = 1.0
mu = 1.0

[species.2]
b = -1.25
mu = 1.0

[interaction]
a = [[0.5, 0.125], [-2.0, 0.5]]

[controls.1]
c = 0.2
d = 1.0
e = 1.0
kernel = { type = "point", delays = [0.0, 1.0], weights = [0.5, 0.5] }

[controls.2]
c = 0.2
d = 1.0
e = 1.0
kernel = { type = "exponential", rate = 2.0 }

[kernels.default]
type = "point"
delays = [0.5]
)";

}  // namespace

TEST_CASE("parses a planar description") {
  const auto s = lv::parse_spec(kPlanar);
  CHECK(s.n == 2);
  CHECK(s.controlled);
  CHECK(s.a(1, 0) == -2.0);
  CHECK(s.c(1) == 0.2);
  CHECK(lv::has_atom_at_zero(s.G[0]));
  CHECK(lv::is_continuous(s.G[1]));
  CHECK(lv::max_atom_delay(s.kernel(0, 1)) == 0.5);
}

TEST_CASE("TOML export round-trips with identical hash") {
  const auto s = lv::parse_spec(kPlanar);
  const auto r = lv::parse_spec(lv::to_toml(s));
  CHECK(lv::spec_hash(s) == lv::spec_hash(r));
  CHECK(lv::canonical_form(s) == lv::canonical_form(r));
  CHECK(lv::spec_hash(s).size() == 16);
}

TEST_CASE("hash is stable under key reordering and sensitive to values") {
  std::string reordered = kPlanar;
  const std::string a = "b = 1.0\nmu = 1.0", b = "mu = 1.0\nb = 1.0";
  reordered.replace(reordered.find(a), a.size(), b);
  CHECK(lv::spec_hash(lv::parse_spec(kPlanar)) == lv::spec_hash(lv::parse_spec(reordered)));
  std::string changed = kPlanar;
  changed.replace(changed.find("c = 0.2"), 7, "c = 0.3");
  CHECK(lv::spec_hash(lv::parse_spec(kPlanar)) != lv::spec_hash(lv::parse_spec(changed)));
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(lv::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(lv::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("malformed input is a parse error with a location") {
  try {
    lv::parse_spec("[system]\nn = = 2\n", "bad.toml");
    FAIL("expected a parse error");
  } catch (const lv::Error& e) {
    CHECK(e.code() == lv::Errc::Parse);
    CHECK(std::string(e.what()).find("bad.toml:2") != std::string::npos);
  }
}

TEST_CASE("unknown keys and invalid values are rejected") {
  std::string extra = kPlanar;
  extra += "\n[unexpected]\nx = 1\n";
  CHECK_THROWS_AS(lv::parse_spec(extra), lv::Error);
  std::string negative = kPlanar;
  negative.replace(negative.find("mu = 1.0"), 8, "mu = -1.0");
  try {
    lv::parse_spec(negative);
    FAIL("expected a validation error");
  } catch (const lv::Error& e) {
    CHECK(e.code() == lv::Errc::InvalidArgument);
  }
}

TEST_CASE("fixtures load") {
  for (const char* f : {"example_5_1_uncontrolled.toml", "example_5_1_controlled_alpha_0.25.toml",
                        "example_5_2_uncontrolled.toml", "example_5_2_controlled_alpha_0.2.toml",
                        "example_4_1_scalar.toml", "hopf_b1_c2_tau1.2.toml", "hopf_b1_c2_tau1.9.toml"})
    CHECK_NOTHROW(lv::load_spec(lvtest::fixture(f)));
}
