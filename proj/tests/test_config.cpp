#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "wick/report/config.hpp"
#include "wick/types.hpp"

using namespace wick;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    CHECK(e.code() == "config-schema");
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("angles and complex numbers") {
  CHECK(parse_angle("pi/4") == doctest::Approx(kPi / 4));
  CHECK(parse_angle("3*pi/4") == doctest::Approx(3 * kPi / 4));
  CHECK(parse_angle("2pi") == doctest::Approx(2 * kPi));
  CHECK(parse_angle("0.7") == 0.7);
  CHECK(parse_complex("0.05") == Complex(0.05, 0));
  CHECK(parse_complex("0.05+0.02i") == Complex(0.05, 0.02));
  CHECK(parse_complex("-0.1i") == Complex(0, -0.1));
  CHECK_THROWS(parse_angle("pie"));
  CHECK_THROWS(parse_complex("1+"));
}

TEST_CASE("a full file round trip") {
  auto c = parse(R"(# comment
preset = curved
period = 2pi
potential = 0.3
shift = 0.2
grid = 16x20
theta = pi/6, pi/4
zeta = 0.05, 0.05+0.02i
order = 2
lapse.modes = 0 2 0.1 0
tol.law = 1e-9
)");
  CHECK(c.grid == std::vector<int>{16, 20});
  REQUIRE(c.thetas.size() == 2);
  CHECK(c.thetas[1] == doctest::Approx(kPi / 4));
  CHECK(c.zetas.back() == Complex(0.05, 0.02));
  CHECK(c.order == 2);
  CHECK(c.tol.law == 1e-9);
  REQUIRE(c.modes.count("lapse"));
  CHECK(c.modes["lapse"][0].k == std::vector<int>{0, 2});
  CHECK(c.echo.size() == 10);
  CHECK_NOTHROW(validate(c));
  const auto adm = build_geometry(c);
  CHECK(adm.periods[0] == doctest::Approx(2 * kPi));
}

TEST_CASE("schema errors carry the line") {
  CHECK(error_line("grid = 8x8\nbogus = 1\n") == 2);
  CHECK(error_line("\n\ngrid = -4x8\n") == 3);
  CHECK(error_line("order = 12\n") == 1);
  CHECK(error_line("theta = pi/4\nzeta = abc\n") == 2);
  CHECK(error_line("preset = sphere\n") == 1);
  CHECK(error_line("grid 8x8\n") == 1);
  CHECK(error_line("# ok\nprofile = loose\n") == 2);
}

TEST_CASE("tolerance profiles") {
  const auto d = tolerance_profile("default");
  const auto s = tolerance_profile("strict");
  CHECK(s.law < d.law);
  CHECK(s.fit_a0 < d.fit_a0);
  CHECK_THROWS_AS(tolerance_profile("loose"), ConfigError);
  RunConfig c;
  apply_setting(c, "profile", "strict");
  CHECK(c.tol.wedge == s.wedge);
}
