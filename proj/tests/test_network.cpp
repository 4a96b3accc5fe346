#include <doctest.h>

#include <cmath>
#include <random>

#include "opfrelax/case_io.hpp"
#include "opfrelax/network.hpp"

using namespace opfrelax;

namespace {

bool mentions(const std::vector<Violation>& v, const std::string& text) {
  for (const auto& x : v)
    if (x.message.find(text) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("three bus case validates") {
  CHECK(validate(builtin_case("case3_base")).empty());
  CHECK(validate(builtin_case("case3_sad18")).empty());
}

TEST_CASE("invariant breaches are reported, not thrown") {
  Network net = builtin_case("case3_base");
  net.branches[0].r = net.branches[0].x = 0;
  auto v = validate(net);
  CHECK(mentions(v, "zero impedance"));
  CHECK_FALSE(is_valid(net));
  CHECK_THROWS_AS(require_valid(net), std::invalid_argument);

  net = builtin_case("case3_base");
  net.branches[1].angle_max = 100 * kPi / 180;
  CHECK(mentions(validate(net), "PAD bound outside (0, pi/2]"));

  net = builtin_case("case3_base");
  net.branches[1].angle_max = 0;
  CHECK(mentions(validate(net), "PAD bound"));

  net = builtin_case("case3_base");
  net.buses[2].v_min = 0;
  CHECK(mentions(validate(net), "voltage bounds"));

  net = builtin_case("case3_base");
  net.generators[0].c2 = -1;
  CHECK(mentions(validate(net), "non-convex cost"));

  net = builtin_case("case3_base");
  net.generators.clear();
  CHECK(mentions(validate(net), "no generators"));

  net = builtin_case("case3_base");
  net.buses[1].id = net.buses[0].id;
  CHECK(mentions(validate(net), "duplicate bus id"));

  net = builtin_case("case3_base");
  net.branches[0].to = 77;
  CHECK(mentions(validate(net), "endpoint"));

  net = builtin_case("case3_base");
  net.branches[0].tap_mag = 0;
  CHECK(mentions(validate(net), "tap ratio"));
}

TEST_CASE("disconnected network is a warning only") {
  Network net = builtin_case("case3_base");
  net.buses.push_back(Bus{.id = 9});
  auto v = validate(net);
  REQUIRE(v.size() == 1);
  CHECK(v[0].severity == Severity::Warning);
  CHECK(is_valid(net));
}

TEST_CASE("branch admittance") {
  Branch br;
  br.r = 0.042;
  br.x = 0.90;
  const Complex y = branch_admittance(br);
  const double den = 0.042 * 0.042 + 0.90 * 0.90;
  CHECK(y.real() == doctest::Approx(0.042 / den).epsilon(1e-14));
  CHECK(y.imag() == doctest::Approx(-0.90 / den).epsilon(1e-14));
  CHECK(y.real() == doctest::Approx(0.05174).epsilon(1e-4));
  CHECK(y.imag() == doctest::Approx(-1.10867).epsilon(1e-4));

  br.r = 1;
  br.x = 0;
  CHECK(branch_admittance(br) == Complex(1, 0));
  br.r = 0;
  br.x = 1;
  CHECK(branch_admittance(br) == Complex(0, -1));
  br.x = 0;
  CHECK_THROWS_AS(branch_admittance(br), std::domain_error);
}

TEST_CASE("admittance times impedance is one") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 1000; ++k) {
    Branch br;
    br.r = u(rng);
    br.x = u(rng);
    const Complex one = branch_admittance(br) * branch_impedance(br);
    CHECK(std::abs(one - Complex(1, 0)) <= 1e-12);
  }
}

TEST_CASE("total load") {
  const Complex s = total_load(builtin_case("case3_base"));
  CHECK(s.real() == doctest::Approx(3.15).epsilon(1e-12));
  CHECK(s.imag() == doctest::Approx(1.30).epsilon(1e-12));
  Network empty;
  CHECK(total_load(empty) == Complex(0, 0));
  Network one;
  one.buses.push_back(Bus{.id = 1, .p_load = 1, .q_load = 0.5});
  CHECK(total_load(one) == Complex(1, 0.5));
}

TEST_CASE("per-unit round trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mw(-5000, 5000), base(1, 1000);
  for (int k = 0; k < 1000; ++k) {
    const double p = mw(rng), b = base(rng);
    const double back = to_megawatts(to_per_unit(p, b), b);
    CHECK(std::abs(back - p) <= 1e-12 * std::abs(p));
  }
}

TEST_CASE("generation cost is evaluated in MW") {
  Generator g;
  g.c2 = 0.11;
  g.c1 = 5;
  g.c0 = 2;
  CHECK(generation_cost(g, 1.5, 100) == doctest::Approx(0.11 * 150 * 150 + 5 * 150 + 2));
}

TEST_CASE("bus positions reject duplicates") {
  Network net = builtin_case("case3_base");
  auto pos = bus_positions(net);
  CHECK(pos.at(3) == 2);
  net.buses[2].id = 1;
  CHECK_THROWS(bus_positions(net));
}
