#include <doctest.h>

#include <cmath>
#include <random>

#include "opfrelax/case_io.hpp"
#include "opfrelax/report.hpp"

using namespace opfrelax;

namespace {

const char* kTwoBus = R"(function mpc = two
mpc.version = '2';
mpc.baseMVA = 100;
mpc.bus = [
  1 3 0  0  0 0 1 1 0 230 1 1.05 0.95;
  2 1 50 20 0 0 1 1 0 230 1 1.05 0.95;
];
mpc.gen = [
  1 0 0 100 -100 1 100 1 200 0;
];
mpc.branch = [
  1 2 0.01 0.1 0.02 100 0 0 0 0 1 -20 30;
];
mpc.gencost = [
  2 0 0 3 0.02 10 5;
];
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto k = s.find(from);
  REQUIRE(k != std::string::npos);
  return s.replace(k, from.size(), to);
}

}  // namespace

TEST_CASE("embedded three bus data") {
  const Network net = builtin_case("case3_base");
  REQUIRE(net.buses.size() == 3);
  REQUIRE(net.branches.size() == 3);
  REQUIRE(net.generators.size() == 3);
  CHECK(net.base_mva == 100);
  CHECK(net.branches[1].from == 2);
  CHECK(net.branches[1].to == 3);
  CHECK(net.branches[1].s_max == doctest::Approx(0.5));
  CHECK(std::isinf(net.branches[0].s_max));
  CHECK(net.generators[1].bus == 2);
  CHECK(net.generators[1].c2 == 0.085);
  CHECK(net.generators[1].c1 == 1.2);
  CHECK(net.generators[1].c0 == 0);
  for (const Branch& br : net.branches) CHECK(br.angle_max == doctest::Approx(30 * kPi / 180).epsilon(1e-14));
  for (const Branch& br : builtin_case("case3_sad18").branches)
    CHECK(br.angle_max == doctest::Approx(18 * kPi / 180).epsilon(1e-14));
  CHECK_THROWS_AS(builtin_case("case99"), std::invalid_argument);
  CHECK(builtin_case_names().size() == 2);
}

TEST_CASE("per-unit conversion and angle symmetrization") {
  const Network net = parse_case(kTwoBus, "two");
  CHECK(net.buses[1].p_load == doctest::Approx(0.5));
  CHECK(net.buses[1].q_load == doctest::Approx(0.2));
  CHECK(net.generators[0].p_max == doctest::Approx(2.0));
  CHECK(net.generators[0].q_min == doctest::Approx(-1.0));
  CHECK(net.branches[0].s_max == doctest::Approx(1.0));
  // Tightest side of [-20, 30] degrees.
  CHECK(net.branches[0].angle_max == doctest::Approx(20 * kPi / 180));
  // ratio 0 means no transformer.
  CHECK(net.branches[0].tap_mag == 1);
  CHECK(net.reference_bus == 1);
}

TEST_CASE("out-of-service equipment is dropped") {
  std::string text = replace(kTwoBus, "1 0 0 100 -100 1 100 1 200 0;", "1 0 0 100 -100 1 100 1 200 0;\n  2 0 0 9 -9 1 100 0 50 0;");
  text = replace(text, "2 0 0 3 0.02 10 5;", "2 0 0 3 0.02 10 5;\n  2 0 0 3 1 1 1;");
  text = replace(text, "1 2 0.01 0.1 0.02 100 0 0 0 0 1 -20 30;",
                 "1 2 0.01 0.1 0.02 100 0 0 0 0 1 -20 30;\n  1 2 0.5 0.5 0 0 0 0 0 0 0 -20 30;");
  const Network net = parse_case(text);
  CHECK(net.generators.size() == 1);
  CHECK(net.branches.size() == 1);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_WITH_AS(parse_case(replace(kTwoBus, R"(  1 3 0  0  0 0 1 1 0 230 1 1.05 0.95;
  2 1 50 20 0 0 1 1 0 230 1 1.05 0.95;
)", "")),
                       doctest::Contains("empty bus section"), ParseError);
  try {
    parse_case(replace(kTwoBus, "0.01 0.1", "0.01 zz"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 12);
    CHECK(std::string(e.what()).find("line 12") != std::string::npos);
  }
  CHECK_THROWS_WITH_AS(parse_case(std::string(kTwoBus) + "mpc.dcline = [\n 1 2;\n];\n"),
                       doctest::Contains("unsupported section"), ParseError);
  CHECK_THROWS_WITH_AS(parse_case(replace(kTwoBus, "2 0 0 3 0.02 10 5;", "1 0 0 2 0 0 100 10;")),
                       doctest::Contains("piecewise-linear"), ParseError);
  CHECK_THROWS_AS(parse_case(replace(kTwoBus, "mpc.baseMVA = 100;", "")), ParseError);
  CHECK_THROWS_AS(load_case("/definitely/not/here.m"), std::runtime_error);
}

TEST_CASE("physics-free sections are skipped and listed") {
  const std::string text = std::string(kTwoBus) + "mpc.bus_name = {\n 'a';\n 'b';\n};\n";
  const CaseFile cf = read_case_sections(text);
  REQUIRE(cf.ignored_sections.size() == 1);
  CHECK(cf.ignored_sections[0] == "bus_name");
}

TEST_CASE("write then parse reproduces the network") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Network net = builtin_case("case3_base");
  for (Branch& br : net.branches) {
    br.tap_mag = 0.9 + 0.2 * u(rng);
    br.tap_shift = (u(rng) - 0.5) * 0.17;
    br.s_max = 0.3 + u(rng);
    br.angle_max = 0.1 + u(rng);
  }
  for (Bus& b : net.buses) {
    b.shunt_g = 0.01 * u(rng);
    b.shunt_b = 0.1 * (u(rng) - 0.5);
  }
  net.generators[0].q_max = 1.7;
  net.generators[2].c0 = 12.5;
  const Network back = parse_case(write_case(net), net.name);
  REQUIRE(back.buses.size() == net.buses.size());
  auto same = [](double a, double b) { return a == b || std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
  for (std::size_t i = 0; i < net.buses.size(); ++i) {
    const Bus &a = net.buses[i], &b = back.buses[i];
    CHECK(a.id == b.id);
    CHECK(same(a.v_min, b.v_min));
    CHECK(same(a.v_max, b.v_max));
    CHECK(same(a.shunt_g, b.shunt_g));
    CHECK(same(a.shunt_b, b.shunt_b));
    CHECK(same(a.p_load, b.p_load));
    CHECK(same(a.q_load, b.q_load));
  }
  for (std::size_t k = 0; k < net.generators.size(); ++k) {
    const Generator &a = net.generators[k], &b = back.generators[k];
    CHECK(a.bus == b.bus);
    CHECK(same(a.p_min, b.p_min));
    CHECK(same(a.p_max, b.p_max));
    CHECK(same(a.q_min, b.q_min));
    CHECK(same(a.q_max, b.q_max));
    CHECK(same(a.c2, b.c2));
    CHECK(same(a.c1, b.c1));
    CHECK(same(a.c0, b.c0));
  }
  for (std::size_t e = 0; e < net.branches.size(); ++e) {
    const Branch &a = net.branches[e], &b = back.branches[e];
    CHECK(a.from == b.from);
    CHECK(a.to == b.to);
    CHECK(same(a.r, b.r));
    CHECK(same(a.x, b.x));
    CHECK(same(a.b_charge, b.b_charge));
    CHECK(same(a.tap_mag, b.tap_mag));
    CHECK(same(a.tap_shift, b.tap_shift));
    CHECK(same(a.s_max, b.s_max));
    CHECK(same(a.angle_max, b.angle_max));
  }
  CHECK(back.reference_bus == net.reference_bus);
}

TEST_CASE("report writer") {
  CHECK(write_report(std::span<const GapReport>(), ReportFormat::Csv) ==
        "case,ac_cost,ac_status,ac_seconds,relaxation,bound,gap_percent,seconds,status,ac_feasible,numeric_warning\n");
  CHECK(write_report(std::span<const GapReport>(), ReportFormat::Json).find("\"cases\": []") != std::string::npos);

  GapReport r;
  r.case_name = "case3_base";
  r.ac_value = 5812.64;
  r.ac_status = SolveStatus::Optimal;
  RelaxationResult soc, qc, cp;
  soc.name = "W-SOC";
  soc.bound = 5735.9;
  soc.gap_percent = 1.32;
  soc.status = SolveStatus::Optimal;
  qc.name = "W-QC";
  qc.status = SolveStatus::IterationLimit;
  cp.name = "CP";
  cp.applicable = false;
  r.relaxations = {soc, qc, cp};
  const std::string csv = write_report(r, ReportFormat::Csv);
  CHECK(csv.find("case3_base,5812.640000,optimal,0.0000,W-SOC,5735.900000,1.3200,") != std::string::npos);
  CHECK(csv.find("W-QC,,,0.0000,iteration limit,0,0") != std::string::npos);
  CHECK(csv.find("CP,,,,n.a.,0,0") != std::string::npos);
  const std::string json = write_report(r, ReportFormat::Json);
  CHECK(json.find("\"status\": \"iteration limit\"") != std::string::npos);
  CHECK(json.find("\"gap_percent\": null") != std::string::npos);
  CHECK(r.find("W-QC") != nullptr);
  CHECK(r.find("C-QC") == nullptr);
  CHECK_THROWS_AS(parse_report_format("xml"), std::invalid_argument);
}
