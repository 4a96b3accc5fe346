#include <doctest.h>

#include <cmath>
#include <random>

#include "opfrelax/analysis.hpp"
#include "opfrelax/case_io.hpp"
#include "test_support.hpp"

using namespace opfrelax;

TEST_CASE("optimality gap") {
  CHECK(optimality_gap(5812.64, 5735.9) == doctest::Approx(1.32).epsilon(5e-3));
  CHECK(optimality_gap(123.4, 123.4) == 0.0);
  CHECK(optimality_gap(5992.72, 5736.2) == doctest::Approx(4.28).epsilon(5e-3));
  CHECK_THROWS_AS(optimality_gap(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(optimality_gap(-5, 1), std::invalid_argument);
}

TEST_CASE("identities at zero flow") {
  IdentitySample s;
  s.z = {0.03, 0.4};
  for (bool ext : {false, true}) {
    const IdentityCheck c = check_lemma1(s, ext);
    CHECK(c.max_error() <= 1e-15);
  }
}

TEST_CASE("identities on random samples") {
  CHECK(lemma1_suite(1000, 42, false) <= 1e-9);
  CHECK(lemma1_suite(1000, 42, true) <= 1e-9);
  CHECK(lemma1_suite(0, 42, true) == 0.0);
  CHECK(lemma1_suite(10, 42, true, 1e-3) > 1e-9);
}

TEST_CASE("extended identities specialize to the plain ones") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) {
    IdentitySample s = random_identity_sample(rng, false);
    s.tap = 1;
    s.b_charge = 0;
    const IdentityCheck a = check_lemma1(s, false), b = check_lemma1(s, true);
    for (int i = 0; i < 4; ++i) CHECK(a.error[i] == b.error[i]);
  }
}

TEST_CASE("charging breaks the plain current identity") {
  // The plain squared-current formula misses the charging terms.
  std::mt19937_64 rng(1);
  IdentitySample s = random_identity_sample(rng, true);
  s.tap = 1;
  s.b_charge = 0.5;
  const Complex y = 1.0 / s.z;
  const Complex i = y * (s.vi - s.vj) + Complex(0, s.b_charge / 2) * s.vi;
  const Complex wij = s.vi * std::conj(s.vj);
  const double plain = std::norm(y) * (std::norm(s.vi) - 2 * wij.real() + std::norm(s.vj));
  CHECK(std::abs(plain - std::norm(i)) > 1e-3 * std::norm(i));
  CHECK(check_lemma1(s, true).error[2] <= 1e-12);
}

TEST_CASE("W to C and back on case3") {
  for (RelaxationKind kind : {RelaxationKind::Soc, RelaxationKind::Qc}) {
    const Network net = builtin_case("case3_base");
    const auto w = build_relaxation(net, kind, Variant::W), c = build_relaxation(net, kind, Variant::C);
    const Solution sw = solve_conic(w.program), sc = solve_conic(c.program);
    REQUIRE(sw.optimal());
    REQUIRE(sc.optimal());
    const MappedPoint wc = map_w_to_c(net, w, sw.x, c);
    CHECK(wc.residuals.pass);
    CHECK(wc.residuals.max_violation <= 1e-8);
    CHECK(wc.objective == doctest::Approx(sw.objective).epsilon(1e-12));
    const MappedPoint cw = map_c_to_w(net, c, sc.x, w);
    CHECK(cw.residuals.pass);
    CHECK(cw.objective == doctest::Approx(sc.objective).epsilon(1e-12));
    // Round trip keeps the objective exactly.
    const MappedPoint back = map_c_to_w(net, c, wc.x, w);
    CHECK(back.objective == sw.objective);
    CHECK(back.residuals.pass);
    CHECK(std::abs(sw.objective - sc.objective) <= 1e-6 * sw.objective);
  }
}

TEST_CASE("zero flow maps to zero current") {
  Network net;
  net.name = "flat";
  net.buses = {Bus{.id = 1}, Bus{.id = 2}};
  net.reference_bus = 1;
  net.generators = {Generator{.bus = 1, .p_min = -1, .p_max = 1, .q_min = -1, .q_max = 1}};
  net.branches = {Branch{.from = 1, .to = 2, .r = 0.01, .x = 0.1}};
  const auto w = build_soc(net, Variant::W), c = build_soc(net, Variant::C);
  const AcPoint p{{1.0, 1.0}, {0.0, 0.0}, {0.0}, {0.0}};
  const MappedPoint m = map_w_to_c(net, w, lift_ac_point(w, net, p), c);
  CHECK(std::abs(m.x[c.layout.current_sq[0]]) <= 1e-15);
  CHECK(m.residuals.pass);
}

TEST_CASE("mapping on extended networks") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 3; ++k) {
    const Network net = random_extended_network(builtin_case("case3_base"), rng);
    for (const Branch& br : net.branches) CHECK(br.b_charge >= 0);
    for (const Bus& b : net.buses) CHECK(b.shunt_b != 0);
    for (RelaxationKind kind : {RelaxationKind::Soc, RelaxationKind::Qc}) {
      const EquivalenceResult r = equivalence_check(net, kind);
      CHECK_MESSAGE(r.pass(), r.name << " " << r.error);
      CHECK(r.relative_difference <= 1e-6);
      CHECK(r.w_to_c_residual <= 1e-8);
      CHECK(r.c_to_w_residual <= 1e-8);
    }
  }
}

TEST_CASE("infeasible input is refused") {
  const Network net = builtin_case("case3_base");
  const auto w = build_soc(net, Variant::W), c = build_soc(net, Variant::C);
  std::vector<double> x = solve_conic(w.program).x;
  x[w.layout.pg[0]] += 0.1;
  CHECK_THROWS_AS(map_w_to_c(net, w, x, c), std::invalid_argument);
  CHECK_THROWS_AS(map_c_to_w(net, w, x, c), std::invalid_argument);
}

TEST_CASE("dominance") {
  const DominanceReport base = dominance_suite(builtin_case("case3_base"));
  CHECK(base.ok());
  REQUIRE(base.soc);
  REQUIRE(base.qc);
  REQUIRE(base.ac);
  CHECK(optimality_gap(*base.ac, *base.qc) <= optimality_gap(*base.ac, *base.soc));

  const DominanceReport sad = dominance_suite(builtin_case("case3_sad18"), {}, std::nullopt, Variant::C);
  CHECK(sad.ok());
  CHECK(*sad.qc > *sad.soc + 100 * sad.epsilon);

  // An SDP value between SOC and AC fits; one below SOC does not.
  CHECK(dominance_suite(builtin_case("case3_base"), {}, *base.soc + 10).sdp_ge_soc);
  CHECK_FALSE(dominance_suite(builtin_case("case3_base"), {}, *base.soc - 10).sdp_ge_soc);
}

TEST_CASE("QC approaches SOC as the angle bound opens") {
  Network net = builtin_case("case3_base");
  for (Branch& br : net.branches) br.angle_max = kPi / 2;
  const DominanceReport r = dominance_suite(net);
  REQUIRE(r.soc);
  REQUIRE(r.qc);
  CHECK(r.ok());
  CHECK(std::abs(*r.qc - *r.soc) <= 10 * r.epsilon);
}

TEST_CASE("AC points are contained") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 rng(seed);
    const auto fc = testing::feasible_ac_point(random_extended_network(builtin_case("case3_sad18"), rng), seed);
    CHECK(containment_residual(fc.net, fc.point) <= 1e-9);
  }
}

TEST_CASE("rank one recovery") {
  Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(3);
  RankOneResult r = rank1_recover(ones * ones.adjoint());
  REQUIRE(r.rank_one);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(r.v(i)) == doctest::Approx(1.0));
    CHECK(std::abs(std::arg(r.v(i))) <= 1e-12);
  }
  r = rank1_recover(Eigen::MatrixXcd::Identity(3, 3));
  CHECK_FALSE(r.rank_one);
  CHECK(r.psd);
  CHECK(r.ratio == doctest::Approx(1.0));
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
  bad(0, 1) = Complex(0, 1);
  CHECK_THROWS_AS(rank1_recover(bad), std::invalid_argument);
  CHECK_FALSE(rank1_recover(-ones * ones.adjoint()).rank_one);

  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> size(1, 10);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = size(rng);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
    const RankOneResult rec = rank1_recover(v * v.adjoint());
    REQUIRE(rec.rank_one);
    const Complex phase = v.dot(rec.v) / std::abs(v.dot(rec.v));  // v^* rec
    worst = std::max(worst, (rec.v - v * phase).norm() / v.norm());
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("SOC optimum of case3 is not an AC point") {
  const Network net = builtin_case("case3_base");
  const auto rel = build_soc(net, Variant::W);
  const Solution s = solve_conic(rel.program);
  REQUIRE(s.optimal());
  CHECK(worst_edge_ratio(rel, net, s.x) > 1e-6);
  CHECK_FALSE(is_ac_feasible(rel, net, s.x));
}

TEST_CASE("AC points recovered from their lift") {
  const auto fc = testing::feasible_ac_point(builtin_case("case3_base"), 3);
  const auto rel = build_soc(fc.net, Variant::W);
  const auto x = lift_ac_point(rel, fc.net, fc.point);
  CHECK(worst_edge_ratio(rel, fc.net, x) <= 1e-12);
  const AcPoint back = recover_ac_point(rel, fc.net, x);
  for (std::size_t i = 0; i < back.v.size(); ++i) {
    CHECK(back.v[i] == doctest::Approx(fc.point.v[i]).epsilon(1e-14));
    CHECK(back.theta[i] == doctest::Approx(fc.point.theta[i]).scale(1).epsilon(1e-14));
  }
  CHECK(is_ac_feasible(rel, fc.net, x, 1e-9));
  CHECK_FALSE(is_ac_feasible(build_copper_plate(fc.net), fc.net, std::vector<double>(3, 0.0)));
}

TEST_CASE("benchmark table") {
  const Network net = builtin_case("case3_base");
  CHECK(bench_wc(net, 0).empty());
  const auto a = bench_wc(net, 3), b = bench_wc(net, 3);
  REQUIRE(a.size() == 4);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].median_seconds < 1.0);
    CHECK(a[k].status == SolveStatus::Optimal);
    CHECK(a[k].iterations == b[k].iterations);
  }
  CHECK(a[0].formulation == "W-SOC");
  CHECK(a[1].formulation == "C-SOC");
  CHECK(a[2].formulation == "W-QC");
  CHECK(a[3].formulation == "C-QC");
  const std::string csv = bench_csv(a);
  CHECK(csv.rfind("case,formulation,median_seconds,iterations,status\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("relaxation lists") {
  CHECK(parse_relaxation_list("soc, QC,cp,soc") == std::vector<std::string>{"soc", "qc", "cp"});
  CHECK_THROWS_AS(parse_relaxation_list("sdp"), std::invalid_argument);
  CHECK_THROWS_AS(parse_relaxation_list(" , "), std::invalid_argument);
}

TEST_CASE("gap report for case3") {
  RunOptions opt;
  const GapReport r = run_case(builtin_case("case3_base"), opt);
  REQUIRE(r.ac_value);
  const auto* soc = r.find("W-SOC");
  const auto* qc = r.find("W-QC");
  const auto* cp = r.find("CP");
  REQUIRE(soc);
  REQUIRE(qc);
  REQUIRE(cp);
  CHECK(*soc->gap_percent == doctest::Approx(1.32).epsilon(0.15 / 1.32));
  CHECK(*qc->gap_percent == doctest::Approx(1.24).epsilon(0.15 / 1.24));
  CHECK(*cp->gap_percent == doctest::Approx(2.99).epsilon(0.05 / 2.99));
  CHECK(*qc->gap_percent <= *soc->gap_percent);
  CHECK_FALSE(soc->ac_feasible);

  Network neg = builtin_case("case3_base");
  neg.branches[0].r = -0.001;
  opt.relaxations = {"cp"};
  const GapReport n = run_case(neg, opt);
  CHECK_FALSE(n.relaxations[0].applicable);
  CHECK_FALSE(n.relaxations[0].bound);
}
