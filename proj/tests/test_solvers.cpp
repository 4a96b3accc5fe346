#include <doctest.h>

#include <cmath>

#include "opfrelax/case_io.hpp"
#include "opfrelax/solvers.hpp"

using namespace opfrelax;

namespace {

// Analytic copper plate for case3: equal marginal costs, p1 + p2 = 315 MW.
double copper_plate_oracle() {
  const double p1 = (0.17 * 315 + 1.2 - 5.0) / (0.22 + 0.17), p2 = 315 - p1;
  return 0.11 * p1 * p1 + 5 * p1 + 0.085 * p2 * p2 + 1.2 * p2;
}

}  // namespace

TEST_CASE("tiny LP") {
  ConicProgram p;
  const int x = p.add_variable("x", -kInf, kInf);
  p.add_linear("lb", {{x, 1.0}}, Sense::GreaterEqual, 3.0);
  p.set_objective({{}, {{x, 1.0}}, 0.0});
  const Solution s = solve_conic(p);
  REQUIRE(s.optimal());
  CHECK(s.x[x] == doctest::Approx(3.0).epsilon(1e-7));
  CHECK(s.objective == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("rotated cone bounds the product") {
  for (double sign : {1.0, -1.0}) {
    ConicProgram p;
    const int w = p.add_variable("w", -kInf, kInf);
    const int u = p.add_variable("u", 1, 1);
    const int v = p.add_variable("v", 1, 1);
    // ||(2w, u - v)|| <= u + v  <=>  w^2 <= u v
    p.add_rotated_cone("cone", {AffineExpr{{{w, 1.0}}, 0.0}}, AffineExpr{{{u, 1.0}}, 0.0}, AffineExpr{{{v, 1.0}}, 0.0});
    p.set_objective({{}, {{w, -sign}}, 0.0});
    const Solution s = solve_conic(p);
    REQUIRE(s.optimal());
    CHECK(s.x[w] == doctest::Approx(sign).epsilon(1e-7));
  }
}

TEST_CASE("convex quadratic objective and row") {
  ConicProgram p;
  const int x = p.add_variable("x", -kInf, kInf), y = p.add_variable("y", -kInf, kInf);
  // min (x - 1)^2 + (y - 2)^2  s.t.  x^2 + y^2 <= 1
  p.add_quadratic("disk", {{x, x, 1.0}, {y, y, 1.0}}, {}, 1.0);
  p.set_objective({{{x, x, 1.0}, {y, y, 1.0}}, {{x, -2.0}, {y, -4.0}}, 5.0});
  const Solution s = solve_conic(p);
  REQUIRE(s.optimal());
  CHECK(s.x[x] == doctest::Approx(1 / std::sqrt(5.0)).epsilon(1e-6));
  CHECK(s.x[y] == doctest::Approx(2 / std::sqrt(5.0)).epsilon(1e-6));
  CHECK(s.objective == doctest::Approx(std::pow(std::sqrt(5.0) - 1, 2)).epsilon(1e-7));
}

TEST_CASE("non-PSD forms are rejected") {
  ConicProgram p;
  const int x = p.add_variable("x", 0, 1), y = p.add_variable("y", 0, 1);
  CHECK_THROWS_WITH_AS(p.add_quadratic("bad", {{x, y, 1.0}}, {}, 1.0), "quadratic form is not positive semidefinite",
                       std::invalid_argument);
  CHECK_THROWS_AS(p.set_objective({{{x, x, -1.0}}, {}, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(p.add_variable("z", 2, 1), std::invalid_argument);
}

TEST_CASE("infeasible conic program is detected") {
  ConicProgram p;
  const int x = p.add_variable("x", -kInf, kInf);
  p.add_linear("a", {{x, 1.0}}, Sense::GreaterEqual, 3.0);
  p.add_linear("b", {{x, 1.0}}, Sense::LessEqual, 1.0);
  p.set_objective({{}, {{x, 1.0}}, 0.0});
  CHECK(solve_conic(p).status == SolveStatus::InfeasibleDetected);
}

TEST_CASE("configuration checks") {
  ConicProgram p;
  p.add_variable("x", 0, 1);
  SolverConfig cfg;
  cfg.step_fraction = 1.0;
  CHECK_THROWS_AS(solve_conic(p, cfg), std::invalid_argument);
  cfg = {};
  cfg.feasibility_tol = 0;
  CHECK_THROWS_AS(solve_conic(p, cfg), std::invalid_argument);
  cfg = {};
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(check_config(cfg), std::invalid_argument);
}

TEST_CASE("iteration limit is reported") {
  SolverConfig cfg;
  cfg.max_iterations = 2;
  const auto rel = build_soc(builtin_case("case3_base"), Variant::W);
  CHECK(solve_conic(rel.program, cfg).status == SolveStatus::IterationLimit);
  CHECK(solve_local_ac(AcOpfProgram(builtin_case("case3_base")), cfg).status == SolveStatus::IterationLimit);
}

TEST_CASE("case3 relaxations") {
  const Network net = builtin_case("case3_base");
  const Solution soc = solve_conic(build_soc(net, Variant::W).program);
  REQUIRE(soc.optimal());
  // 5812.64 (1 - 0.0132), with the gap allowed to move 0.15 points.
  CHECK(std::abs(soc.objective - 5812.64 * (1 - 0.0132)) <= 5812.64 * 0.0015);
  const Solution cp = solve_conic(build_copper_plate(net).program);
  REQUIRE(cp.optimal());
  CHECK(cp.objective == doctest::Approx(copper_plate_oracle()).epsilon(1e-7));
  CHECK(copper_plate_oracle() == doctest::Approx(5639.0).epsilon(1e-4));
}

TEST_CASE("local AC solver") {
  const Solution base = solve_local_ac(AcOpfProgram(builtin_case("case3_base")));
  REQUIRE(base.optimal());
  CHECK(std::abs(base.objective / 5812.64 - 1) <= 1e-3);
  const Solution sad = solve_local_ac(AcOpfProgram(builtin_case("case3_sad18")));
  REQUIRE(sad.optimal());
  CHECK(std::abs(sad.objective / 5992.72 - 1) <= 1e-3);
  const AcOpfProgram ac(builtin_case("case3_base"));
  CHECK(certify_solution(ac, base, 1e-6).pass);
}

TEST_CASE("infeasible dispatch ends in restoration failure") {
  Network net = builtin_case("case3_base");
  net.generators[0].p_max = 0.5;
  net.generators[1].p_max = 0.5;
  CHECK(solve_local_ac(AcOpfProgram(net)).status == SolveStatus::RestorationFailure);
}

TEST_CASE("certification") {
  const Network net = builtin_case("case3_base");
  const auto rel = build_soc(net, Variant::W);
  const Solution s = solve_conic(rel.program);
  REQUIRE(s.optimal());
  auto rep = certify_solution(rel.program, s, 1e-8);
  CHECK(rep.pass);
  CHECK(rep.max_violation <= 1e-8);
  CHECK(rep.by_family.count("kcl"));
  CHECK(rep.by_family.count("soc_w"));

  std::vector<double> x = s.x;
  x[rel.layout.pg[0]] += 1e-3;
  rep = certify_solution(rel.program, x, 1e-8);
  CHECK_FALSE(rep.pass);
  CHECK(rep.worst_family == "kcl");
  CHECK(rep.max_violation == doctest::Approx(1e-3).epsilon(1e-4));

  // The relaxation point evaluated in the AC equations.
  const AcOpfProgram ac(net);
  AcPoint p;
  for (int i = 0; i < 3; ++i) {
    p.v.push_back(std::sqrt(s.x[rel.layout.w_diag[i]]));
    p.theta.push_back(0.0);
  }
  for (std::size_t g = 0; g < 3; ++g) {
    p.pg.push_back(s.x[rel.layout.pg[g]]);
    p.qg.push_back(s.x[rel.layout.qg[g]]);
  }
  rep = certify_solution(ac, ac.from_point(p), 1e-6);
  CHECK_FALSE(rep.pass);
  CHECK(rep.by_family.at("kcl") > 1e-6);
}

TEST_CASE("weak duality at every iterate") {
  SolverConfig cfg;
  cfg.record_trace = true;
  for (const char* name : {"case3_base", "case3_sad18"})
    for (RelaxationKind k : {RelaxationKind::Soc, RelaxationKind::Qc, RelaxationKind::CopperPlate})
      for (Variant v : {Variant::W, Variant::C}) {
        const auto rel = build_relaxation(builtin_case(name), k, v);
        const Solution s = solve_conic(rel.program, cfg);
        REQUIRE(s.optimal());
        REQUIRE(s.trace.size() == static_cast<std::size_t>(s.iterations) + 1);
        for (const IterateRecord& r : s.trace)
          CHECK_MESSAGE(r.dual_objective <= r.primal_objective + 1e-9 * std::max(1.0, std::abs(r.primal_objective)),
                        rel.name() << " iteration " << r.iteration);
      }
}

TEST_CASE("solves are deterministic") {
  SolverConfig cfg;
  cfg.record_trace = true;
  const auto rel = build_qc(builtin_case("case3_sad18"), Variant::C);
  const Solution a = solve_conic(rel.program, cfg), b = solve_conic(rel.program, cfg);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    CHECK(a.trace[k].primal_objective == b.trace[k].primal_objective);
    CHECK(a.trace[k].dual_objective == b.trace[k].dual_objective);
    CHECK(a.trace[k].step == b.trace[k].step);
  }
  CHECK(a.x == b.x);
  const AcOpfProgram ac(builtin_case("case3_base"));
  const Solution c = solve_local_ac(ac, cfg), d = solve_local_ac(ac, cfg);
  CHECK(c.x == d.x);
  CHECK(c.iterations == d.iterations);
}

TEST_CASE("relaxation bounds lie below the AC point") {
  for (const char* name : {"case3_base", "case3_sad18"}) {
    const Network net = builtin_case(name);
    const AcOpfProgram ac(net);
    const Solution a = solve_local_ac(ac);
    REQUIRE(a.optimal());
    REQUIRE(certify_solution(ac, a, 1e-6).pass);
    for (RelaxationKind k : {RelaxationKind::Soc, RelaxationKind::Qc})
      CHECK(solve_conic(build_relaxation(net, k, Variant::W).program).objective <= a.objective);
  }
}
