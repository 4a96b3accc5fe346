#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "opfrelax/case_io.hpp"
#include "opfrelax/formulations.hpp"
#include "opfrelax/solvers.hpp"
#include "test_support.hpp"

using namespace opfrelax;

namespace {

constexpr double kDeg = kPi / 180;

int count_rows(const NlpProgram& p, const std::string& family) {
  int n = 0;
  for (int r = 0; r < p.num_constraints(); ++r) n += p.constraint_family(r) == family;
  return n;
}

Network extended_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  Network net = builtin_case("case3_base");
  for (Branch& br : net.branches) {
    br.tap_mag = 0.9 + 0.2 * u(rng);
    br.tap_shift = (u(rng) - 0.5) * 10 * kDeg;
    br.b_charge = 0.7 * u(rng);
  }
  for (Bus& b : net.buses) {
    b.shunt_g = 0.02 * u(rng);
    b.shunt_b = 0.2 * (u(rng) - 0.5);
  }
  return net;
}

// Complex power into branch `br` at each end, straight from Ohm's law.
Complex oracle_flow(const Branch& br, int side, Complex vi, Complex vj) {
  const Complex y = 1.0 / Complex(br.r, br.x), T = std::polar(br.tap_mag, br.tap_shift);
  const Complex half(0, br.b_charge / 2);
  if (side == 0) {
    const Complex i_line = y * (vi / T - vj) + half * vi / T;
    return vi / T * std::conj(i_line);
  }
  const Complex i_to = y * (vj - vi / T) + half * vj;
  return vj * std::conj(i_to);
}

}  // namespace

TEST_CASE("AC program structure") {
  const Network net = builtin_case("case3_base");
  const AcOpfProgram ac(net);
  CHECK(ac.num_variables() == 3 + 3 + 3 + 3 + 12);
  std::vector<double> lo, hi;
  ac.variable_bounds(lo, hi);
  CHECK(lo[ac.theta_index(0)] == 0);
  CHECK(hi[ac.theta_index(0)] == 0);
  CHECK(lo[ac.theta_index(1)] < 0);
  CHECK(count_rows(ac, "kcl") == 6);
  CHECK(count_rows(ac, "flow") == 12);
  // Only branch 2-3 is rated.
  CHECK(count_rows(ac, "thermal") == 2);
  Network unrated = net;
  for (Branch& br : unrated.branches) br.s_max = kInf;
  CHECK(count_rows(AcOpfProgram(unrated), "thermal") == 0);
}

TEST_CASE("flow expressions match Ohm's law with taps, shifts and charging") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int k = 0; k < 500; ++k) {
    Branch br;
    br.r = 0.001 + 0.1 * u(rng);
    br.x = 0.01 + u(rng);
    br.b_charge = 0.7 * u(rng);
    br.tap_mag = 0.9 + 0.2 * u(rng);
    br.tap_shift = (u(rng) - 0.5) * 10 * kDeg;
    const double vi = 0.9 + 0.2 * u(rng), vj = 0.9 + 0.2 * u(rng), ti = u(rng) - 0.5, tj = u(rng) - 0.5;
    const Complex Vi = std::polar(vi, ti), Vj = std::polar(vj, tj);
    const Complex s_from = oracle_flow(br, 0, Vi, Vj), s_to = oracle_flow(br, 1, Vi, Vj);
    worst = std::max({worst, std::abs(ac_flow(br, 0, vi, vj, ti, tj) - s_from.real()),
                      std::abs(ac_flow(br, 1, vi, vj, ti, tj) - s_from.imag()),
                      std::abs(ac_flow(br, 2, vi, vj, ti, tj) - s_to.real()),
                      std::abs(ac_flow(br, 3, vi, vj, ti, tj) - s_to.imag())});
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("plain branch flow coefficients") {
  Branch br;
  br.r = 0.042;
  br.x = 0.9;
  const Complex y = branch_admittance(br);
  const double g = y.real(), b = y.imag();
  auto p = AcOpfProgram::flow_coefficients(br, 0);
  CHECK(p.a == doctest::Approx(g));
  CHECK(p.b == 0);
  CHECK(p.c == doctest::Approx(-g));
  CHECK(p.s == doctest::Approx(-b));
  auto q = AcOpfProgram::flow_coefficients(br, 1);
  CHECK(q.a == doctest::Approx(-b));
  CHECK(q.c == doctest::Approx(b));
  CHECK(q.s == doctest::Approx(-g));
  auto pt = AcOpfProgram::flow_coefficients(br, 2);
  CHECK(pt.a == 0);
  CHECK(pt.b == doctest::Approx(g));
  CHECK(pt.c == doctest::Approx(-g));
  CHECK(pt.s == doctest::Approx(b));
  auto qt = AcOpfProgram::flow_coefficients(br, 3);
  CHECK(qt.b == doctest::Approx(-b));
  CHECK(qt.c == doctest::Approx(b));
  CHECK(qt.s == doctest::Approx(g));
}

TEST_CASE("SOC structure") {
  const Network net = builtin_case("case3_base");
  const auto w = build_soc(net, Variant::W);
  const auto c = build_soc(net, Variant::C);
  CHECK(w.program.count_family("soc_w") == 3);
  CHECK(w.program.count_family("soc_c") == 0);
  CHECK(c.program.count_family("soc_c") == 3);
  CHECK(c.program.num_variables() == w.program.num_variables() + 3);
  CHECK(c.program.count_family("loss") == 6);
  CHECK(c.program.linear_rows().size() == w.program.linear_rows().size() + 6);
  CHECK(w.name() == "W-SOC");
  CHECK(c.name() == "C-SOC");
  for (int l : c.layout.current_sq) CHECK(c.program.variables()[l].lower == 0);
}

TEST_CASE("PAD rows use tan of the bound") {
  const Network net = builtin_case("case3_base");
  const auto rel = build_soc(net, Variant::W);
  const double tu = std::tan(30 * kDeg);
  int rows = 0;
  for (const LinearRow& r : rel.program.linear_rows()) {
    if (r.family != "pad") continue;
    ++rows;
    REQUIRE(r.terms.size() == 2);
    for (const Term& t : r.terms) {
      const std::string& name = rel.program.variables()[t.var].name;
      if (name.rfind("wr[", 0) == 0)
        CHECK(t.coef == doctest::Approx(-tu));
      else
        CHECK(std::abs(t.coef) == doctest::Approx(1.0));
    }
    CHECK(r.rhs == 0);
  }
  CHECK(rows == 6);
  Network open = net;
  for (Branch& br : open.branches) br.angle_max = kDefaultAngleBound;
  CHECK(build_soc(open, Variant::W).program.count_family("pad") == 0);
}

TEST_CASE("QC structure") {
  const Network net = builtin_case("case3_sad18");
  for (Variant v : {Variant::W, Variant::C}) {
    const auto soc = build_soc(net, v);
    const auto qc = build_qc(net, v);
    for (int cs : qc.layout.cs) {
      CHECK(qc.program.variables()[cs].lower == doctest::Approx(std::cos(18 * kDeg)));
      CHECK(qc.program.variables()[cs].upper == 1.0);
    }
    // The SOC rows are a prefix of the QC rows.
    REQUIRE(qc.program.linear_rows().size() > soc.program.linear_rows().size());
    for (std::size_t r = 0; r < soc.program.linear_rows().size(); ++r) {
      const auto &a = soc.program.linear_rows()[r], &b = qc.program.linear_rows()[r];
      CHECK(a.family == b.family);
      CHECK(a.rhs == b.rhs);
      CHECK(a.terms.size() == b.terms.size());
    }
    CHECK(qc.program.cones().size() == soc.program.cones().size());
    CHECK(qc.program.quadratic_rows().size() > soc.program.quadratic_rows().size());
    CHECK(qc.program.count_family("tconv") == 2 * 3);
    CHECK(qc.program.count_family("cconv") > 0);
    CHECK(qc.program.count_family("sconv") > 0);
    CHECK(qc.program.count_family("mccormick_re") == 4 * 3);
    CHECK(qc.program.count_family("mccormick_im") == 4 * 3);
  }
  Network bad = net;
  bad.branches[0].angle_max = 2.0;
  CHECK_THROWS_AS(build_qc(bad, Variant::W), std::invalid_argument);
}

TEST_CASE("copper plate") {
  const Network net = builtin_case("case3_base");
  const auto cp = build_copper_plate(net);
  CHECK(cp.program.num_variables() == 3);
  CHECK(cp.program.linear_rows().size() == 1);
  CHECK(cp.name() == "CP");
  Network neg = net;
  neg.branches[2].r = -0.01;
  CHECK_THROWS_AS(build_copper_plate(neg), NotApplicable);
}

TEST_CASE("objective is fuel cost in MW") {
  const Network net = extended_case(4);
  const auto fc = testing::feasible_ac_point(net, 5);
  double cost = 0;
  for (std::size_t g = 0; g < fc.net.generators.size(); ++g)
    cost += generation_cost(fc.net.generators[g], fc.point.pg[g], fc.net.base_mva);
  for (RelaxationKind k : {RelaxationKind::Soc, RelaxationKind::Qc})
    for (Variant v : {Variant::W, Variant::C}) {
      const auto rel = build_relaxation(fc.net, k, v);
      CHECK(rel.program.objective_value(lift_ac_point(rel, fc.net, fc.point)) == doctest::Approx(cost).epsilon(1e-12));
    }
  const AcOpfProgram ac(fc.net);
  CHECK(ac.objective(ac.from_point(fc.point)) == doctest::Approx(cost).epsilon(1e-12));
}

TEST_CASE("AC-feasible points lie in every relaxation") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto fc = testing::feasible_ac_point(seed % 2 ? extended_case(seed) : builtin_case("case3_sad18"), seed);
    const AcOpfProgram ac(fc.net);
    CHECK(certify_solution(ac, ac.from_point(fc.point), 1e-12).pass);
    for (RelaxationKind k : {RelaxationKind::Soc, RelaxationKind::Qc})
      for (Variant v : {Variant::W, Variant::C}) {
        const auto rel = build_relaxation(fc.net, k, v);
        const auto rep = certify_solution(rel.program, lift_ac_point(rel, fc.net, fc.point), 1e-9);
        CHECK_MESSAGE(rep.pass, rel.name() << " " << rep.worst_family << " " << rep.max_violation);
      }
  }
}

// SDP export: rebuild each block at a lifted AC point and check PSD.
TEST_CASE("SDP export structure") {
  const Network net = builtin_case("case3_base");
  const SdpExport ex = export_sdp(net);
  REQUIRE(ex.block_sizes.size() >= 2);
  CHECK(ex.block_sizes[0] == 6);
  CHECK(ex.block_sizes[1] == 2);
  CHECK(ex.block_sizes[2] == 2);
  CHECK(ex.block_sizes[3] == 3);
  CHECK(ex.block_sizes[4] == 3);
  CHECK(ex.block_sizes.back() < 0);
  // 3 W_ii, 3 pairs, 3 generators (pg, qg) and 2 epigraph variables.
  CHECK(ex.objective.size() == 3 + 6 + 6 + 2);
  CHECK(ex.objective_offset == 0);
  for (const auto& e : ex.entries) CHECK(e.i <= e.j);
  const std::string text = ex.to_sdpa();
  CHECK(text.find("17 = mDIM\n") != std::string::npos);
  CHECK(text.find("6 = nBLOCK\n") != std::string::npos);
  CHECK(text.find("6 2 2 3 3 ") != std::string::npos);
  CHECK(text == export_sdp(net).to_sdpa());

  Network off = net;
  off.generators[0].c0 = 12.5;
  off.generators[2].c0 = 1;
  CHECK(export_sdp(off).objective_offset == 13.5);
  CHECK(export_sdp(off).to_sdpa().find("* objective_offset 13.5\n") != std::string::npos);
}

TEST_CASE("SDP export contains lifted AC points") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto fc = testing::feasible_ac_point(seed % 2 ? extended_case(seed) : builtin_case("case3_base"), seed);
    const Network& net = fc.net;
    const SdpExport ex = export_sdp(net);
    const int nb = static_cast<int>(net.buses.size());
    std::vector<Complex> V(nb);
    for (int i = 0; i < nb; ++i) V[i] = std::polar(fc.point.v[i], fc.point.theta[i]);
    std::map<std::string, double> value;
    for (int i = 0; i < nb; ++i) {
      value["w[" + std::to_string(net.buses[i].id) + "]"] = std::norm(V[i]);
      for (int j = i + 1; j < nb; ++j) {
        const Complex w = V[i] * std::conj(V[j]);
        const std::string tag = std::to_string(net.buses[i].id) + "," + std::to_string(net.buses[j].id);
        value["wr[" + tag + "]"] = w.real();
        value["wi[" + tag + "]"] = w.imag();
      }
    }
    double cost = 0;
    for (std::size_t g = 0; g < net.generators.size(); ++g) {
      const Generator& gen = net.generators[g];
      const double P = fc.point.pg[g] * net.base_mva;
      value["pg[" + std::to_string(g) + "]"] = fc.point.pg[g];
      value["qg[" + std::to_string(g) + "]"] = fc.point.qg[g];
      value["t[" + std::to_string(g) + "]"] = gen.c2 * P * P + gen.c1 * P;
      cost += generation_cost(gen, fc.point.pg[g], net.base_mva);
    }
    std::vector<double> x;
    for (const std::string& name : ex.variable_names) {
      REQUIRE(value.count(name));
      x.push_back(value[name]);
    }
    double obj = ex.objective_offset;
    for (std::size_t k = 0; k < x.size(); ++k) obj += ex.objective[k] * x[k];
    CHECK(obj == doctest::Approx(cost).epsilon(1e-12));

    std::vector<Eigen::MatrixXd> blocks;
    for (int s : ex.block_sizes) blocks.push_back(Eigen::MatrixXd::Zero(std::abs(s), std::abs(s)));
    for (const auto& e : ex.entries) {
      const double v = e.matrix == 0 ? -e.value : e.value * x[e.matrix - 1];
      Eigen::MatrixXd& m = blocks[e.block - 1];
      m(e.i - 1, e.j - 1) += v;
      if (e.i != e.j) m(e.j - 1, e.i - 1) += v;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const double scale = std::max(1.0, blocks[b].cwiseAbs().maxCoeff());
      if (ex.block_sizes[b] < 0)
        CHECK(blocks[b].diagonal().minCoeff() >= -1e-9 * scale);
      else
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(blocks[b]).eigenvalues().minCoeff() >= -1e-9 * scale);
    }
    // The W block is rank 2 in the real embedding (rank 1 complex).
    const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(blocks[0]).eigenvalues();
    CHECK(std::abs(ev(2 * nb - 3)) <= 1e-12 * ev(2 * nb - 1));
  }
}

TEST_CASE("SDP export to file is byte stable") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "opfrelax_sdp_a.dat-s", b = dir / "opfrelax_sdp_b.dat-s";
  export_sdp(builtin_case("case3_sad18"), a);
  export_sdp(builtin_case("case3_sad18"), b);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).size() > 100);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  CHECK_THROWS_AS(export_sdp(builtin_case("case3_base"), dir / "no_such_dir" / "x.dat-s"), std::runtime_error);
}
