#include <cmath>
#include <stdexcept>
#include <algorithm>
#include <unordered_map>

#include "opfrelax/analysis.hpp"

namespace opfrelax {

namespace {

void require_feasible(const BuiltRelaxation& rel, std::span<const double> x, double tol) {
  if (static_cast<int>(x.size()) != rel.program.num_variables())
    throw std::invalid_argument("point size does not match " + rel.name());
  const ResidualReport rep = certify_solution(rel.program, x, tol);
  if (!rep.pass)
    throw std::invalid_argument(rel.name() + " point infeasible: " + rep.worst_family + " violated by " +
                                std::to_string(rep.max_violation));
}

/// Copies every variable whose name exists in both programs.
std::vector<double> copy_by_name(const BuiltRelaxation& from, std::span<const double> x, const BuiltRelaxation& to) {
  std::unordered_map<std::string, int> index;
  const auto& fv = from.program.variables();
  for (int k = 0; k < from.program.num_variables(); ++k) index.emplace(fv[k].name, k);
  std::vector<double> y = to.program.start_point();
  const auto& tv = to.program.variables();
  for (int k = 0; k < to.program.num_variables(); ++k)
    if (auto it = index.find(tv[k].name); it != index.end()) y[k] = x[it->second];
  return y;
}

void check_pair(const BuiltRelaxation& from, const BuiltRelaxation& to, Variant a, Variant b) {
  if (from.variant != a || to.variant != b || from.kind != to.kind || from.kind == RelaxationKind::CopperPlate)
    throw std::invalid_argument("cannot map " + from.name() + " to " + to.name());
}

MappedPoint finish(const BuiltRelaxation& to, std::vector<double> y, double tol) {
  MappedPoint out;
  out.objective = to.program.objective_value(y);
  out.residuals = certify_solution(to.program, y, tol);
  out.x = std::move(y);
  return out;
}

}  // namespace

MappedPoint map_w_to_c(const Network& net, const BuiltRelaxation& from, std::span<const double> x, const BuiltRelaxation& to,
                       double tol) {
  check_pair(from, to, Variant::W, Variant::C);
  require_feasible(from, x, tol);
  std::vector<double> y = copy_by_name(from, x, to);
  const RelaxationLayout& L = to.layout;
  const auto pos = bus_positions(net);
  for (std::size_t e = 0; e < L.current_sq.size(); ++e) {
    const Branch& br = net.branches[e];
    const double t2 = br.tap_mag * br.tap_mag, beta = br.b_charge / 2;
    const double y2 = std::norm(branch_admittance(br));
    const Complex w(y[L.w_re[e]], y[L.w_im[e]]);
    const Complex a = w / tap_ratio(br);
    const double wii = y[L.w_diag[pos.at(br.from)]], wjj = y[L.w_diag[pos.at(br.to)]];
    y[L.current_sq[e]] = y2 * (wii / t2 - 2 * a.real() + wjj) - beta * beta * wii / t2 - br.b_charge * y[L.q_from[e]];
  }
  return finish(to, std::move(y), tol);
}

MappedPoint map_c_to_w(const Network&, const BuiltRelaxation& from, std::span<const double> x, const BuiltRelaxation& to,
                       double tol) {
  check_pair(from, to, Variant::C, Variant::W);
  require_feasible(from, x, tol);
  return finish(to, copy_by_name(from, x, to), tol);
}

}  // namespace opfrelax

namespace opfrelax {

Network random_extended_network(const Network& base, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> tap(0.9, 1.1), shift(-5 * kPi / 180, 5 * kPi / 180), bc(0.0, 0.7);
  std::uniform_real_distribution<double> gs(0.001, 0.02), bs(0.01, 0.1), sign(-1.0, 1.0);
  Network net = base;
  net.name = base.name + "_ext";
  for (Branch& br : net.branches) {
    br.tap_mag = tap(rng);
    br.tap_shift = shift(rng);
    br.b_charge = bc(rng);
  }
  for (Bus& b : net.buses) {
    b.shunt_g = gs(rng);
    b.shunt_b = (sign(rng) < 0 ? -1 : 1) * bs(rng);
  }
  return net;
}

bool EquivalenceResult::pass(double objective_tol, double residual_tol) const {
  return error.empty() && w_objective && c_objective && relative_difference <= objective_tol &&
         w_to_c_residual <= residual_tol && c_to_w_residual <= residual_tol;
}

EquivalenceResult equivalence_check(const Network& net, RelaxationKind kind, const SolverConfig& cfg) {
  EquivalenceResult out;
  out.name = kind == RelaxationKind::Qc ? "QC" : "SOC";
  try {
    const BuiltRelaxation w = build_relaxation(net, kind, Variant::W);
    const BuiltRelaxation c = build_relaxation(net, kind, Variant::C);
    const Solution sw = solve_conic(w.program, cfg);
    const Solution sc = solve_conic(c.program, cfg);
    if (!sw.optimal() || !sc.optimal()) {
      out.error = "solve: W " + to_string(sw.status) + ", C " + to_string(sc.status);
      return out;
    }
    out.w_objective = sw.objective;
    out.c_objective = sc.objective;
    out.relative_difference = std::abs(sw.objective - sc.objective) / std::max(1.0, std::abs(sw.objective));
    const double tol = std::max(cfg.feasibility_tol, 1e-8);
    const MappedPoint wc = map_w_to_c(net, w, sw.x, c, tol);
    const MappedPoint cw = map_c_to_w(net, c, sc.x, w, tol);
    out.w_to_c_residual = wc.residuals.max_violation;
    out.c_to_w_residual = cw.residuals.max_violation;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace opfrelax
