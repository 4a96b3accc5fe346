#include <algorithm>
#include <cmath>

#include "opfrelax/analysis.hpp"

namespace opfrelax {

DominanceReport dominance_suite(const Network& net, const SolverConfig& cfg, std::optional<double> sdp_value,
                                Variant variant) {
  DominanceReport rep;
  rep.sdp = sdp_value;
  auto relax = [&](RelaxationKind kind, std::optional<double>& slot) {
    try {
      const BuiltRelaxation rel = build_relaxation(net, kind, variant);
      const Solution s = solve_conic(rel.program, cfg);
      if (s.optimal())
        slot = s.objective;
      else
        rep.failures.push_back(rel.name() + ": " + to_string(s.status));
    } catch (const NotApplicable&) {
      // CP skipped; the ordering check below is vacuous.
    }
  };
  relax(RelaxationKind::CopperPlate, rep.cp);
  relax(RelaxationKind::Soc, rep.soc);
  relax(RelaxationKind::Qc, rep.qc);
  {
    const AcOpfProgram ac(net);
    const Solution s = solve_local_ac(ac, cfg);
    if (s.optimal())
      rep.ac = s.objective;
    else
      rep.failures.push_back("AC: " + to_string(s.status));
  }

  double scale = 1;
  for (const auto& v : {rep.cp, rep.soc, rep.qc, rep.ac})
    if (v) scale = std::max(scale, std::abs(*v));
  rep.epsilon = 1e-6 * scale;
  const double eps = rep.epsilon;
  if (rep.cp && rep.soc) rep.cp_le_soc = *rep.cp <= *rep.soc + eps;
  if (rep.soc && rep.qc) rep.soc_le_qc = *rep.soc <= *rep.qc + eps;
  if (rep.qc && rep.ac) rep.qc_le_ac = *rep.qc <= *rep.ac + eps;
  if (rep.sdp) {
    if (rep.soc) rep.sdp_ge_soc = *rep.sdp >= *rep.soc - eps;
    if (rep.ac) rep.sdp_ge_soc = rep.sdp_ge_soc && *rep.sdp <= *rep.ac + eps;
  }
  return rep;
}

double containment_residual(const Network& net, const AcPoint& point) {
  double worst = 0;
  for (RelaxationKind kind : {RelaxationKind::Soc, RelaxationKind::Qc})
    for (Variant variant : {Variant::W, Variant::C}) {
      const BuiltRelaxation rel = build_relaxation(net, kind, variant);
      const std::vector<double> x = lift_ac_point(rel, net, point);
      worst = std::max(worst, certify_solution(rel.program, x, 0.0).max_violation);
    }
  return worst;
}

}  // namespace opfrelax
