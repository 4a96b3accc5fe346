#include <algorithm>
#include <cmath>

#include "opfrelax/solvers.hpp"

namespace opfrelax {

namespace {

void note(ResidualReport& rep, const std::string& family, double v) {
  v = std::max(v, 0.0);
  auto [it, fresh] = rep.by_family.emplace(family, v);
  if (!fresh) it->second = std::max(it->second, v);
  if (rep.worst_family.empty() || v > rep.max_violation) {
    rep.max_violation = std::max(rep.max_violation, v);
    rep.worst_family = family;
  }
}

void close(ResidualReport& rep, double tol) {
  rep.tolerance = tol;
  rep.pass = rep.max_violation <= tol;
}

}  // namespace

ResidualReport certify_solution(const ConicProgram& prog, std::span<const double> x, double tol) {
  ResidualReport rep;
  const auto& vars = prog.variables();
  for (int j = 0; j < prog.num_variables(); ++j) note(rep, "bounds", std::max(vars[j].lower - x[j], x[j] - vars[j].upper));
  for (const LinearRow& r : prog.linear_rows()) {
    const double lhs = eval_linear(r.terms, x);
    double v = 0;
    switch (r.sense) {
      case Sense::Equal: v = std::abs(lhs - r.rhs); break;
      case Sense::LessEqual: v = lhs - r.rhs; break;
      case Sense::GreaterEqual: v = r.rhs - lhs; break;
    }
    note(rep, r.family, v);
  }
  for (const QuadraticRow& r : prog.quadratic_rows())
    note(rep, r.family, eval_quadratic(r.quad, x) + eval_linear(r.linear, x) - r.rhs);
  for (const RotatedCone& c : prog.cones()) {
    double z2 = 0;
    for (const AffineExpr& e : c.z) z2 += e.eval(x) * e.eval(x);
    const double u = c.u.eval(x), w = c.w.eval(x);
    note(rep, c.family, std::max({z2 - u * w, -u, -w}));
  }
  close(rep, tol);
  return rep;
}

ResidualReport certify_solution(const NlpProgram& prog, std::span<const double> x, double tol) {
  ResidualReport rep;
  std::vector<double> lo, hi;
  prog.variable_bounds(lo, hi);
  for (int j = 0; j < prog.num_variables(); ++j) note(rep, "bounds", std::max(lo[j] - x[j], x[j] - hi[j]));
  prog.constraint_bounds(lo, hi);
  std::vector<double> c(prog.num_constraints());
  prog.constraints(x, c);
  for (int i = 0; i < prog.num_constraints(); ++i) note(rep, prog.constraint_family(i), std::max(lo[i] - c[i], c[i] - hi[i]));
  close(rep, tol);
  return rep;
}

}  // namespace opfrelax
