#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "opfrelax/conic_program.hpp"
#include "opfrelax/formulations.hpp"
#include "opfrelax/solution.hpp"

namespace opfrelax {

/// Primal-dual interior point method with Nesterov-Todd scaling and
/// Mehrotra correction. The program is rewritten as
///   min 1/2 x'Px + q'x  s.t.  Ax = b,  Gx + s = h,  s in R+^l x SOC x ...
/// with rows equilibrated and the objective scaled. Deterministic.
Solution solve_conic(const ConicProgram& prog, const SolverConfig& cfg = {});

/// Local primal-dual barrier method for smooth nonconvex programs, with
/// inertia correction, an l1 merit line search and an l1 feasibility
/// restoration phase. Finds a KKT point only; there is no global guarantee.
Solution solve_local_ac(const NlpProgram& prog, std::span<const double> start, const SolverConfig& cfg = {});
/// Starts from prog.start_point(cfg.start).
Solution solve_local_ac(const NlpProgram& prog, const SolverConfig& cfg = {});

/// Largest violation per constraint family ("bounds" covers variable
/// bounds). Equality violations are absolute; inequality violations are
/// the positive part; a cone ||z||^2 <= u w reports max(||z||^2 - u w, -u, -w).
struct ResidualReport {
  std::map<std::string, double> by_family;
  double max_violation = 0;
  std::string worst_family;
  double tolerance = 0;
  bool pass = true;
};

ResidualReport certify_solution(const ConicProgram& prog, std::span<const double> x, double tol);
ResidualReport certify_solution(const NlpProgram& prog, std::span<const double> x, double tol);
inline ResidualReport certify_solution(const ConicProgram& prog, const Solution& sol, double tol) {
  return certify_solution(prog, std::span<const double>(sol.x), tol);
}
inline ResidualReport certify_solution(const NlpProgram& prog, const Solution& sol, double tol) {
  return certify_solution(prog, std::span<const double>(sol.x), tol);
}

}  // namespace opfrelax
