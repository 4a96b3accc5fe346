#pragma once

#include <string>
#include <vector>

namespace opfrelax {

enum class SolveStatus {
  Optimal,
  IterationLimit,
  NumericWarning,
  InfeasibleDetected,
  RestorationFailure,
};

std::string to_string(SolveStatus s);

enum class StartRule {
  /// Least-squares primal/dual start shifted into the cone interior (conic),
  /// or the caller-provided point pushed inside its bounds (nonlinear).
  Default,
  /// Ignore any provided point: v = 1, theta = 0, generation = load share.
  Flat,
};

struct SolverConfig {
  double feasibility_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iterations = 200;
  /// Fraction-to-boundary for interior steps, in (0, 1).
  double step_fraction = 0.99;
  /// Monotone barrier schedule: mu <- max(tol/10, min(linear * mu, mu^superlinear)).
  double barrier_linear = 0.2;
  double barrier_superlinear = 1.5;
  StartRule start = StartRule::Default;
  /// Record one IterateRecord per iteration in Solution::trace.
  bool record_trace = false;
};

/// Throws std::invalid_argument when a field is out of range.
void check_config(const SolverConfig& cfg);

struct IterateRecord {
  int iteration = 0;
  double primal_objective = 0;
  double dual_objective = 0;
  double primal_residual = 0;
  double dual_residual = 0;
  double complementarity = 0;
  double step = 0;
};

struct Solution {
  std::vector<double> x;
  /// Objective in $/h (program units, including constants).
  double objective = 0;
  double dual_objective = 0;
  SolveStatus status = SolveStatus::IterationLimit;
  double primal_residual = 0;
  double dual_residual = 0;
  double complementarity = 0;
  int iterations = 0;
  double seconds = 0;
  std::vector<IterateRecord> trace;

  bool optimal() const { return status == SolveStatus::Optimal; }
};

}  // namespace opfrelax
