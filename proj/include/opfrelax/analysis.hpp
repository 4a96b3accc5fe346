#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opfrelax/formulations.hpp"
#include "opfrelax/report.hpp"
#include "opfrelax/solvers.hpp"

namespace opfrelax {

/// 100 (heuristic - bound) / heuristic. Throws std::invalid_argument when
/// heuristic <= 0.
double optimality_gap(double heuristic, double bound);

/// One branch, two end voltages. In plain mode tap and charging are ignored.
struct IdentitySample {
  Complex vi{1, 0};
  Complex vj{1, 0};
  Complex z{0.01, 0.1};  // series impedance, |z| > 0
  Complex tap{1, 0};     // |tap| > 0
  double b_charge = 0;
};

/// Magnitudes in [0.9, 1.1], angles in [-0.5, 0.5] rad, r in [0.001, 0.1],
/// x in [0.01, 1]. Extended samples add tap magnitude in [0.9, 1.1], shift in
/// [-5, 5] degrees and charging in [0, 0.7].
IdentitySample random_identity_sample(std::mt19937_64& rng, bool extended);

/// Relative error of each identity: |sum of terms| / sum of |terms|, with the
/// left-hand side (computed from V and Ohm's law) moved into the sum.
struct IdentityCheck {
  double error[4] = {0, 0, 0, 0};
  double max_error() const;
};

/// Identities, in order: absolute square of power, absolute square of the
/// voltage product, absolute square of current, voltage drop.
IdentityCheck check_lemma1(const IdentitySample& s, bool extended);

/// Maximum error over `samples` random samples; 0 when samples == 0.
/// `perturb` is added to every error (fault injection for tests).
double lemma1_suite(int samples, std::uint64_t seed, bool extended, double perturb = 0);

/// A point of one SOC/QC variant carried into the other variant's space.
struct MappedPoint {
  std::vector<double> x;
  double objective = 0;
  ResidualReport residuals;
};

/// W to C: copies shared variables and assigns the squared current
/// l = |Y|^2 (W_ii/t^2 - 2 Re(W_ij/T) + W_jj) - (b/2)^2 W_ii/t^2 - b q_ij.
/// Throws std::invalid_argument if `from` is infeasible beyond tol.
MappedPoint map_w_to_c(const Network& net, const BuiltRelaxation& from, std::span<const double> x, const BuiltRelaxation& to,
                       double tol = 1e-8);
/// C to W: drops l and certifies the W cone.
MappedPoint map_c_to_w(const Network& net, const BuiltRelaxation& from, std::span<const double> x, const BuiltRelaxation& to,
                       double tol = 1e-8);

/// Copy of `base` with every branch given a tap magnitude in [0.9, 1.1], a
/// shift in [-5, 5] degrees and charging in [0, 0.7], and every bus a nonzero
/// shunt (g in [0.001, 0.02], |b| in [0.01, 0.1]).
Network random_extended_network(const Network& base, std::mt19937_64& rng);

/// W and C variants of one relaxation solved and mapped both ways.
struct EquivalenceResult {
  std::string name;  // "SOC" or "QC"
  std::optional<double> w_objective, c_objective;
  double relative_difference = 0;
  double w_to_c_residual = 0;  // C-variant violation at the mapped W optimum
  double c_to_w_residual = 0;
  std::string error;  // solve or mapping failure
  bool pass(double objective_tol = 1e-6, double residual_tol = 1e-8) const;
};

EquivalenceResult equivalence_check(const Network& net, RelaxationKind kind, const SolverConfig& cfg = {});

struct DominanceReport {
  std::optional<double> cp, soc, qc, ac;
  std::optional<double> sdp;  // external value, if supplied
  double epsilon = 0;
  bool cp_le_soc = true;
  bool soc_le_qc = true;
  bool qc_le_ac = true;
  /// SOC <= SDP <= AC, up to epsilon; true when no SDP value is given.
  bool sdp_ge_soc = true;
  std::vector<std::string> failures;  // solves that did not finish
  bool ok() const { return cp_le_soc && soc_le_qc && qc_le_ac && sdp_ge_soc && failures.empty(); }
};

DominanceReport dominance_suite(const Network& net, const SolverConfig& cfg = {},
                                std::optional<double> sdp_value = std::nullopt, Variant variant = Variant::W);

/// Largest residual of the relaxations (W/C x SOC/QC) at the lift of an AC point.
double containment_residual(const Network& net, const AcPoint& point);

struct RankOneResult {
  bool rank_one = false;
  bool psd = false;
  double ratio = 1;  // sigma_2 / sigma_1
  Eigen::VectorXcd v;
};

/// Throws std::invalid_argument for non-Hermitian input.
RankOneResult rank1_recover(const Eigen::MatrixXcd& w, double tol = 1e-6);

/// Per-branch 2x2 minors [W_ii W_ij; W_ij^* W_jj]; returns the worst ratio.
double worst_edge_ratio(const BuiltRelaxation& rel, const Network& net, std::span<const double> x);

/// Voltages rebuilt along a spanning tree from the relaxation's W values,
/// with the relaxation's generation.
AcPoint recover_ac_point(const BuiltRelaxation& rel, const Network& net, std::span<const double> x);

/// True when the recovered point satisfies the AC program to tol.
bool is_ac_feasible(const BuiltRelaxation& rel, const Network& net, std::span<const double> x, double tol = 1e-6);

struct BenchRow {
  std::string case_name;
  std::string formulation;
  double median_seconds = 0;
  int iterations = 0;
  SolveStatus status = SolveStatus::IterationLimit;
};

/// Median wall time of W-SOC, C-SOC, W-QC and C-QC; empty for repetitions 0.
std::vector<BenchRow> bench_wc(const Network& net, int repetitions, const SolverConfig& cfg = {});
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Requested relaxations for run_case: "soc", "qc", "cp".
struct RunOptions {
  std::vector<std::string> relaxations{"soc", "qc", "cp"};
  Variant variant = Variant::W;
  SolverConfig solver;
};

std::vector<std::string> parse_relaxation_list(const std::string& csv);

/// Local AC solve plus every requested relaxation. Solver failures are
/// recorded in the report, not thrown.
GapReport run_case(const Network& net, const RunOptions& opt);

}  // namespace opfrelax
