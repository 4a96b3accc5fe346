#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opfrelax/conic_program.hpp"
#include "opfrelax/network.hpp"
#include "opfrelax/solution.hpp"

namespace opfrelax {

/// Thrown when a formulation does not apply to a network (copper plate on a
/// network with negative series resistance).
class NotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RelaxationKind { Soc, Qc, CopperPlate };
enum class Variant { W, C };

Variant parse_variant(const std::string& s);
std::string relaxation_name(RelaxationKind kind, Variant variant);

/// Variable ids inside a built relaxation. Per-bus vectors are indexed by
/// bus position, per-branch vectors by branch position, per-generator
/// vectors by generator position. Vectors that do not apply are empty.
/// w_re/w_im hold W_ij = V_i conj(V_j) for (from, to), before the phase shift.
struct RelaxationLayout {
  std::vector<int> w_diag;
  std::vector<int> w_re, w_im;
  std::vector<int> p_from, q_from, p_to, q_to;
  std::vector<int> pg, qg;
  std::vector<int> current_sq;  // C variant: l on the from side
  std::vector<int> v, theta;    // QC only
  std::vector<int> vv, cs, sn;  // QC only, per branch
};

struct BuiltRelaxation {
  ConicProgram program;
  RelaxationLayout layout;
  RelaxationKind kind = RelaxationKind::Soc;
  Variant variant = Variant::W;

  std::string name() const { return relaxation_name(kind, variant); }
};

BuiltRelaxation build_soc(const Network& net, Variant variant);
BuiltRelaxation build_qc(const Network& net, Variant variant);
/// Throws NotApplicable when any branch has r < 0.
BuiltRelaxation build_copper_plate(const Network& net);
BuiltRelaxation build_relaxation(const Network& net, RelaxationKind kind, Variant variant);

/// A point of the nonconvex problem in polar form (per-unit, radians).
struct AcPoint {
  std::vector<double> v, theta, pg, qg;
};

/// Maps an AC point into the variable space of a relaxation: W = V V^*,
/// flows, currents and envelope auxiliaries evaluated exactly.
std::vector<double> lift_ac_point(const BuiltRelaxation& rel, const Network& net, const AcPoint& point);

/// Smooth nonlinear program: min f(x) s.t. c_lo <= c(x) <= c_hi,
/// x_lo <= x <= x_hi. Derivatives are sparse; the Hessian of the Lagrangian
/// sigma f + lambda' c is given on its lower triangle (row >= col).
class NlpProgram {
 public:
  virtual ~NlpProgram() = default;

  virtual int num_variables() const = 0;
  virtual int num_constraints() const = 0;
  virtual void variable_bounds(std::vector<double>& lo, std::vector<double>& hi) const = 0;
  virtual void constraint_bounds(std::vector<double>& lo, std::vector<double>& hi) const = 0;
  virtual std::vector<double> start_point(StartRule rule) const = 0;

  virtual double objective(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> g) const = 0;
  virtual void constraints(std::span<const double> x, std::span<double> c) const = 0;

  virtual const std::vector<std::pair<int, int>>& jacobian_structure() const = 0;
  virtual void jacobian(std::span<const double> x, std::span<double> values) const = 0;
  virtual const std::vector<std::pair<int, int>>& hessian_structure() const = 0;
  virtual void hessian(std::span<const double> x, double sigma, std::span<const double> lambda,
                       std::span<double> values) const = 0;

  virtual std::string constraint_family(int row) const = 0;
  virtual std::string variable_name(int col) const = 0;
};

/// Polar AC-OPF. Variables: v, theta per bus; pg, qg per generator; p, q
/// per branch in both directions. Rows: KCL (p then q per bus), flow
/// definitions (4 per branch), angle differences (1 per branch), thermal
/// limits (2 per branch with finite rating).
class AcOpfProgram : public NlpProgram {
 public:
  explicit AcOpfProgram(const Network& net);

  int num_variables() const override { return num_vars_; }
  int num_constraints() const override { return static_cast<int>(family_.size()); }
  void variable_bounds(std::vector<double>& lo, std::vector<double>& hi) const override;
  void constraint_bounds(std::vector<double>& lo, std::vector<double>& hi) const override;
  std::vector<double> start_point(StartRule rule) const override;

  double objective(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> g) const override;
  void constraints(std::span<const double> x, std::span<double> c) const override;

  const std::vector<std::pair<int, int>>& jacobian_structure() const override { return jac_; }
  void jacobian(std::span<const double> x, std::span<double> values) const override;
  const std::vector<std::pair<int, int>>& hessian_structure() const override { return hess_; }
  void hessian(std::span<const double> x, double sigma, std::span<const double> lambda,
               std::span<double> values) const override;

  std::string constraint_family(int row) const override { return family_[row]; }
  std::string variable_name(int col) const override;

  const Network& network() const { return net_; }
  int v_index(int bus) const { return bus; }
  int theta_index(int bus) const { return nb_ + bus; }
  int pg_index(int gen) const { return 2 * nb_ + gen; }
  int qg_index(int gen) const { return 2 * nb_ + ng_ + gen; }
  /// k = 0: p_from, 1: q_from, 2: p_to, 3: q_to.
  int flow_index(int branch, int k) const { return 2 * nb_ + 2 * ng_ + 4 * branch + k; }

  AcPoint point(std::span<const double> x) const;
  std::vector<double> from_point(const AcPoint& p) const;

  /// Flow expression coefficients: f = a vi^2 + b vj^2 + vi vj (c cos d + s sin d),
  /// with d = theta_i - theta_j - shift.
  struct FlowCoef {
    double a, b, c, s;
  };
  static FlowCoef flow_coefficients(const Branch& br, int k);

 private:
  struct BranchData {
    int i, j;
    double shift;
    FlowCoef f[4];
  };

  Network net_;
  int nb_ = 0, ng_ = 0, nl_ = 0, num_vars_ = 0;
  std::vector<BranchData> branch_;
  std::vector<int> thermal_branch_;  // branch of each thermal row pair
  int kcl_row_ = 0, flow_row_ = 0, angle_row_ = 0, thermal_row_ = 0;
  std::vector<std::string> family_;
  std::vector<std::pair<int, int>> jac_, hess_;
  std::vector<std::vector<int>> hess_branch_;  // per branch: 10 slots over (vi, vj, ti, tj)
  std::vector<int> hess_v_diag_;               // per bus
  std::vector<int> hess_pg_diag_;              // per generator
  std::vector<int> hess_flow_diag_;            // per flow variable
};

AcOpfProgram build_ac(const Network& net);

/// Evaluates the polar flow at the given voltages (k as in flow_index).
double ac_flow(const Branch& br, int k, double vi, double vj, double ti, double tj);

/// SDP relaxation over the real embedding [Re W, -Im W; Im W, Re W] of a
/// dense Hermitian W, in SDPA sparse form: minimize c'x subject to
/// sum_k F_k x_k - F_0 PSD. Block sizes are negative for diagonal blocks.
struct SdpExport {
  struct Entry {
    int matrix;  // 0 for F_0
    int block;   // 1-based
    int i, j;    // 1-based, i <= j
    double value;
  };
  std::vector<std::string> variable_names;
  std::vector<int> block_sizes;
  std::vector<double> objective;
  std::vector<Entry> entries;
  double objective_offset = 0;

  std::string to_sdpa() const;
};

SdpExport export_sdp(const Network& net);
/// Writes to_sdpa() to path. Throws std::runtime_error on I/O failure.
SdpExport export_sdp(const Network& net, const std::filesystem::path& path);

}  // namespace opfrelax
