#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace opfrelax {

struct Term {
  int var = 0;
  double coef = 0;
};

/// coef * x_i * x_j; i == j gives a square term.
struct QuadTerm {
  int i = 0;
  int j = 0;
  double coef = 0;
};

struct AffineExpr {
  std::vector<Term> terms;
  double constant = 0;

  double eval(std::span<const double> x) const;
};

enum class Sense { LessEqual, GreaterEqual, Equal };

struct VariableInfo {
  std::string name;
  double lower = 0;
  double upper = 0;
  double start = 0;
};

struct LinearRow {
  std::string family;
  std::vector<Term> terms;
  Sense sense = Sense::Equal;
  double rhs = 0;
};

/// x'Qx + a'x <= rhs with Q positive semidefinite.
struct QuadraticRow {
  std::string family;
  std::vector<QuadTerm> quad;
  std::vector<Term> linear;
  double rhs = 0;
};

/// ||z||^2 <= u * w with u, w >= 0.
struct RotatedCone {
  std::string family;
  std::vector<AffineExpr> z;
  AffineExpr u;
  AffineExpr w;
};

/// x'Qx + c'x + constant with Q positive semidefinite.
struct QuadraticObjective {
  std::vector<QuadTerm> quad;
  std::vector<Term> linear;
  double constant = 0;
};

/// Factor of a PSD quadratic form restricted to its support: x'Qx = ||F x_S||^2.
struct PsdFactor {
  std::vector<int> support;
  Eigen::MatrixXd factor;  // rank x |support|
};

/// Returns the factor, or throws std::invalid_argument if the form has an
/// eigenvalue below -tol * max(1, ||Q||).
PsdFactor factor_psd(const std::vector<QuadTerm>& quad, double tol = 1e-10);

double eval_quadratic(const std::vector<QuadTerm>& quad, std::span<const double> x);
double eval_linear(const std::vector<Term>& terms, std::span<const double> x);

/// Language-neutral convex program: bounded variables, linear rows, convex
/// quadratic rows, rotated second-order cones and a convex quadratic
/// objective. Every quadratic form is checked for positive semidefiniteness
/// when added. Variable ids are dense, in insertion order.
class ConicProgram {
 public:
  int add_variable(std::string name, double lower, double upper, double start = 0);
  void add_linear(std::string family, std::vector<Term> terms, Sense sense, double rhs);
  void add_quadratic(std::string family, std::vector<QuadTerm> quad, std::vector<Term> linear, double rhs);
  void add_rotated_cone(std::string family, std::vector<AffineExpr> z, AffineExpr u, AffineExpr w);
  void set_objective(QuadraticObjective objective);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  const std::vector<VariableInfo>& variables() const { return variables_; }
  const std::vector<LinearRow>& linear_rows() const { return linear_; }
  const std::vector<QuadraticRow>& quadratic_rows() const { return quadratic_; }
  const std::vector<RotatedCone>& cones() const { return cones_; }
  const QuadraticObjective& objective() const { return objective_; }

  double objective_value(std::span<const double> x) const;
  std::vector<double> start_point() const;

  /// Count of constraints (linear rows, quadratic rows and cones) whose
  /// family equals the given tag.
  int count_family(const std::string& family) const;

 private:
  void check_ids(const std::vector<Term>& terms) const;

  std::vector<VariableInfo> variables_;
  std::vector<LinearRow> linear_;
  std::vector<QuadraticRow> quadratic_;
  std::vector<RotatedCone> cones_;
  QuadraticObjective objective_;
};

}  // namespace opfrelax
