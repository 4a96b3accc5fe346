#include "opfrelax/conic_program.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace opfrelax {

double AffineExpr::eval(std::span<const double> x) const { return eval_linear(terms, x) + constant; }

double eval_linear(const std::vector<Term>& terms, std::span<const double> x) {
  double s = 0;
  for (const Term& t : terms) s += t.coef * x[t.var];
  return s;
}

double eval_quadratic(const std::vector<QuadTerm>& quad, std::span<const double> x) {
  double s = 0;
  for (const QuadTerm& q : quad) s += q.coef * x[q.i] * x[q.j];
  return s;
}

PsdFactor factor_psd(const std::vector<QuadTerm>& quad, double tol) {
  PsdFactor out;
  std::map<int, int> local;
  for (const QuadTerm& q : quad) {
    local.emplace(q.i, 0);
    local.emplace(q.j, 0);
  }
  int k = 0;
  for (auto& [var, idx] : local) {
    idx = k++;
    out.support.push_back(var);
  }
  const int n = k;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (const QuadTerm& q : quad) {
    const int a = local[q.i], b = local[q.j];
    if (a == b) {
      Q(a, a) += q.coef;
    } else {
      Q(a, b) += 0.5 * q.coef;
      Q(b, a) += 0.5 * q.coef;
    }
  }
  if (n == 0) {
    out.factor.resize(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  if (lam.minCoeff() < -tol * scale) throw std::invalid_argument("quadratic form is not positive semidefinite");
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (lam(i) > tol * scale) keep.push_back(i);
  out.factor.resize(static_cast<Eigen::Index>(keep.size()), n);
  for (std::size_t r = 0; r < keep.size(); ++r)
    out.factor.row(static_cast<Eigen::Index>(r)) = std::sqrt(lam(keep[r])) * eig.eigenvectors().col(keep[r]).transpose();
  return out;
}

int ConicProgram::add_variable(std::string name, double lower, double upper, double start) {
  if (!(lower <= upper)) throw std::invalid_argument("variable '" + name + "': lower bound exceeds upper bound");
  variables_.push_back({std::move(name), lower, upper, start});
  return static_cast<int>(variables_.size()) - 1;
}

void ConicProgram::check_ids(const std::vector<Term>& terms) const {
  for (const Term& t : terms)
    if (t.var < 0 || t.var >= num_variables()) throw std::out_of_range("term references unknown variable");
}

void ConicProgram::add_linear(std::string family, std::vector<Term> terms, Sense sense, double rhs) {
  check_ids(terms);
  linear_.push_back({std::move(family), std::move(terms), sense, rhs});
}

void ConicProgram::add_quadratic(std::string family, std::vector<QuadTerm> quad, std::vector<Term> linear, double rhs) {
  check_ids(linear);
  for (const QuadTerm& q : quad)
    if (q.i < 0 || q.j < 0 || q.i >= num_variables() || q.j >= num_variables())
      throw std::out_of_range("quadratic term references unknown variable");
  factor_psd(quad);
  quadratic_.push_back({std::move(family), std::move(quad), std::move(linear), rhs});
}

void ConicProgram::add_rotated_cone(std::string family, std::vector<AffineExpr> z, AffineExpr u, AffineExpr w) {
  for (const auto& e : z) check_ids(e.terms);
  check_ids(u.terms);
  check_ids(w.terms);
  cones_.push_back({std::move(family), std::move(z), std::move(u), std::move(w)});
}

void ConicProgram::set_objective(QuadraticObjective objective) {
  check_ids(objective.linear);
  factor_psd(objective.quad);
  objective_ = std::move(objective);
}

double ConicProgram::objective_value(std::span<const double> x) const {
  return eval_quadratic(objective_.quad, x) + eval_linear(objective_.linear, x) + objective_.constant;
}

std::vector<double> ConicProgram::start_point() const {
  std::vector<double> x;
  x.reserve(variables_.size());
  for (const auto& v : variables_) x.push_back(v.start);
  return x;
}

int ConicProgram::count_family(const std::string& family) const {
  int n = 0;
  for (const auto& r : linear_) n += (r.family == family);
  for (const auto& r : quadratic_) n += (r.family == family);
  for (const auto& r : cones_) n += (r.family == family);
  return n;
}

}  // namespace opfrelax
