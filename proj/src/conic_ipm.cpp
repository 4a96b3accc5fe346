#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "opfrelax/solvers.hpp"

namespace opfrelax {

namespace {

using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Standard form: min 1/2 x'Px + q'x  s.t.  Ax = b, Gx + s = h, s in K.
/// G rows: first `l` orthant rows, then one block per cone in cone_dims.
struct StandardForm {
  int n = 0;
  SpMat P, A, G;
  VectorXd q, b, h;
  int l = 0;
  std::vector<int> cone_dims;
  double obj_scale = 1;
};

class FormBuilder {
 public:
  explicit FormBuilder(int n) : n_(n) {}

  void equality(std::vector<Term> terms, double rhs) {
    double m = 0;
    for (const Term& t : terms) m = std::max(m, std::abs(t.coef));
    if (m == 0) m = 1;
    for (const Term& t : terms) a_.emplace_back(p_, t.var, t.coef / m);
    b_.push_back(rhs / m);
    ++p_;
  }

  /// a'x <= rhs.
  void inequality(const std::vector<Term>& terms, double rhs) {
    double m = 0;
    for (const Term& t : terms) m = std::max(m, std::abs(t.coef));
    if (m == 0) m = 1;
    std::vector<std::pair<int, double>> row;
    for (const Term& t : terms) row.emplace_back(t.var, t.coef / m);
    lp_.push_back({std::move(row), rhs / m});
  }

  /// s = h - G x in SOC, one row per entry; each row is (terms of G, h).
  void cone(std::vector<std::pair<std::vector<Term>, double>> rows) {
    double m = 0;
    for (const auto& r : rows)
      for (const Term& t : r.first) m = std::max(m, std::abs(t.coef));
    if (m == 0) m = 1;
    Block blk;
    for (auto& r : rows) {
      std::vector<std::pair<int, double>> row;
      for (const Term& t : r.first) row.emplace_back(t.var, t.coef / m);
      blk.push_back({std::move(row), r.second / m});
    }
    cones_.push_back(std::move(blk));
  }

  StandardForm finish(const QuadraticObjective& obj) {
    StandardForm f;
    f.n = n_;
    double m = 0;
    for (const QuadTerm& t : obj.quad) m = std::max(m, std::abs(t.coef) * (t.i == t.j ? 2 : 1));
    for (const Term& t : obj.linear) m = std::max(m, std::abs(t.coef));
    f.obj_scale = m > 0 ? 1 / m : 1;
    std::vector<Triplet> pt;
    for (const QuadTerm& t : obj.quad) {
      if (t.i == t.j) {
        pt.emplace_back(t.i, t.i, 2 * t.coef * f.obj_scale);
      } else {
        pt.emplace_back(t.i, t.j, t.coef * f.obj_scale);
        pt.emplace_back(t.j, t.i, t.coef * f.obj_scale);
      }
    }
    f.P.resize(n_, n_);
    f.P.setFromTriplets(pt.begin(), pt.end());
    f.q = VectorXd::Zero(n_);
    for (const Term& t : obj.linear) f.q(t.var) += t.coef * f.obj_scale;

    f.A.resize(p_, n_);
    f.A.setFromTriplets(a_.begin(), a_.end());
    f.b = Eigen::Map<VectorXd>(b_.data(), p_);

    std::vector<Triplet> gt;
    std::vector<double> h;
    int row = 0;
    for (const auto& r : lp_) {
      for (auto [c, v] : r.first) gt.emplace_back(row, c, v);
      h.push_back(r.second);
      ++row;
    }
    f.l = row;
    for (const auto& blk : cones_) {
      f.cone_dims.push_back(static_cast<int>(blk.size()));
      for (const auto& r : blk) {
        for (auto [c, v] : r.first) gt.emplace_back(row, c, v);
        h.push_back(r.second);
        ++row;
      }
    }
    f.G.resize(row, n_);
    f.G.setFromTriplets(gt.begin(), gt.end());
    f.h = Eigen::Map<VectorXd>(h.data(), row);
    return f;
  }

 private:
  using Row = std::pair<std::vector<std::pair<int, double>>, double>;
  using Block = std::vector<Row>;
  int n_;
  int p_ = 0;
  std::vector<Triplet> a_;
  std::vector<double> b_;
  std::vector<Row> lp_;
  std::vector<Block> cones_;
};

std::vector<Term> negated(const std::vector<Term>& t) {
  std::vector<Term> out = t;
  for (Term& x : out) x.coef = -x.coef;
  return out;
}

StandardForm to_standard_form(const ConicProgram& prog) {
  FormBuilder fb(prog.num_variables());
  const auto& vars = prog.variables();
  for (int j = 0; j < prog.num_variables(); ++j) {
    const VariableInfo& v = vars[j];
    if (v.lower == v.upper) {
      fb.equality({{j, 1.0}}, v.lower);
      continue;
    }
    if (std::isfinite(v.lower)) fb.inequality({{j, -1.0}}, -v.lower);
    if (std::isfinite(v.upper)) fb.inequality({{j, 1.0}}, v.upper);
  }
  for (const LinearRow& r : prog.linear_rows()) {
    switch (r.sense) {
      case Sense::Equal: fb.equality(r.terms, r.rhs); break;
      case Sense::LessEqual: fb.inequality(r.terms, r.rhs); break;
      case Sense::GreaterEqual: fb.inequality(negated(r.terms), -r.rhs); break;
    }
  }
  for (const QuadraticRow& r : prog.quadratic_rows()) {
    const PsdFactor pf = factor_psd(r.quad);
    const auto rank = pf.factor.rows();
    std::vector<std::pair<std::vector<Term>, double>> rows;
    auto factor_row = [&](Eigen::Index k, double scale) {
      std::vector<Term> t;
      for (std::size_t c = 0; c < pf.support.size(); ++c) {
        const double v = pf.factor(k, static_cast<Eigen::Index>(c));
        if (v != 0) t.push_back({pf.support[c], -scale * v});
      }
      return t;
    };
    if (r.linear.empty() && r.rhs >= 0) {
      // ||F x|| <= sqrt(rhs)
      rows.push_back({{}, std::sqrt(r.rhs)});
      for (Eigen::Index k = 0; k < rank; ++k) rows.push_back({factor_row(k, 1.0), 0.0});
    } else {
      // ||(2 F x, 1 - rho)|| <= 1 + rho with rho = rhs - a'x
      rows.push_back({r.linear, 1 + r.rhs});
      for (Eigen::Index k = 0; k < rank; ++k) rows.push_back({factor_row(k, 2.0), 0.0});
      rows.push_back({negated(r.linear), 1 - r.rhs});
    }
    fb.cone(std::move(rows));
  }
  for (const RotatedCone& c : prog.cones()) {
    // ||(2 z, u - w)|| <= u + w
    std::vector<std::pair<std::vector<Term>, double>> rows;
    std::vector<Term> sum, diff;
    for (const Term& t : c.u.terms) {
      sum.push_back({t.var, -t.coef});
      diff.push_back({t.var, -t.coef});
    }
    for (const Term& t : c.w.terms) {
      sum.push_back({t.var, -t.coef});
      diff.push_back({t.var, t.coef});
    }
    rows.push_back({sum, c.u.constant + c.w.constant});
    for (const AffineExpr& z : c.z) {
      std::vector<Term> t;
      for (const Term& x : z.terms) t.push_back({x.var, -2 * x.coef});
      rows.push_back({t, 2 * z.constant});
    }
    rows.push_back({diff, c.u.constant - c.w.constant});
    fb.cone(std::move(rows));
  }
  return fb.finish(prog.objective());
}

/// Cone arithmetic over R+^l x SOC blocks.
class Cone {
 public:
  Cone(int l, std::vector<int> dims) : l_(l), dims_(std::move(dims)) {
    int off = l_;
    for (int d : dims_) {
      offset_.push_back(off);
      off += d;
    }
    m_ = off;
    beta_.resize(dims_.size());
    wbar_ = VectorXd::Zero(m_);
    d_ = VectorXd::Zero(l_);
  }

  int size() const { return m_; }
  int degree() const { return l_ + static_cast<int>(dims_.size()); }
  int blocks() const { return static_cast<int>(dims_.size()); }
  int offset(int k) const { return offset_[k]; }
  int dim(int k) const { return dims_[k]; }
  int orthant() const { return l_; }

  static double jnorm2(const VectorXd& u, int off, int dim) {
    return u(off) * u(off) - u.segment(off + 1, dim - 1).squaredNorm();
  }

  VectorXd identity() const {
    VectorXd e = VectorXd::Zero(m_);
    e.head(l_).setOnes();
    for (int k = 0; k < blocks(); ++k) e(offset_[k]) = 1;
    return e;
  }

  /// Smallest t with u + t e in K.
  double max_eig_neg(const VectorXd& u) const {
    double t = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < l_; ++i) t = std::max(t, -u(i));
    for (int k = 0; k < blocks(); ++k) {
      const int o = offset_[k];
      t = std::max(t, u.segment(o + 1, dims_[k] - 1).norm() - u(o));
    }
    return t;
  }

  /// Largest alpha with u + alpha d in K (infinity if unbounded).
  double max_step(const VectorXd& u, const VectorXd& d) const {
    double a = std::numeric_limits<double>::infinity();
    for (int i = 0; i < l_; ++i)
      if (d(i) < 0) a = std::min(a, -u(i) / d(i));
    for (int k = 0; k < blocks(); ++k) {
      const int o = offset_[k], n = dims_[k];
      const double qa = jnorm2(d, o, n);
      const double qb = u(o) * d(o) - u.segment(o + 1, n - 1).dot(d.segment(o + 1, n - 1));
      const double qc = std::max(jnorm2(u, o, n), 0.0);
      // Smallest positive root of qa t^2 + 2 qb t + qc.
      double root = std::numeric_limits<double>::infinity();
      if (std::abs(qa) <= 1e-300) {
        if (qb < 0) root = -qc / (2 * qb);
      } else {
        const double disc = qb * qb - qa * qc;
        if (disc >= 0) {
          const double sq = std::sqrt(disc);
          const double r1 = (-qb - (qb >= 0 ? sq : -sq)) / qa;
          const double r2 = r1 != 0 ? qc / (qa * r1) : std::numeric_limits<double>::infinity();
          for (double r : {r1, r2})
            if (r > 0) root = std::min(root, r);
        }
      }
      a = std::min(a, root);
    }
    return a;
  }

  /// Nesterov-Todd scaling at (s, z); returns lambda = W z = W^{-1} s.
  VectorXd set_scaling(const VectorXd& s, const VectorXd& z) {
    VectorXd lam(m_);
    for (int i = 0; i < l_; ++i) {
      d_(i) = std::sqrt(s(i) / z(i));
      lam(i) = std::sqrt(s(i) * z(i));
    }
    for (int k = 0; k < blocks(); ++k) {
      const int o = offset_[k], n = dims_[k];
      const double js = std::sqrt(std::max(jnorm2(s, o, n), 1e-300));
      const double jz = std::sqrt(std::max(jnorm2(z, o, n), 1e-300));
      const VectorXd sb = s.segment(o, n) / js;
      const VectorXd zb = z.segment(o, n) / jz;
      const double gamma = std::sqrt(std::max((1 + sb.dot(zb)) / 2, 1e-300));
      VectorXd w(n);
      w(0) = (sb(0) + zb(0)) / (2 * gamma);
      w.tail(n - 1) = (sb.tail(n - 1) - zb.tail(n - 1)) / (2 * gamma);
      // Renormalize so that J(w) = 1 exactly.
      const double jw = w(0) * w(0) - w.tail(n - 1).squaredNorm();
      if (jw > 0) w /= std::sqrt(jw);
      wbar_.segment(o, n) = w;
      beta_[k] = std::sqrt(js / jz);
    }
    lam.tail(m_ - l_) = apply_w(z).tail(m_ - l_);
    return lam;
  }

  VectorXd apply_w(const VectorXd& v) const { return apply(v, false); }
  VectorXd apply_winv(const VectorXd& v) const { return apply(v, true); }

  /// Lower triangle of -W'W appended at (row0 + i, row0 + j).
  void append_neg_w2(std::vector<Triplet>& t, int row0, double reg) const {
    for (int i = 0; i < l_; ++i) t.emplace_back(row0 + i, row0 + i, -d_(i) * d_(i) - reg);
    for (int k = 0; k < blocks(); ++k) {
      const int o = offset_[k], n = dims_[k];
      const double b2 = beta_[k] * beta_[k];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
          double v = 2 * wbar_(o + i) * wbar_(o + j);
          if (i == j) v -= (i == 0 ? 1.0 : -1.0);
          t.emplace_back(row0 + o + i, row0 + o + j, -b2 * v - (i == j ? reg : 0.0));
        }
    }
  }

  VectorXd product(const VectorXd& u, const VectorXd& v) const {
    VectorXd r(m_);
    for (int i = 0; i < l_; ++i) r(i) = u(i) * v(i);
    for (int k = 0; k < blocks(); ++k) {
      const int o = offset_[k], n = dims_[k];
      r(o) = u.segment(o, n).dot(v.segment(o, n));
      r.segment(o + 1, n - 1) = u(o) * v.segment(o + 1, n - 1) + v(o) * u.segment(o + 1, n - 1);
    }
    return r;
  }

  /// x with lam o x = r.
  VectorXd divide(const VectorXd& lam, const VectorXd& r) const {
    VectorXd x(m_);
    for (int i = 0; i < l_; ++i) x(i) = r(i) / lam(i);
    for (int k = 0; k < blocks(); ++k) {
      const int o = offset_[k], n = dims_[k];
      const double jl = jnorm2(lam, o, n);
      const double x0 = (lam(o) * r(o) - lam.segment(o + 1, n - 1).dot(r.segment(o + 1, n - 1))) / jl;
      x(o) = x0;
      x.segment(o + 1, n - 1) = (r.segment(o + 1, n - 1) - x0 * lam.segment(o + 1, n - 1)) / lam(o);
    }
    return x;
  }

 private:
  VectorXd apply(const VectorXd& v, bool inverse) const {
    VectorXd r(m_);
    for (int i = 0; i < l_; ++i) r(i) = inverse ? v(i) / d_(i) : v(i) * d_(i);
    for (int k = 0; k < blocks(); ++k) {
      const int o = offset_[k], n = dims_[k];
      VectorXd w = wbar_.segment(o, n);
      if (inverse) w.tail(n - 1) *= -1;
      const auto seg = v.segment(o, n);
      const double wv = w.dot(seg);
      const double coef = (wv + seg(0)) / (1 + w(0));
      const double sc = inverse ? 1 / beta_[k] : beta_[k];
      r(o) = sc * wv;
      r.segment(o + 1, n - 1) = sc * (seg.tail(n - 1) + coef * w.tail(n - 1));
    }
    return r;
  }

  int l_;
  std::vector<int> dims_;
  std::vector<int> offset_;
  int m_ = 0;
  std::vector<double> beta_;
  VectorXd wbar_;
  VectorXd d_;
};

/// Quasidefinite KKT system [P+rI A' G'; A -rI 0; G 0 -W'W-rI] with a fixed
/// fill-reducing ordering computed once.
class KktSolver {
 public:
  KktSolver(const StandardForm& f, const Cone& cone) : f_(f), cone_(cone) {
    n_ = f.n;
    p_ = static_cast<int>(f.A.rows());
    m_ = static_cast<int>(f.G.rows());
    for (int c = 0; c < f.P.outerSize(); ++c)
      for (SpMat::InnerIterator it(f.P, c); it; ++it)
        if (it.row() >= it.col()) base_.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int c = 0; c < f.A.outerSize(); ++c)
      for (SpMat::InnerIterator it(f.A, c); it; ++it)
        base_.emplace_back(n_ + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int c = 0; c < f.G.outerSize(); ++c)
      for (SpMat::InnerIterator it(f.G, c); it; ++it)
        base_.emplace_back(n_ + p_ + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  }

  /// Factors for the current scaling. Returns false on breakdown.
  bool factor(double reg) {
    reg_ = reg;
    std::vector<Triplet> t = base_;
    for (int i = 0; i < n_; ++i) t.emplace_back(i, i, reg);
    for (int i = 0; i < p_; ++i) t.emplace_back(n_ + i, n_ + i, -reg);
    const std::size_t mark = t.size();
    cone_.append_neg_w2(t, n_ + p_, 0.0);
    // Exact matrix (for refinement) uses no regularization.
    exact_.resize(n_ + p_ + m_, n_ + p_ + m_);
    {
      std::vector<Triplet> te(base_);
      te.insert(te.end(), t.begin() + static_cast<long>(mark), t.end());
      for (int i = 0; i < n_ + p_; ++i) te.emplace_back(i, i, 0.0);
      exact_.setFromTriplets(te.begin(), te.end());
    }
    for (int i = 0; i < m_; ++i) t.emplace_back(n_ + p_ + i, n_ + p_ + i, -reg);
    K_.resize(n_ + p_ + m_, n_ + p_ + m_);
    K_.setFromTriplets(t.begin(), t.end());
    if (!analyzed_) {
      ldlt_.analyzePattern(K_);
      analyzed_ = true;
    }
    ldlt_.factorize(K_);
    return ldlt_.info() == Eigen::Success;
  }

  VectorXd solve(const VectorXd& rhs, int refine = 3) const {
    VectorXd x = ldlt_.solve(rhs);
    for (int it = 0; it < refine; ++it) {
      const VectorXd r = rhs - exact_.selfadjointView<Eigen::Lower>() * x;
      if (r.lpNorm<Eigen::Infinity>() <= 1e-14 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>())) break;
      x += ldlt_.solve(r);
    }
    return x;
  }

 private:
  const StandardForm& f_;
  const Cone& cone_;
  int n_ = 0, p_ = 0, m_ = 0;
  double reg_ = 0;
  std::vector<Triplet> base_;
  SpMat K_, exact_;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt_;
  bool analyzed_ = false;
};

}  // namespace

Solution solve_conic(const ConicProgram& prog, const SolverConfig& cfg) {
  check_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const StandardForm f = to_standard_form(prog);
  Cone cone(f.l, f.cone_dims);
  const int n = f.n, p = static_cast<int>(f.A.rows()), m = cone.size();
  const double constant = prog.objective().constant;

  Solution sol;
  auto finish = [&](const VectorXd& x) {
    sol.x.assign(x.data(), x.data() + n);
    sol.objective = prog.objective_value(sol.x);
    sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
  };

  KktSolver kkt(f, cone);
  const double reg0 = 1e-9;
  const VectorXd e = cone.identity();

  // Starting point: KKT solve with W = I, then shift s and z into the cone.
  VectorXd x(n), y(p), z(m), s(m);
  {
    Cone unit(f.l, f.cone_dims);
    VectorXd ones = e;
    unit.set_scaling(ones, ones);
    KktSolver k0(f, unit);
    double r0 = reg0;
    bool ok0 = k0.factor(r0);
    while (!ok0 && r0 < 1e-4) ok0 = k0.factor(r0 *= 100);
    if (!ok0) {
      sol.status = SolveStatus::NumericWarning;
      return finish(VectorXd::Zero(n));
    }
    VectorXd rhs(n + p + m);
    rhs << -f.q, f.b, f.h;
    const VectorXd sln = k0.solve(rhs);
    x = sln.head(n);
    y = sln.segment(n, p);
    z = sln.tail(m);
    s = -z;
    const double ts = cone.max_eig_neg(s);
    if (ts >= -1e-8 * std::max(1.0, s.norm())) s += (1 + ts) * e;
    const double tz = cone.max_eig_neg(z);
    if (tz >= -1e-8 * std::max(1.0, z.norm())) z += (1 + tz) * e;
  }
  if (m == 0) {
    sol.status = SolveStatus::Optimal;
    return finish(x);
  }

  const double resx0 = std::max(1.0, f.q.norm());
  const double resy0 = std::max(1.0, f.b.norm());
  const double resz0 = std::max(1.0, f.h.norm());
  const double deg = cone.degree();
  double reg = reg0;
  VectorXd best_x = x;

  for (int it = 0;; ++it) {
    const VectorXd Px = f.P.selfadjointView<Eigen::Lower>() * x;
    const VectorXd rx = Px + f.q + f.A.transpose() * y + f.G.transpose() * z;
    const VectorXd ry = f.A * x - f.b;
    const VectorXd rz = f.G * x + s - f.h;
    const double gap = s.dot(z);
    const double mu = gap / deg;
    const double pcost = 0.5 * x.dot(Px) + f.q.dot(x);
    const double dcost = pcost + y.dot(ry) + z.dot(rz) - gap;
    const double pres = std::max(ry.norm() / resy0, rz.norm() / resz0);
    const double dres = rx.norm() / resx0;
    double relgap = std::numeric_limits<double>::infinity();
    if (pcost < 0) relgap = gap / -pcost;
    else if (dcost > 0) relgap = gap / dcost;

    sol.iterations = it;
    sol.primal_residual = pres;
    sol.dual_residual = dres;
    sol.complementarity = gap;
    sol.dual_objective = dcost / f.obj_scale + constant;
    if (cfg.record_trace)
      sol.trace.push_back({it, pcost / f.obj_scale + constant, dcost / f.obj_scale + constant, pres, dres, gap,
                           sol.trace.empty() ? 0.0 : sol.trace.back().step});

    const bool small_gap = gap <= cfg.gap_tol || relgap <= cfg.gap_tol;
    if (pres <= cfg.feasibility_tol && dres <= cfg.feasibility_tol && small_gap) {
      sol.status = SolveStatus::Optimal;
      return finish(x);
    }
    // Dual ray: A'y + G'z ~ 0 with b'y + h'z < 0 certifies primal infeasibility.
    const double ray = -(f.b.dot(y) + f.h.dot(z));
    if (ray > 0 && (f.A.transpose() * y + f.G.transpose() * z).norm() <= 1e-8 * ray) {
      sol.status = SolveStatus::InfeasibleDetected;
      return finish(x);
    }
    if (it >= cfg.max_iterations) {
      sol.status = SolveStatus::IterationLimit;
      return finish(x);
    }

    const VectorXd lam = cone.set_scaling(s, z);
    bool ok = kkt.factor(reg);
    while (!ok && reg < 1e-4) {
      reg *= 100;
      ok = kkt.factor(reg);
    }
    if (!ok) {
      sol.status = SolveStatus::NumericWarning;
      return finish(x);
    }

    auto solve_dir = [&](const VectorXd& bs, double scale, VectorXd& dx, VectorXd& dy, VectorXd& dz, VectorXd& ds) {
      const VectorXd ldiv = cone.divide(lam, bs);
      VectorXd rhs(n + p + m);
      rhs << -scale * rx, -scale * ry, -scale * rz - cone.apply_w(ldiv);
      const VectorXd d = kkt.solve(rhs);
      dx = d.head(n);
      dy = d.segment(n, p);
      dz = d.tail(m);
      ds = cone.apply_w(ldiv - cone.apply_w(dz));
    };

    VectorXd dx, dy, dz, ds;
    const VectorXd ll = cone.product(lam, lam);
    solve_dir(-ll, 1.0, dx, dy, dz, ds);
    const double a_aff = std::min({1.0, cone.max_step(s, ds), cone.max_step(z, dz)});
    const double sigma = std::pow(1 - a_aff, 3);
    const VectorXd corr = cone.product(cone.apply_winv(ds), cone.apply_w(dz));
    solve_dir(-ll - corr + sigma * mu * e, 1.0, dx, dy, dz, ds);

    const double amax = std::min(cone.max_step(s, ds), cone.max_step(z, dz));
    const double alpha = std::min(1.0, cfg.step_fraction * amax);
    if (!std::isfinite(alpha) || alpha < 1e-12 || !dx.allFinite()) {
      const bool near = pres <= 1e-5 && dres <= 1e-5 && (relgap <= 1e-5 || gap <= 1e-5);
      sol.status = near ? SolveStatus::NumericWarning : SolveStatus::IterationLimit;
      return finish(x);
    }
    x += alpha * dx;
    y += alpha * dy;
    z += alpha * dz;
    s += alpha * ds;
    if (cfg.record_trace) sol.trace.back().step = alpha;
  }
}

}  // namespace opfrelax
