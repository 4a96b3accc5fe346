#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "opfrelax/solvers.hpp"

namespace opfrelax {

namespace {

using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kBoundPush = 1e-2;
constexpr double kKappaEps = 10;
constexpr double kKappaSigma = 1e10;
constexpr double kArmijo = 1e-4;
constexpr double kScaleMax = 100;

/// Elastic feasibility problem used by the restoration phase:
///   min sum(p + n) + zeta/2 ||D (x - xr)||^2  s.t.  lo <= c(x) - p + n <= hi.
class ElasticProgram : public NlpProgram {
 public:
  ElasticProgram(const NlpProgram& inner, std::vector<double> xr, double zeta)
      : inner_(inner), xr_(std::move(xr)), zeta_(zeta) {
    n_ = inner.num_variables();
    m_ = inner.num_constraints();
    jac_ = inner.jacobian_structure();
    for (int r = 0; r < m_; ++r) {
      jac_.push_back({r, n_ + r});
      jac_.push_back({r, n_ + m_ + r});
    }
    hess_ = inner.hessian_structure();
    for (int j = 0; j < n_; ++j) hess_.push_back({j, j});
    for (double v : xr_) d2_.push_back(1 / std::max(1.0, v * v));
  }

  int num_variables() const override { return n_ + 2 * m_; }
  int num_constraints() const override { return m_; }
  void variable_bounds(std::vector<double>& lo, std::vector<double>& hi) const override {
    inner_.variable_bounds(lo, hi);
    lo.resize(n_ + 2 * m_, 0.0);
    hi.resize(n_ + 2 * m_, kInf);
  }
  void constraint_bounds(std::vector<double>& lo, std::vector<double>& hi) const override {
    inner_.constraint_bounds(lo, hi);
  }
  std::vector<double> start_point(StartRule) const override {
    std::vector<double> x = xr_;
    std::vector<double> c(m_), lo, hi;
    inner_.constraints(x, c);
    inner_.constraint_bounds(lo, hi);
    x.resize(n_ + 2 * m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const double excess = c[r] - std::clamp(c[r], lo[r], hi[r]);
      x[n_ + r] = std::max(excess, 0.0) + 1e-2;
      x[n_ + m_ + r] = std::max(-excess, 0.0) + 1e-2;
    }
    return x;
  }
  double objective(std::span<const double> x) const override {
    double f = 0;
    for (int r = 0; r < 2 * m_; ++r) f += x[n_ + r];
    for (int j = 0; j < n_; ++j) f += 0.5 * zeta_ * d2_[j] * (x[j] - xr_[j]) * (x[j] - xr_[j]);
    return f;
  }
  void gradient(std::span<const double> x, std::span<double> g) const override {
    for (int j = 0; j < n_; ++j) g[j] = zeta_ * d2_[j] * (x[j] - xr_[j]);
    for (int r = 0; r < 2 * m_; ++r) g[n_ + r] = 1.0;
  }
  void constraints(std::span<const double> x, std::span<double> c) const override {
    inner_.constraints(x.first(n_), c);
    for (int r = 0; r < m_; ++r) c[r] += -x[n_ + r] + x[n_ + m_ + r];
  }
  const std::vector<std::pair<int, int>>& jacobian_structure() const override { return jac_; }
  void jacobian(std::span<const double> x, std::span<double> values) const override {
    const std::size_t k = inner_.jacobian_structure().size();
    inner_.jacobian(x.first(n_), values.first(k));
    for (int r = 0; r < m_; ++r) {
      values[k + 2 * r] = -1.0;
      values[k + 2 * r + 1] = 1.0;
    }
  }
  const std::vector<std::pair<int, int>>& hessian_structure() const override { return hess_; }
  void hessian(std::span<const double> x, double sigma, std::span<const double> lambda,
               std::span<double> values) const override {
    const std::size_t k = inner_.hessian_structure().size();
    inner_.hessian(x.first(n_), 0.0, lambda, values.first(k));
    for (int j = 0; j < n_; ++j) values[k + j] = sigma * zeta_ * d2_[j];
  }
  std::string constraint_family(int row) const override { return inner_.constraint_family(row); }
  std::string variable_name(int col) const override {
    if (col < n_) return inner_.variable_name(col);
    return (col < n_ + m_ ? "p[" : "n[") + std::to_string((col - n_) % m_) + "]";
  }

  /// Sum of elastic variables: the l1 infeasibility of the inner problem.
  double infeasibility(std::span<const double> x) const {
    double s = 0;
    for (int r = 0; r < 2 * m_; ++r) s += x[n_ + r];
    return s;
  }

 private:
  const NlpProgram& inner_;
  std::vector<double> xr_;
  double zeta_;
  int n_ = 0, m_ = 0;
  std::vector<std::pair<int, int>> jac_, hess_;
  std::vector<double> d2_;
};

struct Options {
  bool allow_restoration = true;
};

/// Primal-dual barrier solver over z = (free x, slacks) with constraints
/// g(z) = 0: equality rows c_E(x) - b, inequality rows c_I(x) - s.
class BarrierSolver {
 public:
  BarrierSolver(const NlpProgram& prog, const SolverConfig& cfg, Options opt) : prog_(prog), cfg_(cfg), opt_(opt) {
    n_ = prog.num_variables();
    m_ = prog.num_constraints();
    prog.variable_bounds(xlo_, xhi_);
    prog.constraint_bounds(clo_, chi_);
    col_.assign(n_, -1);
    for (int j = 0; j < n_; ++j)
      if (xlo_[j] < xhi_[j]) {
        col_[j] = static_cast<int>(free_.size());
        free_.push_back(j);
      }
    slack_.assign(m_, -1);
    for (int r = 0; r < m_; ++r)
      if (clo_[r] < chi_[r]) {
        slack_[r] = static_cast<int>(free_.size() + ineq_.size());
        ineq_.push_back(r);
      }
    N_ = static_cast<int>(free_.size() + ineq_.size());
    lo_.resize(N_);
    hi_.resize(N_);
    for (std::size_t k = 0; k < free_.size(); ++k) {
      lo_(k) = xlo_[free_[k]];
      hi_(k) = xhi_[free_[k]];
    }
    for (std::size_t k = 0; k < ineq_.size(); ++k) {
      lo_(free_.size() + k) = clo_[ineq_[k]];
      hi_(free_.size() + k) = chi_[ineq_[k]];
    }
    has_lo_ = lo_.unaryExpr([](double v) { return std::isfinite(v) ? 1.0 : 0.0; });
    has_hi_ = hi_.unaryExpr([](double v) { return std::isfinite(v) ? 1.0 : 0.0; });

    const auto& js = prog.jacobian_structure();
    const auto& hs = prog.hessian_structure();
    jac_vals_.resize(js.size());
    hess_vals_.resize(hs.size());
  }

  Solution run(std::span<const double> start) {
    const auto t0 = std::chrono::steady_clock::now();
    Solution sol;
    x_.assign(start.begin(), start.end());
    for (int j = 0; j < n_; ++j)
      if (col_[j] < 0) x_[j] = xlo_[j];

    // Push the start strictly inside its bounds.
    VectorXd z(N_);
    for (std::size_t k = 0; k < free_.size(); ++k) z(k) = x_[free_[k]];
    std::vector<double> c(m_);
    prog_.constraints(x_, c);
    for (std::size_t k = 0; k < ineq_.size(); ++k) z(free_.size() + k) = c[ineq_[k]];
    z = push_inside(z);
    scatter(z);

    std::vector<double> grad(n_);
    prog_.gradient(x_, grad);
    double gmax = 0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    obj_scale_ = gmax > 100 ? 100 / gmax : 1.0;

    double mu = 0.1;
    VectorXd lam = VectorXd::Zero(m_);
    VectorXd zl = has_lo_, zu = has_hi_;
    double nu = 1.0;
    double dw_last = 0;
    int restorations = 0;

    auto finish = [&](SolveStatus st, int it) {
      sol.x = x_;
      sol.objective = prog_.objective(x_);
      sol.dual_objective = sol.objective;
      sol.status = st;
      sol.iterations = it;
      sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return sol;
    };

    for (int it = 0;; ++it) {
      const Eval ev = evaluate(z, lam, mu);
      const double e0 = error(ev, z, lam, zl, zu, 0.0);
      sol.primal_residual = ev.g.lpNorm<Eigen::Infinity>();
      sol.dual_residual = (ev.grad + ev.JtLam - zl + zu).lpNorm<Eigen::Infinity>();
      sol.complementarity = complementarity(z, zl, zu, 0.0);
      if (cfg_.record_trace)
        sol.trace.push_back({it, prog_.objective(x_), prog_.objective(x_), sol.primal_residual, sol.dual_residual,
                             sol.complementarity, 0.0});
      if (sol.primal_residual <= cfg_.feasibility_tol && e0 <= cfg_.gap_tol) return finish(SolveStatus::Optimal, it);
      if (it >= cfg_.max_iterations) return finish(SolveStatus::IterationLimit, it);

      while (error(ev, z, lam, zl, zu, mu) <= kKappaEps * mu && mu > cfg_.gap_tol / 10) {
        mu = std::max(cfg_.gap_tol / 10, std::min(cfg_.barrier_linear * mu, std::pow(mu, cfg_.barrier_superlinear)));
      }
      const Eval eb = mu == ev.mu ? ev : evaluate(z, lam, mu);

      // Newton system with inertia correction.
      const VectorXd sl = (zl.array() * has_lo_.array() / slack_lo(z).array()).matrix();
      const VectorXd su = (zu.array() * has_hi_.array() / slack_hi(z).array()).matrix();
      const VectorXd sigma = sl + su;
      double dw = 0, dc = 1e-9;
      bool factored = false;
      for (int attempt = 0; attempt < 40; ++attempt) {
        if (assemble_and_factor(lam, sigma, dw, dc)) {
          factored = true;
          break;
        }
        dw = dw == 0 ? (dw_last == 0 ? 1e-4 : std::max(1e-20, dw_last / 3)) : dw * (dw_last == 0 ? 100 : 8);
        if (dw > 1e40) break;
      }
      if (!factored) {
        if (opt_.allow_restoration && restorations < 3) {
          ++restorations;
          if (!restore(z, lam, zl, zu, mu)) return finish(SolveStatus::RestorationFailure, it);
          continue;
        }
        return finish(SolveStatus::NumericWarning, it);
      }
      if (dw > 0) dw_last = dw;

      VectorXd rhs(N_ + m_);
      rhs << -eb.barrier_grad - eb.JtLam, -eb.g;
      const VectorXd sol_kkt = solve_refined(rhs);
      const VectorXd dz = sol_kkt.head(N_);
      const VectorXd dlam = sol_kkt.tail(m_);

      const double tau = std::max(cfg_.step_fraction, 1 - mu);
      const double amax = max_step(z, dz, tau);
      const VectorXd dzl =
          (has_lo_.array() * (mu / slack_lo(z).array() - zl.array() - sl.array() * dz.array())).matrix();
      const VectorXd dzu =
          (has_hi_.array() * (mu / slack_hi(z).array() - zu.array() + su.array() * dz.array())).matrix();
      double az = 1.0;
      for (int k = 0; k < N_; ++k) {
        if (dzl(k) < 0) az = std::min(az, -tau * zl(k) / dzl(k));
        if (dzu(k) < 0) az = std::min(az, -tau * zu(k) / dzu(k));
      }

      // l1 merit with penalty above the new multipliers.
      const double gnorm = eb.g.lpNorm<1>();
      const VectorXd lam_new = lam + dlam;
      nu = std::max(nu, lam_new.lpNorm<Eigen::Infinity>() + 1.0);
      double dphi = eb.barrier_grad.dot(dz) - nu * gnorm;
      if (dphi >= 0 && gnorm > 0) {
        nu = (eb.barrier_grad.dot(dz) + 1.0) / gnorm + nu;
        dphi = eb.barrier_grad.dot(dz) - nu * gnorm;
      }
      const double phi0 = eb.barrier_obj + nu * gnorm;
      double alpha = amax;
      bool accepted = false;
      VectorXd trial;
      for (int ls = 0; ls < 60; ++ls) {
        trial = z + alpha * dz;
        const Eval et = evaluate(trial, lam, mu, /*derivatives=*/false);
        const double phi = et.barrier_obj + nu * et.g.lpNorm<1>();
        if (std::isfinite(phi) && phi <= phi0 + kArmijo * alpha * std::min(dphi, 0.0)) {
          accepted = true;
          break;
        }
        if (ls == 0) {
          // Second-order correction against the Maratos effect.
          VectorXd r2(N_ + m_);
          r2 << -eb.barrier_grad - eb.JtLam, -(alpha * eb.g + et.g);
          const VectorXd dsoc = solve_refined(r2).head(N_);
          const double asoc = max_step(z, dsoc, tau);
          if (asoc >= 1.0 - 1e-12) {
            const VectorXd ts = z + dsoc;
            const Eval es = evaluate(ts, lam, mu, false);
            const double ps = es.barrier_obj + nu * es.g.lpNorm<1>();
            if (std::isfinite(ps) && ps <= phi0 + kArmijo * std::min(dphi, 0.0)) {
              trial = ts;
              accepted = true;
              alpha = 1.0;
              break;
            }
          }
        }
        alpha *= 0.5;
        if (alpha < 1e-14) break;
      }
      if (!accepted) {
        if (opt_.allow_restoration && restorations < 3) {
          ++restorations;
          if (!restore(z, lam, zl, zu, mu)) return finish(SolveStatus::RestorationFailure, it);
          continue;
        }
        return finish(SolveStatus::NumericWarning, it);
      }
      z = trial;
      lam += alpha * dlam;
      zl += az * dzl;
      zu += az * dzu;
      // Keep bound multipliers near the central path.
      const VectorXd slo = slack_lo(z), shi = slack_hi(z);
      for (int k = 0; k < N_; ++k) {
        if (has_lo_(k) > 0) zl(k) = std::clamp(zl(k), mu / (kKappaSigma * slo(k)), kKappaSigma * mu / slo(k));
        if (has_hi_(k) > 0) zu(k) = std::clamp(zu(k), mu / (kKappaSigma * shi(k)), kKappaSigma * mu / shi(k));
      }
      scatter(z);
      if (cfg_.record_trace) sol.trace.back().step = alpha;
    }
  }

 private:
  struct Eval {
    double mu = -1;
    double barrier_obj = 0;
    VectorXd grad;          // scaled objective gradient over z
    VectorXd barrier_grad;  // grad - mu/(z-l) + mu/(u-z)
    VectorXd g;             // constraint residuals
    VectorXd JtLam;
  };

  VectorXd slack_lo(const VectorXd& z) const {
    VectorXd s(N_);
    for (int k = 0; k < N_; ++k) s(k) = has_lo_(k) > 0 ? z(k) - lo_(k) : 1.0;
    return s;
  }
  VectorXd slack_hi(const VectorXd& z) const {
    VectorXd s(N_);
    for (int k = 0; k < N_; ++k) s(k) = has_hi_(k) > 0 ? hi_(k) - z(k) : 1.0;
    return s;
  }

  VectorXd push_inside(VectorXd z) const {
    for (int k = 0; k < N_; ++k) {
      const bool l = has_lo_(k) > 0, u = has_hi_(k) > 0;
      if (l && u) {
        const double w = hi_(k) - lo_(k);
        const double p = std::min(kBoundPush * std::max(1.0, std::abs(lo_(k))), 0.5 * kBoundPush * w);
        const double q = std::min(kBoundPush * std::max(1.0, std::abs(hi_(k))), 0.5 * kBoundPush * w);
        z(k) = std::clamp(z(k), lo_(k) + p, hi_(k) - q);
      } else if (l) {
        z(k) = std::max(z(k), lo_(k) + kBoundPush * std::max(1.0, std::abs(lo_(k))));
      } else if (u) {
        z(k) = std::min(z(k), hi_(k) - kBoundPush * std::max(1.0, std::abs(hi_(k))));
      }
    }
    return z;
  }

  void scatter(const VectorXd& z) {
    for (std::size_t k = 0; k < free_.size(); ++k) x_[free_[k]] = z(k);
  }

  Eval evaluate(const VectorXd& z, const VectorXd& lam, double mu, bool derivatives = true) {
    Eval ev;
    ev.mu = mu;
    std::vector<double> x = x_;
    for (std::size_t k = 0; k < free_.size(); ++k) x[free_[k]] = z(k);
    const VectorXd slo = slack_lo(z), shi = slack_hi(z);
    double bar = obj_scale_ * prog_.objective(x);
    for (int k = 0; k < N_; ++k) {
      if (has_lo_(k) > 0) bar -= slo(k) > 0 ? mu * std::log(slo(k)) : -kInf;
      if (has_hi_(k) > 0) bar -= shi(k) > 0 ? mu * std::log(shi(k)) : -kInf;
    }
    ev.barrier_obj = bar;
    std::vector<double> c(m_);
    prog_.constraints(x, c);
    ev.g.resize(m_);
    for (int r = 0; r < m_; ++r) ev.g(r) = slack_[r] < 0 ? c[r] - clo_[r] : c[r] - z(slack_[r]);
    if (!derivatives) return ev;

    std::vector<double> grad(n_);
    prog_.gradient(x, grad);
    ev.grad = VectorXd::Zero(N_);
    for (std::size_t k = 0; k < free_.size(); ++k) ev.grad(k) = obj_scale_ * grad[free_[k]];
    ev.barrier_grad = ev.grad;
    for (int k = 0; k < N_; ++k) {
      if (has_lo_(k) > 0) ev.barrier_grad(k) -= mu / slo(k);
      if (has_hi_(k) > 0) ev.barrier_grad(k) += mu / shi(k);
    }
    prog_.jacobian(x, jac_vals_);
    ev.JtLam = VectorXd::Zero(N_);
    const auto& js = prog_.jacobian_structure();
    for (std::size_t e = 0; e < js.size(); ++e) {
      const int cl = col_[js[e].second];
      if (cl >= 0) ev.JtLam(cl) += jac_vals_[e] * lam(js[e].first);
    }
    for (int r = 0; r < m_; ++r)
      if (slack_[r] >= 0) ev.JtLam(slack_[r]) -= lam(r);
    hess_x_ = x;
    return ev;
  }

  double complementarity(const VectorXd& z, const VectorXd& zl, const VectorXd& zu, double mu) const {
    const VectorXd slo = slack_lo(z), shi = slack_hi(z);
    double c = 0;
    for (int k = 0; k < N_; ++k) {
      if (has_lo_(k) > 0) c = std::max(c, std::abs(slo(k) * zl(k) - mu));
      if (has_hi_(k) > 0) c = std::max(c, std::abs(shi(k) * zu(k) - mu));
    }
    return c;
  }

  double error(const Eval& ev, const VectorXd& z, const VectorXd& lam, const VectorXd& zl, const VectorXd& zu,
               double mu) const {
    const double mult = lam.lpNorm<1>() + zl.lpNorm<1>() + zu.lpNorm<1>();
    const double sd = std::max(kScaleMax, mult / std::max(1, m_ + 2 * N_)) / kScaleMax;
    const double sc = std::max(kScaleMax, (zl.lpNorm<1>() + zu.lpNorm<1>()) / std::max(1, 2 * N_)) / kScaleMax;
    const double dual = (ev.grad + ev.JtLam - zl + zu).lpNorm<Eigen::Infinity>() / sd;
    return std::max({dual, ev.g.lpNorm<Eigen::Infinity>(), complementarity(z, zl, zu, mu) / sc});
  }

  double max_step(const VectorXd& z, const VectorXd& dz, double tau) const {
    double a = 1.0;
    for (int k = 0; k < N_; ++k) {
      if (has_lo_(k) > 0 && dz(k) < 0) a = std::min(a, -tau * (z(k) - lo_(k)) / dz(k));
      if (has_hi_(k) > 0 && dz(k) > 0) a = std::min(a, tau * (hi_(k) - z(k)) / dz(k));
    }
    return a;
  }

  /// Factors [H + Sigma + dw I, J'; J, -dc I]; true when the inertia is (N, m, 0).
  bool assemble_and_factor(const VectorXd& lam, const VectorXd& sigma, double dw, double dc) {
    const auto& hs = prog_.hessian_structure();
    std::vector<double> lv(lam.data(), lam.data() + m_);
    prog_.hessian(hess_x_, obj_scale_, lv, hess_vals_);
    std::vector<Triplet> t;
    t.reserve(hs.size() + jac_vals_.size() + 2 * (N_ + m_));
    for (std::size_t e = 0; e < hs.size(); ++e) {
      const int r = col_[hs[e].first], c = col_[hs[e].second];
      if (r >= 0 && c >= 0) t.emplace_back(std::max(r, c), std::min(r, c), hess_vals_[e]);
    }
    for (int k = 0; k < N_; ++k) t.emplace_back(k, k, sigma(k) + dw);
    const auto& js = prog_.jacobian_structure();
    for (std::size_t e = 0; e < js.size(); ++e) {
      const int cl = col_[js[e].second];
      if (cl >= 0) t.emplace_back(N_ + js[e].first, cl, jac_vals_[e]);
    }
    for (int r = 0; r < m_; ++r) {
      if (slack_[r] >= 0) t.emplace_back(N_ + r, slack_[r], -1.0);
      t.emplace_back(N_ + r, N_ + r, -dc);
    }
    K_.resize(N_ + m_, N_ + m_);
    K_.setFromTriplets(t.begin(), t.end());
    if (!analyzed_) {
      ldlt_.analyzePattern(K_);
      analyzed_ = true;
    }
    ldlt_.factorize(K_);
    if (ldlt_.info() != Eigen::Success) return false;
    const VectorXd d = ldlt_.vectorD();
    int pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (d(i) > 0) ++pos;
      else if (d(i) < 0) ++neg;
    }
    return pos == N_ && neg == m_;
  }

  VectorXd solve_refined(const VectorXd& rhs) const {
    VectorXd x = ldlt_.solve(rhs);
    for (int it = 0; it < 2; ++it) {
      const VectorXd r = rhs - K_.selfadjointView<Eigen::Lower>() * x;
      if (r.lpNorm<Eigen::Infinity>() <= 1e-14 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>())) break;
      x += ldlt_.solve(r);
    }
    return x;
  }

  /// Restoration: minimize the l1 infeasibility from the current point.
  /// Returns false when the problem appears locally infeasible.
  bool restore(VectorXd& z, VectorXd& lam, VectorXd& zl, VectorXd& zu, double mu) {
    ElasticProgram elastic(prog_, x_, std::sqrt(mu) * 1e-2);
    SolverConfig rc = cfg_;
    rc.record_trace = false;
    BarrierSolver inner(elastic, rc, Options{false});
    const std::vector<double> start = elastic.start_point(StartRule::Default);
    const Solution rs = inner.run(start);
    const double infeas = elastic.infeasibility(rs.x);
    if (!std::isfinite(infeas) || infeas > std::max(1e3 * cfg_.feasibility_tol, 1e-6)) return false;
    std::copy(rs.x.begin(), rs.x.begin() + n_, x_.begin());
    std::vector<double> c(m_);
    prog_.constraints(x_, c);
    for (std::size_t k = 0; k < free_.size(); ++k) z(k) = x_[free_[k]];
    for (std::size_t k = 0; k < ineq_.size(); ++k) z(free_.size() + k) = c[ineq_[k]];
    z = push_inside(z);
    scatter(z);
    lam.setZero();
    const VectorXd slo = slack_lo(z), shi = slack_hi(z);
    for (int k = 0; k < N_; ++k) {
      zl(k) = has_lo_(k) > 0 ? std::min(1e3, mu / slo(k)) : 0.0;
      zu(k) = has_hi_(k) > 0 ? std::min(1e3, mu / shi(k)) : 0.0;
    }
    return true;
  }

  const NlpProgram& prog_;
  SolverConfig cfg_;
  Options opt_;
  int n_ = 0, m_ = 0, N_ = 0;
  std::vector<double> xlo_, xhi_, clo_, chi_;
  std::vector<int> col_, free_, slack_, ineq_;
  VectorXd lo_, hi_, has_lo_, has_hi_;
  std::vector<double> x_, hess_x_;
  std::vector<double> jac_vals_, hess_vals_;
  double obj_scale_ = 1;
  SpMat K_;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt_;
  bool analyzed_ = false;
};

}  // namespace

Solution solve_local_ac(const NlpProgram& prog, std::span<const double> start, const SolverConfig& cfg) {
  check_config(cfg);
  if (static_cast<int>(start.size()) != prog.num_variables())
    throw std::invalid_argument("start point has the wrong dimension");
  BarrierSolver solver(prog, cfg, Options{});
  return solver.run(start);
}

Solution solve_local_ac(const NlpProgram& prog, const SolverConfig& cfg) {
  const std::vector<double> start = prog.start_point(cfg.start);
  return solve_local_ac(prog, start, cfg);
}

}  // namespace opfrelax
