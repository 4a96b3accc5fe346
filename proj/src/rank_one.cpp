#include <cmath>
#include <queue>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "opfrelax/analysis.hpp"

namespace opfrelax {

RankOneResult rank1_recover(const Eigen::MatrixXcd& w, double tol) {
  if (w.rows() != w.cols()) throw std::invalid_argument("rank1_recover: matrix is not square");
  const double norm = w.cwiseAbs().maxCoeff();
  if (w.size() > 0 && (w - w.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, norm))
    throw std::invalid_argument("rank1_recover: matrix is not Hermitian");
  RankOneResult out;
  if (w.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w);
  const Eigen::VectorXd& lam = es.eigenvalues();  // ascending
  const int n = static_cast<int>(lam.size());
  const double top = lam(n - 1);
  out.psd = lam(0) >= -tol * std::max(std::abs(top), 1e-300);
  double second = 0;
  // Largest magnitude besides the top eigenvalue.
  for (int k = 0; k + 1 < n; ++k) second = std::max(second, std::abs(lam(k)));
  out.ratio = top > 0 ? second / top : 1.0;
  out.rank_one = out.psd && top > 0 && out.ratio <= tol;
  if (out.rank_one) {
    Eigen::VectorXcd v = std::sqrt(top) * es.eigenvectors().col(n - 1);
    // Reference angle 0 on the first nonzero entry.
    int ref = 0;
    while (ref < n && std::abs(v(ref)) == 0) ++ref;
    if (ref < n) v *= std::conj(v(ref)) / std::abs(v(ref));
    out.v = v;
  }
  return out;
}

double worst_edge_ratio(const BuiltRelaxation& rel, const Network& net, std::span<const double> x) {
  const RelaxationLayout& L = rel.layout;
  if (L.w_re.empty() && !net.branches.empty()) throw std::invalid_argument(rel.name() + " carries no W variables");
  const auto pos = bus_positions(net);
  double worst = 0;
  for (std::size_t e = 0; e < L.w_re.size(); ++e) {
    const Branch& br = net.branches[e];
    Eigen::Matrix2cd m;
    const Complex wij(x[L.w_re[e]], x[L.w_im[e]]);
    m << x[L.w_diag[pos.at(br.from)]], wij, std::conj(wij), x[L.w_diag[pos.at(br.to)]];
    const Eigen::Vector2d lam = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(m).eigenvalues();
    worst = std::max(worst, lam(1) > 0 ? std::abs(lam(0)) / lam(1) : 1.0);
  }
  return worst;
}

AcPoint recover_ac_point(const BuiltRelaxation& rel, const Network& net, std::span<const double> x) {
  const RelaxationLayout& L = rel.layout;
  if (L.w_diag.empty()) throw std::invalid_argument(rel.name() + " carries no W variables");
  const auto pos = bus_positions(net);
  const int nb = static_cast<int>(net.buses.size());
  AcPoint p;
  p.v.resize(nb);
  p.theta.assign(nb, 0.0);
  for (int i = 0; i < nb; ++i) p.v[i] = std::sqrt(std::max(0.0, x[L.w_diag[i]]));
  for (int g : L.pg) p.pg.push_back(x[g]);
  for (int g : L.qg) p.qg.push_back(x[g]);

  // Breadth-first spanning tree from the reference bus; arg W_ij = theta_i - theta_j.
  std::vector<std::vector<std::pair<int, int>>> adj(nb);
  for (std::size_t e = 0; e < net.branches.size(); ++e) {
    adj[pos.at(net.branches[e].from)].push_back({static_cast<int>(e), 1});
    adj[pos.at(net.branches[e].to)].push_back({static_cast<int>(e), -1});
  }
  std::vector<bool> seen(nb, false);
  std::queue<int> q;
  const int ref = pos.at(net.reference_bus);
  seen[ref] = true;
  q.push(ref);
  while (!q.empty()) {
    const int i = q.front();
    q.pop();
    for (auto [e, dir] : adj[i]) {
      const Branch& br = net.branches[e];
      const int j = dir > 0 ? pos.at(br.to) : pos.at(br.from);
      if (seen[j]) continue;
      const double arg = std::atan2(x[L.w_im[e]], x[L.w_re[e]]);
      p.theta[j] = p.theta[i] - dir * arg;
      seen[j] = true;
      q.push(j);
    }
  }
  return p;
}

bool is_ac_feasible(const BuiltRelaxation& rel, const Network& net, std::span<const double> x, double tol) {
  if (rel.layout.w_diag.empty()) return false;
  const AcOpfProgram ac(net);
  const std::vector<double> y = ac.from_point(recover_ac_point(rel, net, x));
  return certify_solution(ac, y, tol).pass;
}

}  // namespace opfrelax
