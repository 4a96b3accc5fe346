#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "opfrelax/formulations.hpp"

namespace opfrelax {

AcOpfProgram::FlowCoef AcOpfProgram::flow_coefficients(const Branch& br, int k) {
  const Complex y = branch_admittance(br);
  const double g = y.real(), b = y.imag(), t = br.tap_mag, beta = br.b_charge / 2;
  switch (k) {
    case 0: return {g / (t * t), 0.0, -g / t, -b / t};
    case 1: return {-(b + beta) / (t * t), 0.0, b / t, -g / t};
    case 2: return {0.0, g, -g / t, b / t};
    case 3: return {0.0, -(b + beta), b / t, g / t};
  }
  throw std::out_of_range("flow index must be 0..3");
}

double ac_flow(const Branch& br, int k, double vi, double vj, double ti, double tj) {
  const auto f = AcOpfProgram::flow_coefficients(br, k);
  const double d = ti - tj - br.tap_shift;
  return f.a * vi * vi + f.b * vj * vj + vi * vj * (f.c * std::cos(d) + f.s * std::sin(d));
}

AcOpfProgram::AcOpfProgram(const Network& net) : net_(net) {
  require_valid(net_);
  nb_ = static_cast<int>(net_.buses.size());
  ng_ = static_cast<int>(net_.generators.size());
  nl_ = static_cast<int>(net_.branches.size());
  num_vars_ = 2 * nb_ + 2 * ng_ + 4 * nl_;
  const auto pos = bus_positions(net_);

  for (const Branch& br : net_.branches) {
    BranchData d{pos.at(br.from), pos.at(br.to), br.tap_shift, {}};
    for (int k = 0; k < 4; ++k) d.f[k] = flow_coefficients(br, k);
    branch_.push_back(d);
  }

  // Rows and Jacobian pattern, in row order.
  std::vector<std::vector<int>> gens_at(nb_), out_p(nb_), out_q(nb_);
  for (int g = 0; g < ng_; ++g) gens_at[pos.at(net_.generators[g].bus)].push_back(g);
  for (int e = 0; e < nl_; ++e) {
    out_p[branch_[e].i].push_back(flow_index(e, 0));
    out_q[branch_[e].i].push_back(flow_index(e, 1));
    out_p[branch_[e].j].push_back(flow_index(e, 2));
    out_q[branch_[e].j].push_back(flow_index(e, 3));
  }
  int row = 0;
  kcl_row_ = row;
  for (int i = 0; i < nb_; ++i) {
    for (int q = 0; q < 2; ++q, ++row) {
      family_.push_back("kcl");
      for (int g : gens_at[i]) jac_.push_back({row, q == 0 ? pg_index(g) : qg_index(g)});
      for (int f : (q == 0 ? out_p[i] : out_q[i])) jac_.push_back({row, f});
      jac_.push_back({row, v_index(i)});
    }
  }
  flow_row_ = row;
  for (int e = 0; e < nl_; ++e) {
    for (int k = 0; k < 4; ++k, ++row) {
      family_.push_back("flow");
      jac_.push_back({row, flow_index(e, k)});
      jac_.push_back({row, v_index(branch_[e].i)});
      jac_.push_back({row, v_index(branch_[e].j)});
      jac_.push_back({row, theta_index(branch_[e].i)});
      jac_.push_back({row, theta_index(branch_[e].j)});
    }
  }
  angle_row_ = row;
  for (int e = 0; e < nl_; ++e, ++row) {
    family_.push_back("pad");
    jac_.push_back({row, theta_index(branch_[e].i)});
    jac_.push_back({row, theta_index(branch_[e].j)});
  }
  thermal_row_ = row;
  for (int e = 0; e < nl_; ++e) {
    if (!std::isfinite(net_.branches[e].s_max)) continue;
    thermal_branch_.push_back(e);
    for (int side = 0; side < 2; ++side, ++row) {
      family_.push_back("thermal");
      jac_.push_back({row, flow_index(e, 2 * side)});
      jac_.push_back({row, flow_index(e, 2 * side + 1)});
    }
  }

  // Hessian pattern (lower triangle), deduplicated.
  std::map<std::pair<int, int>, int> slot;
  auto at = [&](int r, int c) {
    if (r < c) std::swap(r, c);
    auto [it, fresh] = slot.emplace(std::make_pair(r, c), static_cast<int>(hess_.size()));
    if (fresh) hess_.push_back({r, c});
    return it->second;
  };
  for (int i = 0; i < nb_; ++i) hess_v_diag_.push_back(at(v_index(i), v_index(i)));
  for (int e = 0; e < nl_; ++e) {
    const int ids[4] = {v_index(branch_[e].i), v_index(branch_[e].j), theta_index(branch_[e].i),
                        theta_index(branch_[e].j)};
    std::vector<int> s;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b <= a; ++b) s.push_back(at(ids[a], ids[b]));
    hess_branch_.push_back(std::move(s));
  }
  for (int g = 0; g < ng_; ++g) hess_pg_diag_.push_back(at(pg_index(g), pg_index(g)));
  for (int e = 0; e < nl_; ++e)
    for (int k = 0; k < 4; ++k) hess_flow_diag_.push_back(at(flow_index(e, k), flow_index(e, k)));
}

void AcOpfProgram::variable_bounds(std::vector<double>& lo, std::vector<double>& hi) const {
  lo.assign(num_vars_, -kInf);
  hi.assign(num_vars_, kInf);
  const int ref = bus_positions(net_).at(net_.reference_bus);
  for (int i = 0; i < nb_; ++i) {
    lo[v_index(i)] = net_.buses[i].v_min;
    hi[v_index(i)] = net_.buses[i].v_max;
  }
  lo[theta_index(ref)] = hi[theta_index(ref)] = 0.0;
  for (int g = 0; g < ng_; ++g) {
    const Generator& gen = net_.generators[g];
    lo[pg_index(g)] = gen.p_min;
    hi[pg_index(g)] = gen.p_max;
    lo[qg_index(g)] = gen.q_min;
    hi[qg_index(g)] = gen.q_max;
  }
}

void AcOpfProgram::constraint_bounds(std::vector<double>& lo, std::vector<double>& hi) const {
  const int m = num_constraints();
  lo.assign(m, 0.0);
  hi.assign(m, 0.0);
  for (int i = 0; i < nb_; ++i) {
    lo[kcl_row_ + 2 * i] = hi[kcl_row_ + 2 * i] = net_.buses[i].p_load;
    lo[kcl_row_ + 2 * i + 1] = hi[kcl_row_ + 2 * i + 1] = net_.buses[i].q_load;
  }
  for (int e = 0; e < nl_; ++e) {
    const Branch& br = net_.branches[e];
    lo[angle_row_ + e] = br.tap_shift - br.angle_max;
    hi[angle_row_ + e] = br.tap_shift + br.angle_max;
  }
  for (std::size_t t = 0; t < thermal_branch_.size(); ++t) {
    const double s = net_.branches[thermal_branch_[t]].s_max;
    for (int side = 0; side < 2; ++side) {
      lo[thermal_row_ + 2 * t + side] = -kInf;
      hi[thermal_row_ + 2 * t + side] = s * s;
    }
  }
}

std::vector<double> AcOpfProgram::start_point(StartRule) const {
  AcPoint p;
  p.v.assign(nb_, 1.0);
  p.theta.assign(nb_, 0.0);
  for (int i = 0; i < nb_; ++i) p.v[i] = std::clamp(1.0, net_.buses[i].v_min, net_.buses[i].v_max);
  const Complex load = total_load(net_);
  for (const Generator& gen : net_.generators) {
    p.pg.push_back(std::clamp(load.real() / ng_, gen.p_min, gen.p_max));
    p.qg.push_back(std::clamp(load.imag() / ng_, gen.q_min, gen.q_max));
  }
  return from_point(p);
}

AcPoint AcOpfProgram::point(std::span<const double> x) const {
  AcPoint p;
  for (int i = 0; i < nb_; ++i) {
    p.v.push_back(x[v_index(i)]);
    p.theta.push_back(x[theta_index(i)]);
  }
  for (int g = 0; g < ng_; ++g) {
    p.pg.push_back(x[pg_index(g)]);
    p.qg.push_back(x[qg_index(g)]);
  }
  return p;
}

std::vector<double> AcOpfProgram::from_point(const AcPoint& p) const {
  std::vector<double> x(num_vars_, 0.0);
  for (int i = 0; i < nb_; ++i) {
    x[v_index(i)] = p.v[i];
    x[theta_index(i)] = p.theta[i];
  }
  for (int g = 0; g < ng_; ++g) {
    x[pg_index(g)] = p.pg[g];
    x[qg_index(g)] = p.qg[g];
  }
  for (int e = 0; e < nl_; ++e) {
    const auto& d = branch_[e];
    for (int k = 0; k < 4; ++k)
      x[flow_index(e, k)] = ac_flow(net_.branches[e], k, p.v[d.i], p.v[d.j], p.theta[d.i], p.theta[d.j]);
  }
  return x;
}

double AcOpfProgram::objective(std::span<const double> x) const {
  double f = 0;
  for (int g = 0; g < ng_; ++g) f += generation_cost(net_.generators[g], x[pg_index(g)], net_.base_mva);
  return f;
}

void AcOpfProgram::gradient(std::span<const double> x, std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  const double base = net_.base_mva;
  for (int g = 0; g < ng_; ++g) {
    const Generator& gen = net_.generators[g];
    grad[pg_index(g)] = base * (2 * gen.c2 * base * x[pg_index(g)] + gen.c1);
  }
}

void AcOpfProgram::constraints(std::span<const double> x, std::span<double> c) const {
  std::fill(c.begin(), c.end(), 0.0);
  const auto pos = bus_positions(net_);
  for (int g = 0; g < ng_; ++g) {
    const int i = pos.at(net_.generators[g].bus);
    c[kcl_row_ + 2 * i] += x[pg_index(g)];
    c[kcl_row_ + 2 * i + 1] += x[qg_index(g)];
  }
  for (int i = 0; i < nb_; ++i) {
    const double v2 = x[v_index(i)] * x[v_index(i)];
    c[kcl_row_ + 2 * i] -= net_.buses[i].shunt_g * v2;
    c[kcl_row_ + 2 * i + 1] += net_.buses[i].shunt_b * v2;
  }
  for (int e = 0; e < nl_; ++e) {
    const auto& d = branch_[e];
    c[kcl_row_ + 2 * d.i] -= x[flow_index(e, 0)];
    c[kcl_row_ + 2 * d.i + 1] -= x[flow_index(e, 1)];
    c[kcl_row_ + 2 * d.j] -= x[flow_index(e, 2)];
    c[kcl_row_ + 2 * d.j + 1] -= x[flow_index(e, 3)];
    const double vi = x[v_index(d.i)], vj = x[v_index(d.j)];
    const double ti = x[theta_index(d.i)], tj = x[theta_index(d.j)];
    const double delta = ti - tj - d.shift, cd = std::cos(delta), sd = std::sin(delta);
    for (int k = 0; k < 4; ++k) {
      const auto& f = d.f[k];
      c[flow_row_ + 4 * e + k] = x[flow_index(e, k)] - (f.a * vi * vi + f.b * vj * vj + vi * vj * (f.c * cd + f.s * sd));
    }
    c[angle_row_ + e] = ti - tj;
  }
  for (std::size_t t = 0; t < thermal_branch_.size(); ++t) {
    const int e = thermal_branch_[t];
    for (int side = 0; side < 2; ++side) {
      const double p = x[flow_index(e, 2 * side)], q = x[flow_index(e, 2 * side + 1)];
      c[thermal_row_ + 2 * t + side] = p * p + q * q;
    }
  }
}

void AcOpfProgram::jacobian(std::span<const double> x, std::span<double> values) const {
  std::size_t n = 0;
  const auto pos = bus_positions(net_);
  std::vector<int> ngen(nb_, 0), nout(nb_, 0);
  for (int g = 0; g < ng_; ++g) ++ngen[pos.at(net_.generators[g].bus)];
  for (int e = 0; e < nl_; ++e) {
    ++nout[branch_[e].i];
    ++nout[branch_[e].j];
  }
  for (int i = 0; i < nb_; ++i) {
    const double v = x[v_index(i)];
    for (int q = 0; q < 2; ++q) {
      for (int g = 0; g < ngen[i]; ++g) values[n++] = 1.0;
      for (int f = 0; f < nout[i]; ++f) values[n++] = -1.0;
      values[n++] = q == 0 ? -2 * net_.buses[i].shunt_g * v : 2 * net_.buses[i].shunt_b * v;
    }
  }
  for (int e = 0; e < nl_; ++e) {
    const auto& d = branch_[e];
    const double vi = x[v_index(d.i)], vj = x[v_index(d.j)];
    const double delta = x[theta_index(d.i)] - x[theta_index(d.j)] - d.shift;
    const double cd = std::cos(delta), sd = std::sin(delta);
    for (int k = 0; k < 4; ++k) {
      const auto& f = d.f[k];
      const double h = f.c * cd + f.s * sd, hp = -f.c * sd + f.s * cd;
      values[n++] = 1.0;
      values[n++] = -(2 * f.a * vi + vj * h);
      values[n++] = -(2 * f.b * vj + vi * h);
      values[n++] = -(vi * vj * hp);
      values[n++] = vi * vj * hp;
    }
  }
  for (int e = 0; e < nl_; ++e) {
    values[n++] = 1.0;
    values[n++] = -1.0;
  }
  for (int e : thermal_branch_)
    for (int side = 0; side < 2; ++side) {
      values[n++] = 2 * x[flow_index(e, 2 * side)];
      values[n++] = 2 * x[flow_index(e, 2 * side + 1)];
    }
}

void AcOpfProgram::hessian(std::span<const double> x, double sigma, std::span<const double> lambda,
                           std::span<double> values) const {
  std::fill(values.begin(), values.end(), 0.0);
  const double base = net_.base_mva;
  for (int g = 0; g < ng_; ++g) values[hess_pg_diag_[g]] += sigma * 2 * net_.generators[g].c2 * base * base;
  for (int i = 0; i < nb_; ++i) {
    values[hess_v_diag_[i]] += -2 * net_.buses[i].shunt_g * lambda[kcl_row_ + 2 * i];
    values[hess_v_diag_[i]] += 2 * net_.buses[i].shunt_b * lambda[kcl_row_ + 2 * i + 1];
  }
  for (int e = 0; e < nl_; ++e) {
    const auto& d = branch_[e];
    const double vi = x[v_index(d.i)], vj = x[v_index(d.j)];
    const double delta = x[theta_index(d.i)] - x[theta_index(d.j)] - d.shift;
    const double cd = std::cos(delta), sd = std::sin(delta);
    // Order (vi, vj, ti, tj), lower triangle row by row.
    double H[10] = {};
    for (int k = 0; k < 4; ++k) {
      const double lam = -lambda[flow_row_ + 4 * e + k];
      if (lam == 0) continue;
      const auto& f = d.f[k];
      const double h = f.c * cd + f.s * sd, hp = -f.c * sd + f.s * cd;
      H[0] += lam * 2 * f.a;        // vi vi
      H[1] += lam * h;              // vj vi
      H[2] += lam * 2 * f.b;        // vj vj
      H[3] += lam * vj * hp;        // ti vi
      H[4] += lam * vi * hp;        // ti vj
      H[5] += lam * -vi * vj * h;   // ti ti
      H[6] += lam * -vj * hp;       // tj vi
      H[7] += lam * -vi * hp;       // tj vj
      H[8] += lam * vi * vj * h;    // tj ti
      H[9] += lam * -vi * vj * h;   // tj tj
    }
    for (int s = 0; s < 10; ++s) values[hess_branch_[e][s]] += H[s];
  }
  for (std::size_t t = 0; t < thermal_branch_.size(); ++t) {
    const int e = thermal_branch_[t];
    for (int side = 0; side < 2; ++side) {
      const double lam = lambda[thermal_row_ + 2 * t + side];
      values[hess_flow_diag_[4 * e + 2 * side]] += 2 * lam;
      values[hess_flow_diag_[4 * e + 2 * side + 1]] += 2 * lam;
    }
  }
}

std::string AcOpfProgram::variable_name(int col) const {
  if (col < nb_) return "v[" + std::to_string(net_.buses[col].id) + "]";
  if (col < 2 * nb_) return "theta[" + std::to_string(net_.buses[col - nb_].id) + "]";
  if (col < 2 * nb_ + ng_) return "pg[" + std::to_string(col - 2 * nb_) + "]";
  if (col < 2 * nb_ + 2 * ng_) return "qg[" + std::to_string(col - 2 * nb_ - ng_) + "]";
  static const char* names[4] = {"p_fr", "q_fr", "p_to", "q_to"};
  const int r = col - 2 * nb_ - 2 * ng_;
  return std::string(names[r % 4]) + "[" + std::to_string(r / 4) + "]";
}

AcOpfProgram build_ac(const Network& net) { return AcOpfProgram(net); }

}  // namespace opfrelax
