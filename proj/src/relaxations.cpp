#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "flow_terms.hpp"
#include "opfrelax/envelopes.hpp"
#include "opfrelax/formulations.hpp"

namespace opfrelax {

namespace {

std::string bus_tag(const Network& net, int pos) { return std::to_string(net.buses[pos].id); }

std::string branch_tag(const Network& net, int e) {
  const Branch& br = net.branches[e];
  return std::to_string(br.from) + "," + std::to_string(br.to) + "#" + std::to_string(e);
}

/// Merges duplicate variables and drops zeros.
std::vector<Term> merged(const std::vector<Term>& terms) {
  std::map<int, double> acc;
  for (const Term& t : terms) acc[t.var] += t.coef;
  std::vector<Term> out;
  for (auto [v, c] : acc)
    if (c != 0) out.push_back({v, c});
  return out;
}

AffineExpr scaled(const AffineExpr& e, double k) {
  AffineExpr out = e;
  for (Term& t : out.terms) t.coef *= k;
  out.constant *= k;
  return out;
}

/// Emits coef_x2 x^2 + coef_x x + coef_y y + coef_aux aux <= rhs for every cut,
/// with x, y and aux affine expressions.
void emit_envelope(ConicProgram& prog, const std::string& family, const EnvelopeSet& env, const AffineExpr& x,
                   const AffineExpr& y, const AffineExpr& aux) {
  for (const EnvelopeCut& cut : env.cuts) {
    std::vector<Term> lin;
    double rhs = cut.rhs;
    auto add = [&](const AffineExpr& e, double k) {
      if (k == 0) return;
      for (const Term& t : e.terms) lin.push_back({t.var, k * t.coef});
      rhs -= k * e.constant;
    };
    add(x, cut.coef_x);
    add(y, cut.coef_y);
    add(aux, cut.coef_aux);
    if (cut.coef_x2 == 0) {
      prog.add_linear(family, merged(lin), Sense::LessEqual, rhs);
      continue;
    }
    // coef_x2 (a'z + k)^2
    const double q = cut.coef_x2;
    std::vector<QuadTerm> quad;
    const auto& a = x.terms;
    for (std::size_t p = 0; p < a.size(); ++p) {
      quad.push_back({a[p].var, a[p].var, q * a[p].coef * a[p].coef});
      for (std::size_t r = p + 1; r < a.size(); ++r) quad.push_back({a[p].var, a[r].var, 2 * q * a[p].coef * a[r].coef});
      lin.push_back({a[p].var, 2 * q * x.constant * a[p].coef});
    }
    rhs -= q * x.constant * x.constant;
    prog.add_quadratic(family, std::move(quad), merged(lin), rhs);
  }
}

AffineExpr var(int id) { return AffineExpr{{{id, 1.0}}, 0.0}; }

/// Phase-shifted products: psi = W_ij exp(-i shift) = vi vj exp(i d).
AffineExpr psi_re(const RelaxationLayout& L, const Branch& br, int e) {
  const double c = std::cos(br.tap_shift), s = std::sin(br.tap_shift);
  return AffineExpr{{{L.w_re[e], c}, {L.w_im[e], s}}, 0.0};
}
AffineExpr psi_im(const RelaxationLayout& L, const Branch& br, int e) {
  const double c = std::cos(br.tap_shift), s = std::sin(br.tap_shift);
  return AffineExpr{{{L.w_im[e], c}, {L.w_re[e], -s}}, 0.0};
}

void set_cost(BuiltRelaxation& rel, const Network& net) {
  QuadraticObjective obj;
  const double base = net.base_mva;
  for (std::size_t g = 0; g < net.generators.size(); ++g) {
    const Generator& gen = net.generators[g];
    const int id = rel.layout.pg[g];
    if (gen.c2 != 0) obj.quad.push_back({id, id, gen.c2 * base * base});
    if (gen.c1 != 0) obj.linear.push_back({id, gen.c1 * base});
    obj.constant += gen.c0;
  }
  rel.program.set_objective(std::move(obj));
}

}  // namespace

Variant parse_variant(const std::string& s) {
  if (s == "w" || s == "W") return Variant::W;
  if (s == "c" || s == "C") return Variant::C;
  throw std::invalid_argument("unknown variant '" + s + "' (expected w or c)");
}

std::string relaxation_name(RelaxationKind kind, Variant variant) {
  const std::string prefix = variant == Variant::W ? "W-" : "C-";
  switch (kind) {
    case RelaxationKind::Soc: return prefix + "SOC";
    case RelaxationKind::Qc: return prefix + "QC";
    case RelaxationKind::CopperPlate: return "CP";
  }
  return "?";
}

BuiltRelaxation build_soc(const Network& net, Variant variant) {
  require_valid(net);
  BuiltRelaxation rel;
  rel.kind = RelaxationKind::Soc;
  rel.variant = variant;
  ConicProgram& P = rel.program;
  RelaxationLayout& L = rel.layout;
  const auto pos = bus_positions(net);
  const int nb = static_cast<int>(net.buses.size());
  const int nl = static_cast<int>(net.branches.size());

  for (int i = 0; i < nb; ++i) {
    const Bus& b = net.buses[i];
    L.w_diag.push_back(P.add_variable("w[" + bus_tag(net, i) + "]", b.v_min * b.v_min, b.v_max * b.v_max, 1.0));
  }
  for (int e = 0; e < nl; ++e) {
    const Branch& br = net.branches[e];
    const double m = net.buses[pos.at(br.from)].v_max * net.buses[pos.at(br.to)].v_max;
    L.w_re.push_back(P.add_variable("wr[" + branch_tag(net, e) + "]", -m, m, 1.0));
    L.w_im.push_back(P.add_variable("wi[" + branch_tag(net, e) + "]", -m, m, 0.0));
  }
  for (std::size_t g = 0; g < net.generators.size(); ++g) {
    const Generator& gen = net.generators[g];
    L.pg.push_back(P.add_variable("pg[" + std::to_string(g) + "]", gen.p_min, gen.p_max, 0.0));
    L.qg.push_back(P.add_variable("qg[" + std::to_string(g) + "]", gen.q_min, gen.q_max, 0.0));
  }
  std::vector<int>* flows[4] = {&L.p_from, &L.q_from, &L.p_to, &L.q_to};
  const char* flow_names[4] = {"p_fr", "q_fr", "p_to", "q_to"};
  for (int e = 0; e < nl; ++e)
    for (int k = 0; k < 4; ++k)
      flows[k]->push_back(P.add_variable(std::string(flow_names[k]) + "[" + branch_tag(net, e) + "]", -kInf, kInf));
  if (variant == Variant::C)
    for (int e = 0; e < nl; ++e) L.current_sq.push_back(P.add_variable("l[" + branch_tag(net, e) + "]", 0.0, kInf));

  // Power balance per bus: generation - load - shunt = outgoing flows.
  std::vector<std::vector<Term>> kp(nb), kq(nb);
  for (std::size_t g = 0; g < net.generators.size(); ++g) {
    const int i = pos.at(net.generators[g].bus);
    kp[i].push_back({L.pg[g], 1.0});
    kq[i].push_back({L.qg[g], 1.0});
  }
  for (int e = 0; e < nl; ++e) {
    const int i = pos.at(net.branches[e].from), j = pos.at(net.branches[e].to);
    kp[i].push_back({L.p_from[e], -1.0});
    kq[i].push_back({L.q_from[e], -1.0});
    kp[j].push_back({L.p_to[e], -1.0});
    kq[j].push_back({L.q_to[e], -1.0});
  }
  for (int i = 0; i < nb; ++i) {
    const Bus& b = net.buses[i];
    kp[i].push_back({L.w_diag[i], -b.shunt_g});
    kq[i].push_back({L.w_diag[i], b.shunt_b});
    P.add_linear("kcl", merged(kp[i]), Sense::Equal, b.p_load);
    P.add_linear("kcl", merged(kq[i]), Sense::Equal, b.q_load);
  }

  for (int e = 0; e < nl; ++e) {
    const Branch& br = net.branches[e];
    const int i = pos.at(br.from), j = pos.at(br.to);
    for (int k = 0; k < 4; ++k) {
      const auto w = detail::w_flow(br, k);
      P.add_linear("flow",
                   merged({{(*flows[k])[e], 1.0},
                           {L.w_diag[i], -w.wii},
                           {L.w_diag[j], -w.wjj},
                           {L.w_re[e], -w.wr},
                           {L.w_im[e], -w.wi}}),
                   Sense::Equal, 0.0);
    }
    if (std::isfinite(br.s_max)) {
      const double s2 = br.s_max * br.s_max;
      P.add_quadratic("thermal", {{L.p_from[e], L.p_from[e], 1.0}, {L.q_from[e], L.q_from[e], 1.0}}, {}, s2);
      P.add_quadratic("thermal", {{L.p_to[e], L.p_to[e], 1.0}, {L.q_to[e], L.q_to[e], 1.0}}, {}, s2);
    }
    // -tan(u) Re psi <= Im psi <= tan(u) Re psi. The row pair serves both
    // directions since the bound is symmetric.
    if (br.angle_max < kDefaultAngleBound) {
      const double tu = std::tan(br.angle_max);
      const AffineExpr re = psi_re(L, br, e), im = psi_im(L, br, e);
      std::vector<Term> up, lo;
      for (const Term& t : im.terms) {
        up.push_back(t);
        lo.push_back({t.var, -t.coef});
      }
      for (const Term& t : re.terms) {
        up.push_back({t.var, -tu * t.coef});
        lo.push_back({t.var, -tu * t.coef});
      }
      P.add_linear("pad", merged(up), Sense::LessEqual, 0.0);
      P.add_linear("pad", merged(lo), Sense::LessEqual, 0.0);
    }
    const double t2 = br.tap_mag * br.tap_mag;
    if (variant == Variant::W) {
      // |W_ij|^2 <= W_ii W_jj
      P.add_rotated_cone("soc_w", {var(L.w_re[e]), var(L.w_im[e])}, var(L.w_diag[i]), var(L.w_diag[j]));
    } else {
      // |S_ij|^2 <= (W_ii / t^2) l
      P.add_rotated_cone("soc_c", {var(L.p_from[e]), var(L.q_from[e])}, scaled(var(L.w_diag[i]), 1.0 / t2),
                         var(L.current_sq[e]));
      // Series current |I_s|^2 = l + beta^2 W_ii/t^2 + b_c q_ij.
      const Complex z = branch_impedance(br);
      const double beta = br.b_charge / 2;
      const double r = z.real(), x = z.imag();
      const int l = L.current_sq[e];
      P.add_linear("loss",
                   merged({{L.p_from[e], 1.0},
                           {L.p_to[e], 1.0},
                           {l, -r},
                           {L.w_diag[i], -r * beta * beta / t2},
                           {L.q_from[e], -r * br.b_charge}}),
                   Sense::Equal, 0.0);
      P.add_linear("loss",
                   merged({{L.q_from[e], 1.0 - x * br.b_charge},
                           {L.q_to[e], 1.0},
                           {l, -x},
                           {L.w_diag[i], -x * beta * beta / t2 + beta / t2},
                           {L.w_diag[j], beta}}),
                   Sense::Equal, 0.0);
    }
  }
  set_cost(rel, net);
  return rel;
}

BuiltRelaxation build_qc(const Network& net, Variant variant) {
  for (const Branch& br : net.branches)
    if (!(br.angle_max > 0) || br.angle_max > kPi / 2)
      throw std::invalid_argument("QC relaxation needs every angle bound in (0, pi/2]");
  BuiltRelaxation rel = build_soc(net, variant);
  rel.kind = RelaxationKind::Qc;
  ConicProgram& P = rel.program;
  RelaxationLayout& L = rel.layout;
  const auto pos = bus_positions(net);
  const int nb = static_cast<int>(net.buses.size());
  const int nl = static_cast<int>(net.branches.size());
  const int ref = pos.at(net.reference_bus);

  for (int i = 0; i < nb; ++i) {
    const Bus& b = net.buses[i];
    L.v.push_back(P.add_variable("v[" + bus_tag(net, i) + "]", b.v_min, b.v_max, 1.0));
  }
  for (int i = 0; i < nb; ++i) {
    const double lim = i == ref ? 0.0 : kInf;
    L.theta.push_back(P.add_variable("theta[" + bus_tag(net, i) + "]", -lim, lim, 0.0));
  }
  for (int i = 0; i < nb; ++i) {
    const Bus& b = net.buses[i];
    emit_envelope(P, "tconv", square_envelope(b.v_min, b.v_max), var(L.v[i]), {}, var(L.w_diag[i]));
  }
  for (int e = 0; e < nl; ++e) {
    const Branch& br = net.branches[e];
    const int i = pos.at(br.from), j = pos.at(br.to);
    const Bus &bi = net.buses[i], &bj = net.buses[j];
    const double u = br.angle_max;
    const EnvelopeSet env_vv = mccormick(bi.v_min, bi.v_max, bj.v_min, bj.v_max);
    const EnvelopeSet env_cs = cosine_envelope(u);
    const EnvelopeSet env_sn = sine_envelope(u);
    const std::string tag = branch_tag(net, e);
    L.vv.push_back(P.add_variable("vv[" + tag + "]", env_vv.aux_lo, env_vv.aux_hi, 1.0));
    L.cs.push_back(P.add_variable("cs[" + tag + "]", env_cs.aux_lo, env_cs.aux_hi, 1.0));
    L.sn.push_back(P.add_variable("sn[" + tag + "]", env_sn.aux_lo, env_sn.aux_hi, 0.0));

    const AffineExpr delta{{{L.theta[i], 1.0}, {L.theta[j], -1.0}}, -br.tap_shift};
    P.add_linear("angle_domain", {{L.theta[i], 1.0}, {L.theta[j], -1.0}}, Sense::LessEqual, u + br.tap_shift);
    P.add_linear("angle_domain", {{L.theta[i], 1.0}, {L.theta[j], -1.0}}, Sense::GreaterEqual, -u + br.tap_shift);
    emit_envelope(P, "mccormick_vv", env_vv, var(L.v[i]), var(L.v[j]), var(L.vv.back()));
    emit_envelope(P, "cconv", env_cs, delta, {}, var(L.cs.back()));
    emit_envelope(P, "sconv", env_sn, delta, {}, var(L.sn.back()));
    emit_envelope(P, "mccormick_re", compose_product(env_vv, env_cs), var(L.vv.back()), var(L.cs.back()),
                  psi_re(L, br, e));
    emit_envelope(P, "mccormick_im", compose_product(env_vv, env_sn), var(L.vv.back()), var(L.sn.back()),
                  psi_im(L, br, e));
  }
  return rel;
}

BuiltRelaxation build_copper_plate(const Network& net) {
  require_valid(net);
  for (const Branch& br : net.branches)
    if (br.r < 0) throw NotApplicable("copper plate needs nonnegative branch resistance");
  BuiltRelaxation rel;
  rel.kind = RelaxationKind::CopperPlate;
  std::vector<Term> bal;
  for (std::size_t g = 0; g < net.generators.size(); ++g) {
    const Generator& gen = net.generators[g];
    rel.layout.pg.push_back(rel.program.add_variable("pg[" + std::to_string(g) + "]", gen.p_min, gen.p_max, 0.0));
    bal.push_back({rel.layout.pg.back(), 1.0});
  }
  // Shunts are charged at nominal voltage.
  double demand = 0;
  for (const Bus& b : net.buses) demand += b.p_load + b.shunt_g;
  rel.program.add_linear("balance", bal, Sense::Equal, demand);
  set_cost(rel, net);
  return rel;
}

BuiltRelaxation build_relaxation(const Network& net, RelaxationKind kind, Variant variant) {
  switch (kind) {
    case RelaxationKind::Soc: return build_soc(net, variant);
    case RelaxationKind::Qc: return build_qc(net, variant);
    case RelaxationKind::CopperPlate: return build_copper_plate(net);
  }
  throw std::invalid_argument("unknown relaxation kind");
}

std::vector<double> lift_ac_point(const BuiltRelaxation& rel, const Network& net, const AcPoint& pt) {
  const RelaxationLayout& L = rel.layout;
  std::vector<double> x = rel.program.start_point();
  const auto pos = bus_positions(net);
  for (std::size_t g = 0; g < L.pg.size(); ++g) x[L.pg[g]] = pt.pg[g];
  for (std::size_t g = 0; g < L.qg.size(); ++g) x[L.qg[g]] = pt.qg[g];
  for (std::size_t i = 0; i < L.w_diag.size(); ++i) x[L.w_diag[i]] = pt.v[i] * pt.v[i];
  for (std::size_t i = 0; i < L.v.size(); ++i) x[L.v[i]] = pt.v[i];
  for (std::size_t i = 0; i < L.theta.size(); ++i) x[L.theta[i]] = pt.theta[i];
  for (std::size_t e = 0; e < L.w_re.size(); ++e) {
    const Branch& br = net.branches[e];
    const int i = pos.at(br.from), j = pos.at(br.to);
    const double vi = pt.v[i], vj = pt.v[j], ti = pt.theta[i], tj = pt.theta[j];
    x[L.w_re[e]] = vi * vj * std::cos(ti - tj);
    x[L.w_im[e]] = vi * vj * std::sin(ti - tj);
    const double f[4] = {ac_flow(br, 0, vi, vj, ti, tj), ac_flow(br, 1, vi, vj, ti, tj), ac_flow(br, 2, vi, vj, ti, tj),
                         ac_flow(br, 3, vi, vj, ti, tj)};
    x[L.p_from[e]] = f[0];
    x[L.q_from[e]] = f[1];
    x[L.p_to[e]] = f[2];
    x[L.q_to[e]] = f[3];
    if (!L.current_sq.empty())
      x[L.current_sq[e]] = (f[0] * f[0] + f[1] * f[1]) * br.tap_mag * br.tap_mag / (vi * vi);
    if (!L.vv.empty()) {
      const double d = ti - tj - br.tap_shift;
      x[L.vv[e]] = vi * vj;
      x[L.cs[e]] = std::cos(d);
      x[L.sn[e]] = std::sin(d);
    }
  }
  return x;
}

}  // namespace opfrelax
