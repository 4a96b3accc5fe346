#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

#include "flow_terms.hpp"
#include "opfrelax/formulations.hpp"

namespace opfrelax {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class SdpBuilder {
 public:
  explicit SdpBuilder(SdpExport& out) : out_(out) {}

  int variable(std::string name, double cost) {
    out_.variable_names.push_back(std::move(name));
    out_.objective.push_back(cost);
    return static_cast<int>(out_.objective.size());  // 1-based
  }

  int block(int size) {
    out_.block_sizes.push_back(size);
    return static_cast<int>(out_.block_sizes.size());
  }

  /// Adds value to entry (i, j) of F_matrix in block; indices 1-based.
  void entry(int matrix, int blk, int i, int j, double value) {
    if (value == 0) return;
    if (i > j) std::swap(i, j);
    acc_[{matrix, blk, i, j}] += value;
  }

  void finish() {
    for (const auto& [key, v] : acc_) {
      const auto [matrix, blk, i, j] = key;
      if (v != 0) out_.entries.push_back({matrix, blk, i, j, v});
    }
  }

 private:
  SdpExport& out_;
  std::map<std::tuple<int, int, int, int>, double> acc_;
};

}  // namespace

SdpExport export_sdp(const Network& net) {
  require_valid(net);
  SdpExport out;
  SdpBuilder sb(out);
  const auto pos = bus_positions(net);
  const int nb = static_cast<int>(net.buses.size());
  const double base = net.base_mva;

  // Variables: W_ii, then Re/Im W_ij for every i < j, then generator terms.
  std::vector<int> wd(nb);
  for (int i = 0; i < nb; ++i) wd[i] = sb.variable("w[" + std::to_string(net.buses[i].id) + "]", 0.0);
  std::vector<std::vector<int>> wr(nb, std::vector<int>(nb, 0)), wi = wr;
  for (int i = 0; i < nb; ++i)
    for (int j = i + 1; j < nb; ++j) {
      const std::string tag = std::to_string(net.buses[i].id) + "," + std::to_string(net.buses[j].id);
      wr[i][j] = sb.variable("wr[" + tag + "]", 0.0);
      wi[i][j] = sb.variable("wi[" + tag + "]", 0.0);
    }
  std::vector<int> pg, qg, tg;
  for (std::size_t g = 0; g < net.generators.size(); ++g) {
    const Generator& gen = net.generators[g];
    pg.push_back(sb.variable("pg[" + std::to_string(g) + "]", gen.c2 > 0 ? 0.0 : gen.c1 * base));
    qg.push_back(sb.variable("qg[" + std::to_string(g) + "]", 0.0));
    tg.push_back(gen.c2 > 0 ? sb.variable("t[" + std::to_string(g) + "]", 1.0) : 0);
    out.objective_offset += gen.c0;
  }

  // Real embedding [Re W, -Im W; Im W, Re W].
  const int bw = sb.block(2 * nb);
  for (int i = 0; i < nb; ++i) {
    sb.entry(wd[i], bw, i + 1, i + 1, 1.0);
    sb.entry(wd[i], bw, nb + i + 1, nb + i + 1, 1.0);
    for (int j = i + 1; j < nb; ++j) {
      sb.entry(wr[i][j], bw, i + 1, j + 1, 1.0);
      sb.entry(wr[i][j], bw, nb + i + 1, nb + j + 1, 1.0);
      // Im W(i,j) sits at (nb+i, j); Im W(j,i) = -Im W(i,j) at (nb+j, i).
      sb.entry(wi[i][j], bw, j + 1, nb + i + 1, 1.0);
      sb.entry(wi[i][j], bw, i + 1, nb + j + 1, -1.0);
    }
  }

  // Cost epigraph: [[1, sqrt(c2) P], [sqrt(c2) P, t - c1 P]] PSD with P in MW.
  for (std::size_t g = 0; g < net.generators.size(); ++g) {
    const Generator& gen = net.generators[g];
    if (gen.c2 <= 0) continue;
    const int b = sb.block(2);
    sb.entry(0, b, 1, 1, -1.0);
    sb.entry(pg[g], b, 1, 2, std::sqrt(gen.c2) * base);
    sb.entry(tg[g], b, 2, 2, 1.0);
    sb.entry(pg[g], b, 2, 2, -gen.c1 * base);
  }

  // Flow k of branch e as (variable, coefficient) pairs over W.
  auto flow_terms = [&](int e, int k) {
    const Branch& br = net.branches[e];
    const int i = pos.at(br.from), j = pos.at(br.to);
    const auto w = detail::w_flow(br, k);
    std::vector<std::pair<int, double>> t{{wd[i], w.wii}, {wd[j], w.wjj}};
    if (i < j) {
      t.push_back({wr[i][j], w.wr});
      t.push_back({wi[i][j], w.wi});
    } else {
      t.push_back({wr[j][i], w.wr});
      t.push_back({wi[j][i], -w.wi});
    }
    return t;
  };

  // Thermal limits: [[s, p, q], [p, s, 0], [q, 0, s]] PSD.
  for (std::size_t e = 0; e < net.branches.size(); ++e) {
    const double s = net.branches[e].s_max;
    if (!std::isfinite(s)) continue;
    for (int side = 0; side < 2; ++side) {
      const int b = sb.block(3);
      for (int d = 1; d <= 3; ++d) sb.entry(0, b, d, d, -s);
      for (auto [v, c] : flow_terms(static_cast<int>(e), 2 * side)) sb.entry(v, b, 1, 2, c);
      for (auto [v, c] : flow_terms(static_cast<int>(e), 2 * side + 1)) sb.entry(v, b, 1, 3, c);
    }
  }

  // Linear rows a'x >= r in one diagonal block; equalities as two rows.
  struct Row {
    std::vector<std::pair<int, double>> terms;
    double rhs;
  };
  std::vector<Row> rows;
  auto geq = [&](std::vector<std::pair<int, double>> t, double r) { rows.push_back({std::move(t), r}); };
  auto eq = [&](std::vector<std::pair<int, double>> t, double r) {
    std::vector<std::pair<int, double>> neg = t;
    for (auto& [v, c] : neg) c = -c;
    geq(std::move(t), r);
    geq(std::move(neg), -r);
  };
  for (int i = 0; i < nb; ++i) {
    const Bus& bus = net.buses[i];
    std::vector<std::pair<int, double>> kp{{wd[i], -bus.shunt_g}}, kq{{wd[i], bus.shunt_b}};
    for (std::size_t g = 0; g < net.generators.size(); ++g)
      if (pos.at(net.generators[g].bus) == i) {
        kp.push_back({pg[g], 1.0});
        kq.push_back({qg[g], 1.0});
      }
    for (std::size_t e = 0; e < net.branches.size(); ++e) {
      const Branch& br = net.branches[e];
      for (int side = 0; side < 2; ++side) {
        if (pos.at(side == 0 ? br.from : br.to) != i) continue;
        for (auto [v, c] : flow_terms(static_cast<int>(e), 2 * side)) kp.push_back({v, -c});
        for (auto [v, c] : flow_terms(static_cast<int>(e), 2 * side + 1)) kq.push_back({v, -c});
      }
    }
    eq(std::move(kp), bus.p_load);
    eq(std::move(kq), bus.q_load);
    geq({{wd[i], 1.0}}, bus.v_min * bus.v_min);
    geq({{wd[i], -1.0}}, -bus.v_max * bus.v_max);
  }
  for (std::size_t g = 0; g < net.generators.size(); ++g) {
    const Generator& gen = net.generators[g];
    if (std::isfinite(gen.p_min)) geq({{pg[g], 1.0}}, gen.p_min);
    if (std::isfinite(gen.p_max)) geq({{pg[g], -1.0}}, -gen.p_max);
    if (std::isfinite(gen.q_min)) geq({{qg[g], 1.0}}, gen.q_min);
    if (std::isfinite(gen.q_max)) geq({{qg[g], -1.0}}, -gen.q_max);
  }
  for (const Branch& br : net.branches) {
    if (!(br.angle_max < kDefaultAngleBound)) continue;
    const int i = pos.at(br.from), j = pos.at(br.to);
    const double sgn = i < j ? 1.0 : -1.0;
    const int r = i < j ? wr[i][j] : wr[j][i], m = i < j ? wi[i][j] : wi[j][i];
    const double c = std::cos(br.tap_shift), s = std::sin(br.tap_shift), tu = std::tan(br.angle_max);
    // psi_re = c Re W + s Im W; psi_im = c Im W - s Re W; tan(u) psi_re -/+ psi_im >= 0.
    geq({{r, tu * c + s}, {m, sgn * (tu * s - c)}}, 0.0);
    geq({{r, tu * c - s}, {m, sgn * (tu * s + c)}}, 0.0);
  }
  if (!rows.empty()) {
    const int b = sb.block(-static_cast<int>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const int d = static_cast<int>(k) + 1;
      for (auto [v, c] : rows[k].terms) sb.entry(v, b, d, d, c);
      sb.entry(0, b, d, d, rows[k].rhs);
    }
  }
  sb.finish();
  return out;
}

std::string SdpExport::to_sdpa() const {
  std::string s;
  s += "* opfrelax SDP relaxation export (SDPA sparse format)\n";
  s += "* minimize c'x + offset subject to sum_k F_k x_k - F_0 PSD\n";
  s += "* objective_offset " + fmt(objective_offset) + "\n";
  for (std::size_t k = 0; k < variable_names.size(); ++k)
    s += "* x" + std::to_string(k + 1) + " " + variable_names[k] + "\n";
  s += std::to_string(objective.size()) + " = mDIM\n";
  s += std::to_string(block_sizes.size()) + " = nBLOCK\n";
  for (std::size_t k = 0; k < block_sizes.size(); ++k) s += (k ? " " : "") + std::to_string(block_sizes[k]);
  s += " = bLOCKsTRUCT\n";
  for (std::size_t k = 0; k < objective.size(); ++k) s += (k ? " " : "") + fmt(objective[k]);
  s += "\n";
  for (const Entry& e : entries)
    s += std::to_string(e.matrix) + " " + std::to_string(e.block) + " " + std::to_string(e.i) + " " +
         std::to_string(e.j) + " " + fmt(e.value) + "\n";
  return s;
}

SdpExport export_sdp(const Network& net, const std::filesystem::path& path) {
  SdpExport ex = export_sdp(net);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << ex.to_sdpa();
  if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
  return ex;
}

}  // namespace opfrelax
