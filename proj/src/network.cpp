#include "opfrelax/network.hpp"

#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace opfrelax {

namespace {

void add(std::vector<Violation>& out, Severity sev, std::string msg) {
  out.push_back({sev, std::move(msg)});
}

std::string where(const char* kind, std::size_t idx) {
  std::ostringstream os;
  os << kind << " #" << idx + 1 << ": ";
  return os.str();
}

}  // namespace

std::vector<Violation> validate(const Network& net) {
  std::vector<Violation> out;
  if (!(net.base_mva > 0) || !std::isfinite(net.base_mva))
    add(out, Severity::Error, "base MVA must be positive and finite");

  std::unordered_map<int, int> pos;
  for (std::size_t k = 0; k < net.buses.size(); ++k) {
    const Bus& b = net.buses[k];
    if (!pos.emplace(b.id, static_cast<int>(k)).second)
      add(out, Severity::Error, where("bus", k) + "duplicate bus id " + std::to_string(b.id));
    if (!(b.v_min > 0) || !(b.v_min <= b.v_max) || !std::isfinite(b.v_max))
      add(out, Severity::Error, where("bus", k) + "voltage bounds must satisfy 0 < v_min <= v_max < inf");
    if (!std::isfinite(b.p_load) || !std::isfinite(b.q_load))
      add(out, Severity::Error, where("bus", k) + "load must be finite");
    if (!std::isfinite(b.shunt_g) || !std::isfinite(b.shunt_b))
      add(out, Severity::Error, where("bus", k) + "shunt must be finite");
  }
  if (net.buses.empty()) add(out, Severity::Error, "network has no buses");
  if (!net.buses.empty() && !pos.contains(net.reference_bus))
    add(out, Severity::Error, "reference bus " + std::to_string(net.reference_bus) + " does not exist");

  if (net.generators.empty()) add(out, Severity::Error, "network has no generators");
  for (std::size_t k = 0; k < net.generators.size(); ++k) {
    const Generator& g = net.generators[k];
    if (!pos.contains(g.bus))
      add(out, Severity::Error, where("generator", k) + "unknown bus " + std::to_string(g.bus));
    if (!(g.p_min <= g.p_max)) add(out, Severity::Error, where("generator", k) + "p_min > p_max");
    if (!(g.q_min <= g.q_max)) add(out, Severity::Error, where("generator", k) + "q_min > q_max");
    if (!(g.c2 >= 0)) add(out, Severity::Error, where("generator", k) + "non-convex cost (c2 < 0)");
    if (!std::isfinite(g.c2) || !std::isfinite(g.c1) || !std::isfinite(g.c0))
      add(out, Severity::Error, where("generator", k) + "cost coefficients must be finite");
  }

  for (std::size_t k = 0; k < net.branches.size(); ++k) {
    const Branch& br = net.branches[k];
    if (!pos.contains(br.from) || !pos.contains(br.to))
      add(out, Severity::Error, where("branch", k) + "endpoint bus does not exist");
    else if (br.from == br.to)
      add(out, Severity::Error, where("branch", k) + "self loop");
    if (!(br.r * br.r + br.x * br.x > 0))
      add(out, Severity::Error, where("branch", k) + "zero impedance");
    if (!(br.tap_mag > 0)) add(out, Severity::Error, where("branch", k) + "tap ratio must be positive");
    if (!(br.angle_max > 0 && br.angle_max <= kPi / 2))
      add(out, Severity::Error, where("branch", k) + "PAD bound outside (0, pi/2]");
    if (!(br.s_max > 0)) add(out, Severity::Error, where("branch", k) + "thermal limit must be positive");
  }

  // Connectivity is a warning only: each island is still a well-posed program.
  if (!net.buses.empty() && pos.size() == net.buses.size()) {
    std::vector<std::vector<int>> adj(net.buses.size());
    for (const Branch& br : net.branches) {
      auto f = pos.find(br.from), t = pos.find(br.to);
      if (f == pos.end() || t == pos.end()) continue;
      adj[f->second].push_back(t->second);
      adj[t->second].push_back(f->second);
    }
    std::vector<char> seen(net.buses.size(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          ++reached;
          q.push(v);
        }
    }
    if (reached != net.buses.size())
      add(out, Severity::Warning, "network is not connected (" + std::to_string(reached) + " of " +
                                      std::to_string(net.buses.size()) + " buses reachable)");
  }
  return out;
}

bool is_valid(const Network& net) {
  for (const Violation& v : validate(net))
    if (v.severity == Severity::Error) return false;
  return true;
}

void require_valid(const Network& net) {
  std::string msg;
  for (const Violation& v : validate(net))
    if (v.severity == Severity::Error) msg += (msg.empty() ? "" : "; ") + v.message;
  if (!msg.empty()) throw std::invalid_argument("invalid network '" + net.name + "': " + msg);
}

Complex branch_impedance(const Branch& br) { return {br.r, br.x}; }

Complex branch_admittance(const Branch& br) {
  const double den = br.r * br.r + br.x * br.x;
  if (!(den > 0)) throw std::domain_error("branch admittance: zero impedance");
  return {br.r / den, -br.x / den};
}

Complex tap_ratio(const Branch& br) { return std::polar(br.tap_mag, br.tap_shift); }

Complex total_load(const Network& net) {
  Complex s{0, 0};
  for (const Bus& b : net.buses) s += Complex{b.p_load, b.q_load};
  return s;
}

std::unordered_map<int, int> bus_positions(const Network& net) {
  std::unordered_map<int, int> pos;
  pos.reserve(net.buses.size());
  for (std::size_t k = 0; k < net.buses.size(); ++k)
    if (!pos.emplace(net.buses[k].id, static_cast<int>(k)).second)
      throw std::invalid_argument("duplicate bus id " + std::to_string(net.buses[k].id));
  return pos;
}

double to_per_unit(double megawatts, double base_mva) { return megawatts / base_mva; }
double to_megawatts(double per_unit, double base_mva) { return per_unit * base_mva; }

double generation_cost(const Generator& gen, double p_pu, double base_mva) {
  const double mw = to_megawatts(p_pu, base_mva);
  return gen.c2 * mw * mw + gen.c1 * mw + gen.c0;
}

}  // namespace opfrelax
