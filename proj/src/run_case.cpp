#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "opfrelax/analysis.hpp"

namespace opfrelax {

std::vector<std::string> parse_relaxation_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string s;
    for (char c : item)
      if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s.empty()) continue;
    if (s != "soc" && s != "qc" && s != "cp") throw std::invalid_argument("unknown relaxation '" + s + "'");
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  if (out.empty()) throw std::invalid_argument("no relaxation selected");
  return out;
}

GapReport run_case(const Network& net, const RunOptions& opt) {
  check_config(opt.solver);
  require_valid(net);
  GapReport rep;
  rep.case_name = net.name;
  {
    const AcOpfProgram ac(net);
    const Solution s = solve_local_ac(ac, opt.solver);
    rep.ac_status = s.status;
    rep.ac_seconds = s.seconds;
    rep.ac_iterations = s.iterations;
    if (s.optimal()) rep.ac_value = s.objective;
  }
  for (const std::string& r : opt.relaxations) {
    const RelaxationKind kind = r == "soc" ? RelaxationKind::Soc : r == "qc" ? RelaxationKind::Qc : RelaxationKind::CopperPlate;
    RelaxationResult res;
    res.name = relaxation_name(kind, opt.variant);
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const BuiltRelaxation rel = build_relaxation(net, kind, opt.variant);
      const Solution s = solve_conic(rel.program, opt.solver);
      res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      res.status = s.status;
      res.iterations = s.iterations;
      res.numeric_warning = s.status == SolveStatus::NumericWarning;
      if (s.optimal() || res.numeric_warning) res.bound = s.objective;
      if (res.bound && rep.ac_value) res.gap_percent = optimality_gap(*rep.ac_value, *res.bound);
      if (s.optimal() && kind != RelaxationKind::CopperPlate) res.ac_feasible = is_ac_feasible(rel, net, s.x);
    } catch (const NotApplicable&) {
      res.applicable = false;
    }
    rep.relaxations.push_back(std::move(res));
  }
  return rep;
}

std::vector<BenchRow> bench_wc(const Network& net, int repetitions, const SolverConfig& cfg) {
  std::vector<BenchRow> rows;
  if (repetitions <= 0) return rows;
  for (RelaxationKind kind : {RelaxationKind::Soc, RelaxationKind::Qc})
    for (Variant variant : {Variant::W, Variant::C}) {
      BenchRow row;
      row.case_name = net.name;
      row.formulation = relaxation_name(kind, variant);
      std::vector<double> times;
      for (int k = 0; k < repetitions; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        const BuiltRelaxation rel = build_relaxation(net, kind, variant);
        const Solution s = solve_conic(rel.program, cfg);
        times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        row.iterations = s.iterations;
        row.status = s.status;
      }
      std::sort(times.begin(), times.end());
      const std::size_t m = times.size() / 2;
      row.median_seconds = times.size() % 2 ? times[m] : (times[m - 1] + times[m]) / 2;
      rows.push_back(std::move(row));
    }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "case,formulation,median_seconds,iterations,status\n";
  char buf[64];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f", r.median_seconds);
    out += r.case_name + "," + r.formulation + "," + buf + "," + std::to_string(r.iterations) + "," +
           to_string(r.status) + "\n";
  }
  return out;
}

}  // namespace opfrelax
