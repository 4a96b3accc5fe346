#include "opfrelax/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace opfrelax {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::IterationLimit: return "iteration limit";
    case SolveStatus::NumericWarning: return "numeric warning";
    case SolveStatus::InfeasibleDetected: return "infeasible";
    case SolveStatus::RestorationFailure: return "restoration failure";
  }
  return "unknown";
}

void check_config(const SolverConfig& cfg) {
  if (!(cfg.feasibility_tol > 0) || !(cfg.gap_tol > 0))
    throw std::invalid_argument("solver tolerances must be positive");
  if (!(cfg.step_fraction > 0 && cfg.step_fraction < 1))
    throw std::invalid_argument("step fraction must lie in (0, 1)");
  if (cfg.max_iterations < 1) throw std::invalid_argument("max iterations must be at least 1");
  if (!(cfg.barrier_linear > 0 && cfg.barrier_linear < 1) || !(cfg.barrier_superlinear > 1 && cfg.barrier_superlinear < 2))
    throw std::invalid_argument("barrier schedule out of range");
}

const RelaxationResult* GapReport::find(const std::string& name) const {
  for (const auto& r : relaxations)
    if (r.name == name) return &r;
  return nullptr;
}

ReportFormat parse_report_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  throw std::invalid_argument("unknown report format '" + s + "' (expected json or csv)");
}

namespace {

std::string num(std::optional<double> v, const char* fmt = "%.6f") {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, *v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

nlohmann::json opt(std::optional<double> v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

std::string write_report(std::span<const GapReport> reports, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::ostringstream os;
    os << "case,ac_cost,ac_status,ac_seconds,relaxation,bound,gap_percent,seconds,status,ac_feasible,numeric_warning\n";
    for (const GapReport& r : reports) {
      for (const RelaxationResult& rel : r.relaxations) {
        os << csv_quote(r.case_name) << ',' << num(r.ac_value) << ',' << to_string(r.ac_status) << ','
           << num(r.ac_seconds, "%.4f") << ',' << csv_quote(rel.name) << ',';
        if (!rel.applicable) {
          os << ",,,n.a.,0,0\n";
          continue;
        }
        os << num(rel.bound) << ',' << num(rel.gap_percent, "%.4f") << ',' << num(rel.seconds, "%.4f") << ','
           << to_string(rel.status) << ',' << (rel.ac_feasible ? 1 : 0) << ',' << (rel.numeric_warning ? 1 : 0)
           << '\n';
      }
    }
    return os.str();
  }

  nlohmann::json root;
  root["schema"] = "opfrelax.gap_report/1";
  root["cases"] = nlohmann::json::array();
  for (const GapReport& r : reports) {
    nlohmann::json c;
    c["case"] = r.case_name;
    c["ac"] = {{"cost", opt(r.ac_value)},
               {"status", to_string(r.ac_status)},
               {"seconds", r.ac_seconds},
               {"iterations", r.ac_iterations}};
    c["relaxations"] = nlohmann::json::array();
    for (const RelaxationResult& rel : r.relaxations) {
      nlohmann::json j;
      j["name"] = rel.name;
      j["applicable"] = rel.applicable;
      j["bound"] = opt(rel.bound);
      j["gap_percent"] = opt(rel.gap_percent);
      j["seconds"] = rel.seconds;
      j["status"] = rel.applicable ? to_string(rel.status) : std::string("n.a.");
      j["iterations"] = rel.iterations;
      j["ac_feasible"] = rel.ac_feasible;
      j["numeric_warning"] = rel.numeric_warning;
      c["relaxations"].push_back(std::move(j));
    }
    root["cases"].push_back(std::move(c));
  }
  return root.dump(2) + "\n";
}

std::string write_report(const GapReport& report, ReportFormat format) {
  return write_report(std::span<const GapReport>(&report, 1), format);
}

}  // namespace opfrelax
