#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opfrelax/solution.hpp"

namespace opfrelax {

/// One relaxation column of a gap table row.
struct RelaxationResult {
  std::string name;  // e.g. "W-SOC", "C-QC", "CP"
  bool applicable = true;
  std::optional<double> bound;        // $/h
  std::optional<double> gap_percent;  // 100 (heuristic - bound) / heuristic
  double seconds = 0;
  SolveStatus status = SolveStatus::IterationLimit;
  int iterations = 0;
  /// The relaxation point is itself a feasible AC power flow.
  bool ac_feasible = false;
  bool numeric_warning = false;
};

struct GapReport {
  std::string case_name;
  std::optional<double> ac_value;
  SolveStatus ac_status = SolveStatus::IterationLimit;
  double ac_seconds = 0;
  int ac_iterations = 0;
  std::vector<RelaxationResult> relaxations;

  const RelaxationResult* find(const std::string& name) const;
};

enum class ReportFormat { Json, Csv };

ReportFormat parse_report_format(const std::string& s);

/// CSV has one row per (case, relaxation); JSON nests relaxations under each
/// case. Both schemas are documented in docs/report_schema.md.
std::string write_report(std::span<const GapReport> reports, ReportFormat format);
std::string write_report(const GapReport& report, ReportFormat format);

}  // namespace opfrelax
