#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "opfrelax/formulations.hpp"
#include "opfrelax/report.hpp"
#include "opfrelax/solution.hpp"

namespace opfrelax {

/// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // a solve or check did not pass
inline constexpr int kExitUsage = 2;    // bad arguments or I/O

struct CliConfig {
  std::string subcommand;
  std::vector<std::string> cases;  // paths or builtin:NAME
  std::vector<std::string> relaxations{"soc", "qc", "cp"};
  Variant variant = Variant::W;
  SolverConfig solver;
  std::string out;  // empty: stdout
  ReportFormat format = ReportFormat::Json;
  std::uint64_t seed = 42;
  int samples = 1000;
  int networks = 3;
  int repetitions = 5;
  bool inject_fault = false;
};

/// "builtin:NAME" or a Matpower file path.
Network resolve_case(const std::string& spec);

/// Batch parallelism: OPFRELAX_THREADS if set and positive, else 1.
int batch_threads();

/// args excludes the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace opfrelax
