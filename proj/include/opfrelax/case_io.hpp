#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "opfrelax/network.hpp"

namespace opfrelax {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

using Matrix = std::vector<std::vector<double>>;

/// Raw sections of a Matpower (v2) case file, before unit conversion.
struct CaseFile {
  std::string name;
  double base_mva = 0;
  Matrix bus, gen, branch, gencost;
  /// Sections that carry no physics (bus_name, areas, ...) and were skipped.
  std::vector<std::string> ignored_sections;
};

CaseFile read_case_sections(std::string_view text);

/// Converts a case to per-unit. Out-of-service equipment and isolated
/// (type 4) buses are dropped. angmin/angmax become the symmetric bound
/// min(|angmin|, angmax), clamped to (0, kDefaultAngleBound]; zero or
/// +/-360 means no limit.
Network parse_case(std::string_view text, std::string name = {});
Network network_from_sections(const CaseFile& file);

Network load_case(const std::filesystem::path& path);

/// Embedded cases: "case3_base" and "case3_sad18".
Network builtin_case(std::string_view name);
std::string builtin_case_text(std::string_view name);
std::vector<std::string> builtin_case_names();

/// Writes a Matpower case that parse_case reads back field-for-field.
std::string write_case(const Network& net);

}  // namespace opfrelax
