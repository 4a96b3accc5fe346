#include "opfrelax/case_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace opfrelax {

namespace {

// Matpower v2 column positions (0-based).
namespace bus_col {
constexpr int id = 0, type = 1, pd = 2, qd = 3, gs = 4, bs = 5, vmax = 11, vmin = 12, count = 13;
}
namespace gen_col {
constexpr int bus = 0, qmax = 3, qmin = 4, status = 7, pmax = 8, pmin = 9, count = 10;
}
namespace branch_col {
constexpr int from = 0, to = 1, r = 2, x = 3, b = 4, rate_a = 5, ratio = 8, shift = 9, status = 10, angmin = 11,
              angmax = 12, count = 11;
}

constexpr double kDeg = kPi / 180.0;

const std::vector<std::string>& physics_free_sections() {
  static const std::vector<std::string> names{"bus_name", "gentype", "genfuel", "areas", "bus_geo", "branch_name"};
  return names;
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\'') in_str = !in_str;
    if (line[i] == '%' && !in_str) return line.substr(0, i);
  }
  return line;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& tok, int line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw ParseError(line, "invalid number '" + tok + "'");
  return v;
}

struct Cursor {
  std::vector<std::string> lines;
  std::size_t row = 0;
};

// Parses the body of a "[ ... ]" literal starting right after '['. Rows end at
// ';' or newline.
Matrix parse_matrix(Cursor& cur, std::string rest, int start_line) {
  Matrix m;
  std::vector<double> row;
  int line_no = start_line;
  auto flush = [&]() {
    if (!row.empty()) m.push_back(std::move(row));
    row.clear();
  };
  for (;;) {
    std::string token;
    bool closed = false;
    // Drop a Matlab line continuation.
    if (auto k = rest.find("..."); k != std::string::npos) rest = rest.substr(0, k);
    for (std::size_t i = 0; i <= rest.size(); ++i) {
      char c = i < rest.size() ? rest[i] : '\n';
      if (c == ' ' || c == '\t' || c == ',' || c == '\r' || c == '\n' || c == ';' || c == ']') {
        if (!token.empty()) row.push_back(parse_number(token, line_no));
        token.clear();
        if (c == ';') flush();
        if (c == ']') {
          closed = true;
          std::string tail = trim(rest.substr(i + 1));
          if (!tail.empty() && tail != ";") throw ParseError(line_no, "unexpected text after matrix: '" + tail + "'");
          break;
        }
      } else {
        token += c;
      }
    }
    flush();
    if (closed) return m;
    if (cur.row >= cur.lines.size()) throw ParseError(start_line, "unterminated matrix");
    line_no = static_cast<int>(cur.row) + 1;
    rest = strip_comment(cur.lines[cur.row++]);
  }
}

void skip_cell(Cursor& cur, std::string rest, int start_line) {
  for (;;) {
    if (rest.find('}') != std::string::npos) return;
    if (cur.row >= cur.lines.size()) throw ParseError(start_line, "unterminated cell array");
    rest = strip_comment(cur.lines[cur.row++]);
  }
}

void require_columns(const Matrix& m, std::size_t min_cols, const char* section, int first_line) {
  for (std::size_t r = 0; r < m.size(); ++r)
    if (m[r].size() < min_cols)
      throw ParseError(first_line, std::string(section) + " row " + std::to_string(r + 1) + " has " +
                                       std::to_string(m[r].size()) + " columns, expected at least " +
                                       std::to_string(min_cols));
}

}  // namespace

CaseFile read_case_sections(std::string_view text) {
  CaseFile cf;
  Cursor cur;
  {
    std::string s(text);
    std::istringstream is(s);
    std::string line;
    while (std::getline(is, line)) cur.lines.push_back(line);
  }
  bool have_base = false, have_bus = false, have_gen = false, have_branch = false, have_cost = false;
  int bus_line = 0;
  while (cur.row < cur.lines.size()) {
    const int line_no = static_cast<int>(cur.row) + 1;
    std::string line = trim(strip_comment(cur.lines[cur.row++]));
    if (line.empty()) continue;
    if (line.rfind("function", 0) == 0) {
      auto eq = line.find('=');
      cf.name = trim(eq == std::string::npos ? line.substr(8) : line.substr(eq + 1));
      continue;
    }
    if (line.rfind("mpc.", 0) != 0) throw ParseError(line_no, "unexpected statement '" + line + "'");
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected assignment");
    const std::string field = trim(line.substr(4, eq - 4));
    std::string rhs = trim(line.substr(eq + 1));

    if (!rhs.empty() && rhs.front() == '[') {
      Matrix m = parse_matrix(cur, rhs.substr(1), line_no);
      if (field == "bus") {
        require_columns(m, bus_col::count, "bus", line_no);
        cf.bus = std::move(m);
        have_bus = true;
        bus_line = line_no;
      } else if (field == "gen") {
        require_columns(m, gen_col::count, "gen", line_no);
        cf.gen = std::move(m);
        have_gen = true;
      } else if (field == "branch") {
        require_columns(m, branch_col::count, "branch", line_no);
        cf.branch = std::move(m);
        have_branch = true;
      } else if (field == "gencost") {
        require_columns(m, 4, "gencost", line_no);
        cf.gencost = std::move(m);
        have_cost = true;
      } else if (std::ranges::find(physics_free_sections(), field) != physics_free_sections().end()) {
        cf.ignored_sections.push_back(field);
      } else {
        throw ParseError(line_no, "unsupported section 'mpc." + field + "'");
      }
      continue;
    }
    if (!rhs.empty() && rhs.front() == '{') {
      if (std::ranges::find(physics_free_sections(), field) == physics_free_sections().end())
        throw ParseError(line_no, "unsupported section 'mpc." + field + "'");
      skip_cell(cur, rhs, line_no);
      cf.ignored_sections.push_back(field);
      continue;
    }
    if (!rhs.empty() && rhs.back() == ';') rhs.pop_back();
    rhs = trim(rhs);
    if (field == "version") {
      if (rhs != "'2'" && rhs != "\"2\"") throw ParseError(line_no, "unsupported case version " + rhs);
    } else if (field == "baseMVA") {
      cf.base_mva = parse_number(rhs, line_no);
      have_base = true;
    } else {
      throw ParseError(line_no, "unsupported section 'mpc." + field + "'");
    }
  }
  if (!have_base) throw ParseError(0, "missing mpc.baseMVA");
  if (!have_bus) throw ParseError(0, "missing mpc.bus section");
  if (cf.bus.empty()) throw ParseError(bus_line, "empty bus section");
  if (!have_gen) throw ParseError(0, "missing mpc.gen section");
  if (!have_branch) throw ParseError(0, "missing mpc.branch section");
  if (!have_cost) throw ParseError(0, "missing mpc.gencost section");
  return cf;
}

Network network_from_sections(const CaseFile& cf) {
  if (!(cf.base_mva > 0)) throw ParseError(0, "baseMVA must be positive");
  if (cf.bus.empty()) throw ParseError(0, "empty bus section");
  const double base = cf.base_mva;
  Network net;
  net.name = cf.name;
  net.base_mva = base;

  int ref = -1;
  std::unordered_map<int, bool> active;
  for (const auto& row : cf.bus) {
    const int id = static_cast<int>(row[bus_col::id]);
    const int type = static_cast<int>(row[bus_col::type]);
    active[id] = (type != 4);
    if (type == 4) continue;
    Bus b;
    b.id = id;
    b.p_load = row[bus_col::pd] / base;
    b.q_load = row[bus_col::qd] / base;
    b.shunt_g = row[bus_col::gs] / base;
    b.shunt_b = row[bus_col::bs] / base;
    b.v_max = row[bus_col::vmax];
    b.v_min = row[bus_col::vmin];
    if (type == 3 && ref < 0) ref = id;
    net.buses.push_back(b);
  }
  if (net.buses.empty()) throw ParseError(0, "empty bus section (no active buses)");
  auto is_active = [&](double id) {
    auto it = active.find(static_cast<int>(id));
    return it != active.end() && it->second;
  };

  if (cf.gencost.size() < cf.gen.size()) throw ParseError(0, "gencost has fewer rows than gen");
  for (std::size_t k = cf.gen.size(); k < cf.gencost.size(); ++k) {
    const auto& row = cf.gencost[k];
    for (std::size_t c = 4; c < row.size(); ++c)
      if (row[c] != 0) throw ParseError(0, "reactive power cost rows are not supported");
  }
  for (std::size_t k = 0; k < cf.gen.size(); ++k) {
    const auto& row = cf.gen[k];
    if (row[gen_col::status] <= 0 || !is_active(row[gen_col::bus])) continue;
    Generator g;
    g.bus = static_cast<int>(row[gen_col::bus]);
    g.p_max = row[gen_col::pmax] / base;
    g.p_min = row[gen_col::pmin] / base;
    g.q_max = row[gen_col::qmax] / base;
    g.q_min = row[gen_col::qmin] / base;

    const auto& cost = cf.gencost[k];
    const int model = static_cast<int>(cost[0]);
    if (model == 1) throw ParseError(0, "generator " + std::to_string(k + 1) + ": piecewise-linear costs are not supported");
    if (model != 2) throw ParseError(0, "generator " + std::to_string(k + 1) + ": unknown cost model");
    const int n = static_cast<int>(cost[3]);
    if (n < 0 || cost.size() < static_cast<std::size_t>(4 + n))
      throw ParseError(0, "generator " + std::to_string(k + 1) + ": gencost row too short");
    // Coefficients are listed highest order first; only degree <= 2 is convex-quadratic.
    for (int d = n - 1; d >= 3; --d)
      if (cost[4 + (n - 1 - d)] != 0)
        throw ParseError(0, "generator " + std::to_string(k + 1) + ": cost polynomial of degree > 2");
    auto coef = [&](int degree) { return degree < n ? cost[4 + (n - 1 - degree)] : 0.0; };
    g.c2 = coef(2);
    g.c1 = coef(1);
    g.c0 = coef(0);
    net.generators.push_back(g);
  }

  for (const auto& row : cf.branch) {
    if (row[branch_col::status] <= 0) continue;
    if (!is_active(row[branch_col::from]) || !is_active(row[branch_col::to])) continue;
    Branch br;
    br.from = static_cast<int>(row[branch_col::from]);
    br.to = static_cast<int>(row[branch_col::to]);
    br.r = row[branch_col::r];
    br.x = row[branch_col::x];
    br.b_charge = row[branch_col::b];
    br.s_max = row[branch_col::rate_a] > 0 ? row[branch_col::rate_a] / base : kInf;
    br.tap_mag = row[branch_col::ratio] != 0 ? row[branch_col::ratio] : 1.0;
    br.tap_shift = row[branch_col::shift] * kDeg;

    double bound = kInf;
    if (row.size() > static_cast<std::size_t>(branch_col::angmax)) {
      const double lo = row[branch_col::angmin], hi = row[branch_col::angmax];
      if (lo != 0 && lo > -360) bound = std::min(bound, -lo * kDeg);
      if (hi != 0 && hi < 360) bound = std::min(bound, hi * kDeg);
    }
    if (!(bound > 0))
      throw ParseError(0, "branch " + std::to_string(br.from) + "-" + std::to_string(br.to) +
                              ": angle-difference domain does not contain 0");
    br.angle_max = std::min(bound, kDefaultAngleBound);
    net.branches.push_back(br);
  }

  if (ref < 0) ref = net.generators.empty() ? net.buses.front().id : net.generators.front().bus;
  net.reference_bus = ref;
  return net;
}

Network parse_case(std::string_view text, std::string name) {
  CaseFile cf = read_case_sections(text);
  if (!name.empty()) cf.name = std::move(name);
  return network_from_sections(cf);
}

Network load_case(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open case file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_case(ss.str(), path.stem().string());
}

std::string write_case(const Network& net) {
  std::ostringstream os;
  os.precision(17);
  const double base = net.base_mva;
  auto val = [&](double v) -> std::string {
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };
  std::unordered_map<int, bool> has_gen;
  for (const auto& g : net.generators) has_gen[g.bus] = true;

  os << "function mpc = " << (net.name.empty() ? "case" : net.name) << "\n";
  os << "mpc.version = '2';\n";
  os << "mpc.baseMVA = " << val(base) << ";\n\n";
  os << "%% bus data\n%\tbus_i\ttype\tPd\tQd\tGs\tBs\tarea\tVm\tVa\tbaseKV\tzone\tVmax\tVmin\n";
  os << "mpc.bus = [\n";
  for (const Bus& b : net.buses) {
    const int type = b.id == net.reference_bus ? 3 : (has_gen.contains(b.id) ? 2 : 1);
    os << '\t' << b.id << '\t' << type << '\t' << val(b.p_load * base) << '\t' << val(b.q_load * base) << '\t'
       << val(b.shunt_g * base) << '\t' << val(b.shunt_b * base) << "\t1\t1.0\t0.0\t0.0\t1\t" << val(b.v_max)
       << '\t' << val(b.v_min) << ";\n";
  }
  os << "];\n\n%% generator data\n%\tbus\tPg\tQg\tQmax\tQmin\tVg\tmBase\tstatus\tPmax\tPmin\n";
  os << "mpc.gen = [\n";
  for (const Generator& g : net.generators)
    os << '\t' << g.bus << "\t0\t0\t" << val(g.q_max * base) << '\t' << val(g.q_min * base) << "\t1.0\t"
       << val(base) << "\t1\t" << val(g.p_max * base) << '\t' << val(g.p_min * base) << ";\n";
  os << "];\n\n%% branch data\n%\tfbus\ttbus\tr\tx\tb\trateA\trateB\trateC\tratio\tangle\tstatus\tangmin\tangmax\n";
  os << "mpc.branch = [\n";
  for (const Branch& br : net.branches) {
    const double deg = br.angle_max / kDeg;
    os << '\t' << br.from << '\t' << br.to << '\t' << val(br.r) << '\t' << val(br.x) << '\t' << val(br.b_charge)
       << '\t' << (std::isinf(br.s_max) ? std::string("0") : val(br.s_max * base)) << "\t0\t0\t" << val(br.tap_mag)
       << '\t' << val(br.tap_shift / kDeg) << "\t1\t" << val(-deg) << '\t' << val(deg) << ";\n";
  }
  os << "];\n\n%% generator cost data\n%\t2\tstartup\tshutdown\tn\tc(n-1)\t...\tc0\n";
  os << "mpc.gencost = [\n";
  for (const Generator& g : net.generators)
    os << "\t2\t0\t0\t3\t" << val(g.c2) << '\t' << val(g.c1) << '\t' << val(g.c0) << ";\n";
  os << "];\n";
  return os.str();
}

}  // namespace opfrelax
