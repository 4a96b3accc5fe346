#include "opfrelax/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>

#include "opfrelax/analysis.hpp"
#include "opfrelax/case_io.hpp"

namespace opfrelax {

Network resolve_case(const std::string& spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) return builtin_case(spec.substr(prefix.size()));
  if (!std::filesystem::exists(spec)) throw std::runtime_error("case file not found: " + spec);
  return load_case(spec);
}

int batch_threads() {
  const char* env = std::getenv("OPFRELAX_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

namespace {

std::string num(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool write_output(const CliConfig& cfg, const std::string& text, std::ostream& out, std::ostream& err) {
  if (cfg.out.empty()) {
    out << text;
    return true;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (f) f << text;
  if (!f) {
    err << "error: cannot write '" << cfg.out << "'\n";
    return false;
  }
  return true;
}

int cmd_solve(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<Network> nets;
  for (const std::string& c : cfg.cases) nets.push_back(resolve_case(c));

  RunOptions opt;
  opt.relaxations = cfg.relaxations;
  opt.variant = cfg.variant;
  opt.solver = cfg.solver;
  std::vector<GapReport> reports(nets.size());
  // Cases are independent; each solve stays single-threaded.
  const int workers = std::min<int>(batch_threads(), static_cast<int>(nets.size()));
  if (workers <= 1) {
    for (std::size_t k = 0; k < nets.size(); ++k) reports[k] = run_case(nets[k], opt);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < nets.size(); k += workers) reports[k] = run_case(nets[k], opt);
      });
    for (auto& t : pool) t.join();
  }

  bool ok = true;
  std::ostream& log = cfg.out.empty() ? err : out;
  for (const GapReport& r : reports) {
    log << r.case_name << "  AC " << (r.ac_value ? num("%.2f", *r.ac_value) : "---") << "  "
        << to_string(r.ac_status) << "\n";
    ok = ok && r.ac_status == SolveStatus::Optimal;
    for (const RelaxationResult& x : r.relaxations) {
      if (!x.applicable) {
        log << "  " << x.name << "  n.a.\n";
        continue;
      }
      log << "  " << x.name << "  bound " << (x.bound ? num("%.2f", *x.bound) : "---") << "  gap "
          << (x.gap_percent ? num("%.2f%%", *x.gap_percent) : "---") << "  " << to_string(x.status)
          << (x.ac_feasible ? "  ac-feasible" : "") << "\n";
      ok = ok && x.status == SolveStatus::Optimal;
    }
  }
  if (!write_output(cfg, write_report(std::span<const GapReport>(reports), cfg.format), out, err)) return kExitUsage;
  return ok ? kExitOk : kExitFailure;
}

int cmd_check(const CliConfig& cfg, std::ostream& out) {
  bool ok = true;
  const double perturb = cfg.inject_fault ? 1e-3 : 0.0;
  if (cfg.samples <= 0) {
    out << "lemma1: no samples\n";
  } else {
    for (bool extended : {false, true}) {
      const double e = lemma1_suite(cfg.samples, cfg.seed, extended, perturb);
      const bool pass = e <= 1e-9;
      ok = ok && pass;
      out << "lemma1 " << (extended ? "extended" : "plain") << " max err " << num("%.1e", e) << " over "
          << cfg.samples << " samples  " << (pass ? "ok" : "FAIL") << "\n";
    }
  }
  std::vector<Network> nets{builtin_case("case3_base")};
  std::mt19937_64 rng(cfg.seed);
  for (int k = 0; k < cfg.networks; ++k) {
    nets.push_back(random_extended_network(nets.front(), rng));
    nets.back().name += std::to_string(k + 1);
  }
  for (const Network& net : nets)
    for (RelaxationKind kind : {RelaxationKind::Soc, RelaxationKind::Qc}) {
      const EquivalenceResult r = equivalence_check(net, kind, cfg.solver);
      const bool pass = r.pass();
      ok = ok && pass;
      out << "equivalence " << net.name << " " << r.name;
      if (!r.error.empty())
        out << " error: " << r.error;
      else
        out << " rel diff " << num("%.1e", r.relative_difference) << " W->C " << num("%.1e", r.w_to_c_residual)
            << " C->W " << num("%.1e", r.c_to_w_residual);
      out << "  " << (pass ? "ok" : "FAIL") << "\n";
    }
  return ok ? kExitOk : kExitFailure;
}

int cmd_export_sdp(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const Network net = resolve_case(cfg.cases.front());
  SdpExport ex;
  try {
    ex = export_sdp(net, cfg.out);
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  out << cfg.out << ": " << ex.objective.size() << " variables, " << ex.block_sizes.size() << " blocks (";
  for (std::size_t k = 0; k < ex.block_sizes.size(); ++k) out << (k ? " " : "") << ex.block_sizes[k];
  out << ")\n";
  return kExitOk;
}

int cmd_bench(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<BenchRow> rows;
  for (const std::string& c : cfg.cases) {
    const auto r = bench_wc(resolve_case(c), cfg.repetitions, cfg.solver);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (!write_output(cfg, bench_csv(rows), out, err)) return kExitUsage;
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.status == SolveStatus::Optimal; });
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Convex relaxations of AC optimal power flow", "opfrelax"};
  app.require_subcommand(1);
  double tol = cfg.solver.feasibility_tol;
  std::string relax = "soc,qc,cp", variant = "w", format = "json";

  auto solver_flags = [&](CLI::App* s) {
    s->add_option("--tol", tol, "feasibility and gap tolerance")->check(CLI::PositiveNumber);
    s->add_option("--max-iter", cfg.solver.max_iterations, "iteration cap")->check(CLI::PositiveNumber);
  };
  CLI::App* solve = app.add_subcommand("solve", "solve AC and relaxations, write a gap report");
  solve->add_option("--case", cfg.cases, "case file or builtin:NAME")->required();
  solve->add_option("--relax", relax, "comma list of soc, qc, cp");
  solve->add_option("--variant", variant, "w or c")->check(CLI::IsMember({"w", "c", "W", "C"}));
  solve->add_option("--out", cfg.out, "report path (default stdout)");
  solve->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  solver_flags(solve);

  CLI::App* check = app.add_subcommand("check", "identity and W/C equivalence suites");
  check->add_option("--seed", cfg.seed, "random seed");
  check->add_option("--samples", cfg.samples, "identity samples per mode")->check(CLI::NonNegativeNumber);
  check->add_option("--networks", cfg.networks, "random extended networks")->check(CLI::NonNegativeNumber);
  check->add_flag("--inject-fault", cfg.inject_fault)->group("");
  solver_flags(check);

  CLI::App* sdp = app.add_subcommand("export-sdp", "write the SDP relaxation in SDPA sparse format");
  sdp->add_option("--case", cfg.cases, "case file or builtin:NAME")->required()->expected(1);
  sdp->add_option("--out", cfg.out, "output path")->required();

  CLI::App* bench = app.add_subcommand("bench", "time W and C variants, CSV output");
  bench->add_option("--case", cfg.cases, "case file or builtin:NAME")->required();
  bench->add_option("--reps", cfg.repetitions, "repetitions")->check(CLI::NonNegativeNumber);
  bench->add_option("--out", cfg.out, "CSV path (default stdout)");
  solver_flags(bench);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.solver.feasibility_tol = cfg.solver.gap_tol = tol;
    cfg.relaxations = parse_relaxation_list(relax);
    cfg.variant = parse_variant(variant);
    cfg.format = parse_report_format(format);
    if (*solve) {
      cfg.subcommand = "solve";
      return cmd_solve(cfg, out, err);
    }
    if (*check) {
      cfg.subcommand = "check";
      return cmd_check(cfg, out);
    }
    if (*sdp) {
      cfg.subcommand = "export-sdp";
      return cmd_export_sdp(cfg, out, err);
    }
    cfg.subcommand = "bench";
    return cmd_bench(cfg, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace opfrelax
