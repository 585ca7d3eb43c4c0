// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

// meminv: scalar and 2x2 matrix inversion on simulated self-organizing
// logic circuits.
//
// Exit status: 0 converged and verified, 2 no verified convergence,
// 1 usage or build error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "meminv/circuit.hpp"
#include "meminv/error.hpp"
#include "meminv/experiment.hpp"
#include "meminv/linear2x2.hpp"
#include "meminv/report_io.hpp"

namespace fs = std::filesystem;
using namespace meminv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoConvergence = 2;

struct SimFlags {
  std::uint64_t seed = 0;
  double epsilon = 0.01;
  double t_max = 50000.0;
  double dt = 1.0;
  std::size_t record_every = 100;
  bool record_voltages = false;
  std::string model = "memcomputing";

  void add_to(CLI::App& app, bool with_seed = true) {
    if (with_seed) app.add_option("--seed", seed, "Random seed of the initial voltages")->capture_default_str();
    app.add_option("--epsilon", epsilon, "Convergence threshold on C")->capture_default_str();
    app.add_option("--t-max", t_max, "Simulated time limit")->capture_default_str();
    app.add_option("--dt", dt, "Initial and largest time step")->capture_default_str();
    app.add_option("--record-every", record_every, "Integrator steps between trace samples")->capture_default_str();
    app.add_flag("--record-voltages", record_voltages, "Add one v<id> column per node to the trace");
    app.add_option("--model", model, "Dynamics: memcomputing or gradient")
        ->check(CLI::IsMember({"memcomputing", "gradient"}))
        ->capture_default_str();
  }

  SimConfig config() const {
    SimConfig c;
    c.seed = seed;
    c.epsilon = epsilon;
    c.t_max = t_max;
    c.dt_initial = dt;
    c.record_every = record_every;
    c.record_voltages = record_voltages;
    c.model = model_kind_from_string(model);
    c.validate();
    return c;
  }
};

fs::path default_out_dir() {
  if (const char* env = std::getenv("MEMINV_OUT_DIR"); env && *env) return env;
  return fs::current_path();
}

fs::path resolve(const std::string& given, const fs::path& out_dir, const std::string& fallback) {
  if (given == "-") return given;
  fs::path p = given.empty() ? fs::path(fallback) : fs::path(given);
  return p.is_absolute() ? p : out_dir / p;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

void print_echo(const ConfigEcho& echo) {
  for (const auto& [k, v] : echo) std::cout << "# " << k << '=' << v << '\n';
}

std::string csv_text(const Trace& trace, const ConfigEcho& echo) {
  std::ostringstream out;
  write_trace_csv(out, trace, echo);
  return out.str();
}

std::string rational_text(const Rational& r) {
  std::ostringstream out;
  out << r;
  return out.str();
}

// ---------------------------------------------------------------------------

struct InvertFlags {
  std::string a;
  std::string c = "1";
  int n = 5;
  int n_b = -1;
  bool normalize = false;
  std::string report;
  std::string trace;
  SimFlags sim;
};

int cmd_invert(const InvertFlags& f, const fs::path& out_dir) {
  const EmbeddingLayout layout{f.n, 0, f.n_b < 0 ? f.n : f.n_b};
  layout.validate();
  ScalarRun run{parse_literal(f.a, f.n), parse_literal(f.c, f.n), layout,
                f.normalize ? EmbedMode::Strict : EmbedMode::Raw, f.sim.config()};

  ConfigEcho echo{{"command", "invert"},  {"a", f.a},
                  {"c", f.c},             {"n", std::to_string(layout.n)},
                  {"n_b", std::to_string(layout.n_b)}, {"normalize", f.normalize ? "true" : "false"}};
  const auto sim_echo = config_echo(run.config);
  echo.insert(echo.end(), sim_echo.begin(), sim_echo.end());
  print_echo(echo);

  const auto out = run_scalar(run);
  const auto& r = out.report;
  write_text(resolve(f.report, out_dir, "invert_report.json"), report_to_json(r));
  write_text(resolve(f.trace, out_dir, "invert_trace.csv"), csv_text(out.trace, echo));

  std::cout << "a_int = " << out.instance.a_int << ", c_int = " << out.instance.c_int << '\n';
  if (out.oracle_exists) {
    std::cout << "oracle = " << format_quotient(out.oracle.b_bits, out.exponent, out.sign)
              << " (b_hat=" << out.oracle.b_hat << ", c_f=" << out.oracle.c_f << ")\n";
  } else {
    std::cout << "oracle = none (no b_hat satisfies the identity with this n_b)\n";
  }
  std::cout << "steps = " << r.steps << ", final C = " << format_double(r.final_c) << '\n';
  if (!r.converged) {
    std::cout << "NonConvergence: C stayed above " << format_double(run.config.epsilon) << " up to t = "
              << format_double(run.config.t_max) << '\n';
    return kExitNoConvergence;
  }
  std::cout << "t_c = " << format_double(r.t_c) << '\n';
  const auto& d = *r.decoded;
  std::cout << "b = " << format_quotient(d.b_bits, out.exponent, out.sign) << '\n';
  std::cout << "bits = " << bits_to_string(d.b_bits) << ", exponent = " << out.exponent
            << ", sign = " << (out.sign == Sign::Minus ? '-' : '+') << ", slack c_f = " << d.c_f
            << ", b_f = " << d.b_f << '\n';
  std::cout << "identity " << (*r.identity_ok ? "holds" : "FAILS") << ", readout "
            << (r.readout_flag ? to_string(*r.readout_flag) : "unclassified") << ", oracle "
            << (out.oracle_exists && out.oracle.b_bits == d.b_bits ? "match" : "differs") << '\n';
  return *r.identity_ok ? kExitOk : kExitNoConvergence;
}

// ---------------------------------------------------------------------------

struct MatrixFlags {
  std::string a11, a12, a21, a22;
  int n = 3;
  int n_b = 0;
  bool sequential = false;
  std::string report;
  std::string trace_prefix;
  SimFlags sim;
};

int cmd_matrix(const MatrixFlags& f, const fs::path& out_dir) {
  const EmbeddingLayout layout{f.n, 0, f.n_b};
  layout.validate();
  const Matrix2 a{parse_literal(f.a11, f.n), parse_literal(f.a12, f.n), parse_literal(f.a21, f.n),
                  parse_literal(f.a22, f.n)};
  const auto config = f.sim.config();
  ConfigEcho echo{{"command", "matrix"}, {"a11", f.a11}, {"a12", f.a12}, {"a21", f.a21}, {"a22", f.a22},
                  {"n", std::to_string(f.n)}, {"n_b", std::to_string(f.n_b)}};
  const auto sim_echo = config_echo(config);
  echo.insert(echo.end(), sim_echo.begin(), sim_echo.end());
  print_echo(echo);

  const auto result = invert_matrix(a, layout, config, !f.sequential);
  write_text(resolve(f.report, out_dir, "matrix_report.json"), matrix_result_to_json(result));
  const std::string prefix = f.trace_prefix.empty() ? "matrix_trace" : f.trace_prefix;
  for (const auto& col : result.columns) {
    auto col_echo = echo;
    col_echo.emplace_back("column", std::to_string(col.column));
    col_echo.emplace_back("column_seed", std::to_string(col.seed));
    write_text(resolve(prefix + "_col" + std::to_string(col.column) + ".csv", out_dir, ""),
               csv_text(col.trace, col_echo));
  }

  bool all = true;
  for (const auto& col : result.columns) {
    std::cout << "column " << col.column << ": ";
    if (!col.converged) {
      std::cout << "NonConvergence (final C = " << format_double(col.final_c) << ")\n";
      all = false;
      continue;
    }
    const auto& d = *col.decoded;
    std::cout << "t_c = " << format_double(col.t_c) << ", x = (" << rational_text(d.x[0]) << ", "
              << rational_text(d.x[1]) << "), slack = (" << d.slack[0] << ", " << d.slack[1] << "), identity "
              << (d.identity_ok ? "holds" : "FAILS") << '\n';
    all = all && d.identity_ok;
  }
  if (!all || !result.x) return kExitNoConvergence;
  const auto& x = *result.x;
  for (int i = 0; i < 2; ++i) {
    std::cout << "X[" << i + 1 << "] = [ " << format_quotient(x.at(i, 0).mantissa, x.at(i, 0).exponent, x.at(i, 0).sign)
              << " , " << format_quotient(x.at(i, 1).mantissa, x.at(i, 1).exponent, x.at(i, 1).sign) << " ]  = [ "
              << rational_text(x.value(i, 0)) << " , " << rational_text(x.value(i, 1)) << " ]\n";
  }
  std::cout << "residual |A X - I|_inf = " << rational_text(*result.residual)
            << " (bound 2^(1-n) * kappa, kappa = " << rational_text(result.kappa_bound) << ", "
            << (result.residual_ok ? "within" : "EXCEEDED") << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SweepFlags {
  std::string a = "2";
  std::string c = "1";
  int n_min = 2;
  int n_max = 6;
  int n_b = -1;
  std::size_t seeds = 10;
  std::vector<std::uint64_t> seed_list;
  unsigned jobs = 0;
  std::string out;
  std::string trace_out;
  SimFlags sim;
};

fs::path trace_path_for(const fs::path& base, int n, bool several) {
  if (!several) return base;
  fs::path p = base;
  p.replace_filename(base.stem().string() + "_n" + std::to_string(n) + base.extension().string());
  return p;
}

int cmd_sweep(const SweepFlags& f, const fs::path& out_dir) {
  if (f.n_min < 1 || f.n_max < f.n_min) throw CLI::ValidationError("--n-min/--n-max", "empty size range");
  SweepSpec spec;
  spec.a = f.a;
  spec.c = f.c;
  spec.sizes.clear();
  for (int n = f.n_min; n <= f.n_max; ++n) spec.sizes.push_back(n);
  spec.seeds = f.seed_list;
  if (spec.seeds.empty()) {
    for (std::size_t s = 0; s < f.seeds; ++s) spec.seeds.push_back(s);
  }
  spec.n_b = f.n_b;
  spec.config = f.sim.config();
  spec.jobs = f.jobs;

  std::string seed_text;
  for (auto s : spec.seeds) seed_text += (seed_text.empty() ? "" : ";") + std::to_string(s);
  ConfigEcho echo{{"command", "sweep"}, {"a", f.a}, {"c", f.c}, {"n_min", std::to_string(f.n_min)},
                  {"n_max", std::to_string(f.n_max)}, {"n_b", f.n_b < 0 ? "n" : std::to_string(f.n_b)},
                  {"seeds", seed_text}};
  auto sim_echo = config_echo(spec.config);
  sim_echo.erase(sim_echo.begin() + 1);  // per-run seeds are listed above
  echo.insert(echo.end(), sim_echo.begin(), sim_echo.end());
  print_echo(echo);

  const auto rows = run_sweep(spec);
  std::ostringstream table;
  write_sweep_csv(table, rows, echo);
  write_text(resolve(f.out, out_dir, "sweep.csv"), table.str());

  if (!f.trace_out.empty()) {
    const fs::path base = resolve(f.trace_out, out_dir, "");
    for (const auto& row : rows) {
      auto trace_echo = echo;
      trace_echo.emplace_back("trace_n", std::to_string(row.bits));
      trace_echo.emplace_back("trace_seed", std::to_string(spec.seeds.front()));
      write_text(trace_path_for(base, row.bits, rows.size() > 1), csv_text(row.outcomes.front().trace, trace_echo));
    }
  }

  bool all = true;
  std::cout << "bits  mean_t_c      stddev_t_c    converged\n";
  for (const auto& row : rows) {
    std::cout << row.bits << "     " << format_double(row.mean_t_c) << "  " << format_double(row.stddev_t_c) << "  "
              << row.converged << "/" << row.runs << '\n';
    all = all && row.converged == row.runs;
  }
  return all ? kExitOk : kExitNoConvergence;
}

// ---------------------------------------------------------------------------

struct ExportFlags {
  int n = 2;
  int n_b = 0;
  std::string a;
  std::string c = "1";
  std::string out;
};

int cmd_export(const ExportFlags& f, const fs::path& out_dir) {
  const EmbeddingLayout layout{f.n, 0, f.n_b};
  layout.validate();
  Netlist netlist = build_inversion_circuit(layout);
  if (!f.a.empty()) {
    netlist = clamp_instance(netlist,
                             build_embedding(parse_literal(f.a, f.n), parse_literal(f.c, f.n), layout, EmbedMode::Raw));
  }
  const std::string fallback = "netlist_n" + std::to_string(f.n) + "_nb" + std::to_string(f.n_b) + ".solc";
  const auto path = resolve(f.out, out_dir, fallback);
  write_text(path, export_netlist(netlist));
  if (path != "-") {
    const auto census = count_gates(netlist);
    std::cerr << "wrote " << path.string() << " (" << netlist.node_count() << " nodes, " << census.total()
              << " gates)\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inversion of fixed-point scalars and 2x2 matrices with self-organizing logic circuits"};
  app.require_subcommand(1);
  std::string out_dir_flag;
  app.add_option("--out-dir", out_dir_flag, "Directory for outputs (default: $MEMINV_OUT_DIR or the working directory)");

  InvertFlags inv;
  auto* invert = app.add_subcommand("invert", "Compute c / a on one circuit");
  invert->add_option("--a", inv.a, "Divisor: decimal or 0b binary literal")->required();
  invert->add_option("--c", inv.c, "Dividend")->capture_default_str();
  invert->add_option("--n", inv.n, "Mantissa width")->capture_default_str();
  invert->add_option("--nb", inv.n_b, "Extra quotient bits (default: n)");
  invert->add_flag("--normalize", inv.normalize, "Normalize both operands first (strict embedding)");
  invert->add_option("--report", inv.report, "SolveReport JSON path ('-' for stdout)");
  invert->add_option("--trace-out", inv.trace, "Trace CSV path");
  inv.sim.add_to(*invert);

  MatrixFlags mat;
  auto* matrix = app.add_subcommand("matrix", "Invert a 2x2 matrix column by column");
  matrix->add_option("--a11", mat.a11)->required();
  matrix->add_option("--a12", mat.a12)->required();
  matrix->add_option("--a21", mat.a21)->required();
  matrix->add_option("--a22", mat.a22)->required();
  matrix->add_option("--n", mat.n, "Mantissa width of entries and unknowns")->capture_default_str();
  matrix->add_option("--nb", mat.n_b, "Slack bits per equation")->capture_default_str();
  matrix->add_flag("--sequential", mat.sequential, "Solve the columns one after the other");
  matrix->add_option("--report", mat.report, "Result JSON path");
  matrix->add_option("--trace-prefix", mat.trace_prefix, "Prefix of the per-column trace CSVs");
  mat.sim.add_to(*matrix);

  SweepFlags sw;
  auto* sweep = app.add_subcommand("sweep", "Convergence time against circuit size");
  sweep->add_option("--a", sw.a)->capture_default_str();
  sweep->add_option("--c", sw.c)->capture_default_str();
  sweep->add_option("--n-min", sw.n_min)->capture_default_str();
  sweep->add_option("--n-max", sw.n_max)->capture_default_str();
  sweep->add_option("--nb", sw.n_b, "Extra quotient bits (default: n)");
  sweep->add_option("--seeds", sw.seeds, "Number of seeds per size, 0..seeds-1")->capture_default_str();
  sweep->add_option("--seed-list", sw.seed_list, "Explicit seeds (overrides --seeds)")->delimiter(',');
  sweep->add_option("--jobs", sw.jobs, "Worker threads (0: all cores)")->capture_default_str();
  sweep->add_option("--out", sw.out, "Sweep CSV path");
  sweep->add_option("--trace-out", sw.trace_out, "Trace CSV of the first seed (one file per size)");
  sw.sim.add_to(*sweep, false);

  ExportFlags ex;
  auto* exp = app.add_subcommand("export", "Write the inversion netlist");
  exp->add_option("--n", ex.n)->capture_default_str();
  exp->add_option("--nb", ex.n_b)->capture_default_str();
  exp->add_option("--a", ex.a, "Clamp this divisor (optional)");
  exp->add_option("--c", ex.c, "Dividend used with --a")->capture_default_str();
  exp->add_option("--out", ex.out, "Output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const fs::path out_dir = out_dir_flag.empty() ? default_out_dir() : fs::path(out_dir_flag);
    if (*invert) return cmd_invert(inv, out_dir);
    if (*matrix) return cmd_matrix(mat, out_dir);
    if (*sweep) return cmd_sweep(sw, out_dir);
    return cmd_export(ex, out_dir);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
