#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "plgd/bench.hpp"
#include "plgd/config.hpp"
#include "plgd/guarantees.hpp"
#include "plgd/trace_io.hpp"

namespace {

using namespace plgd;

struct CliError : std::runtime_error {
  CliError(int code, const std::string& msg)
      : std::runtime_error(msg), exit_code(code) {}
  int exit_code;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw CliError(2, "cannot write " + path);
  out << content;
}

/// trace_<method>_<delta>_<seed>.csv
void parse_trace_name(const std::string& path, std::string* method,
                      double* delta) {
  const std::string stem = std::filesystem::path(path).stem().string();
  if (stem.rfind("trace_", 0) != 0) return;
  std::string rest = stem.substr(6);
  for (const char* name : {"adaptive_l_delta", "adaptive_l", "constant"}) {
    const std::string prefix = std::string(name) + "_";
    if (rest.rfind(prefix, 0) == 0) {
      *method = name;
      rest = rest.substr(prefix.size());
      const auto us = rest.rfind('_');
      if (us != std::string::npos) {
        try {
          *delta = std::stod(rest.substr(0, us));
        } catch (...) {
        }
      }
      return;
    }
  }
}

int cmd_run(const std::string& config_path,
            const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& output_dir,
            const std::optional<double>& stop_multiplier) {
  ExperimentConfig cfg = load_config_file(config_path);
  if (seed) cfg.seeds = {*seed};
  if (output_dir) cfg.output_dir = *output_dir;
  if (stop_multiplier) cfg.solver.stop_multiplier = *stop_multiplier;

  const std::vector<ResultRow> rows = run_grid(cfg);
  write_rows_csv(cfg.output_dir + "/rows.csv", rows);
  write_file(cfg.output_dir + "/table_itertime.md",
             emit_table(rows, TableLayout::IterTime));
  write_file(cfg.output_dir + "/table_itertime.csv",
             emit_table_csv(rows, TableLayout::IterTime));
  write_file(cfg.output_dir + "/table_distgrad.md",
             emit_table(rows, TableLayout::DistGrad));
  write_file(cfg.output_dir + "/table_distgrad.csv",
             emit_table_csv(rows, TableLayout::DistGrad));

  std::cout << emit_table(rows, TableLayout::IterTime) << '\n'
            << emit_table(rows, TableLayout::DistGrad);
  std::cout << rows.size() << " rows written to " << cfg.output_dir << '\n';
  for (const auto& r : rows)
    if (r.failed)
      std::cerr << "warning: diverged cell " << method_name(r.method) << " "
                << r.delta << " " << r.seed << '\n';
  return 0;
}

int cmd_verify(const std::string& trace_path, const std::string& config_path,
               std::string method_str, double delta_flag) {
  const ExperimentConfig cfg = load_config_file(config_path);
  const ProblemInstance problem = build_problem(cfg.problem);
  const SolverConfig solver = resolve_solver(cfg, problem);

  std::string inferred_method;
  double inferred_delta = 0.0;
  parse_trace_name(trace_path, &inferred_method, &inferred_delta);
  if (method_str.empty()) method_str = inferred_method;
  if (method_str.empty())
    throw CliError(1,
                   "cannot infer the method from the trace name; pass --method");
  double delta = delta_flag > 0.0 ? delta_flag : inferred_delta;
  if (!(delta > 0.0) && !cfg.deltas.empty()) delta = cfg.deltas.front();

  RunResult result;
  result.method = method_from_name(method_str);
  result.trace = read_trace_csv(trace_path);
  if (result.trace.empty()) throw CliError(1, "empty trace: " + trace_path);
  result.n_iterations = static_cast<long>(result.trace.size()) - 1;
  result.stop_reason = StopReason::GradientCriterion;
  if (result.method == Method::AdaptiveLDelta) {
    double dmax = 0.0;
    for (const auto& r : result.trace) dmax = std::max(dmax, r.Delta_k);
    result.delta_max_observed = dmax;
  } else {
    result.delta_max_observed = delta;
  }

  GuaranteeInputs in;
  in.L = problem.lipschitz_L;
  in.mu = problem.pl_mu_valid;
  in.f0_gap = result.trace.front().f_exact - problem.f_star;
  in.Delta = delta;
  in.Delta_min = solver.Delta_min;
  in.L_min = solver.L_min;
  in.delta_f = solver.delta_f;

  const GuaranteeReport report = verify_run(result, problem, in);
  std::cout << serialize_report(report);
  if (!report.all_pass()) {
    for (const auto& c : report.checks)
      if (!c.pass && c.name == "first_violating_row")
        std::cerr << "violation at trace row "
                  << static_cast<long>(c.observed) << '\n';
    std::cerr << "verification FAILED\n";
    return 2;
  }
  std::cout << "verification passed\n";
  return 0;
}

int cmd_tables(const std::string& config_path,
               const std::optional<std::string>& output_dir) {
  ExperimentConfig cfg = load_config_file(config_path);
  if (output_dir) cfg.output_dir = *output_dir;
  const auto rows = read_rows_csv(cfg.output_dir + "/rows.csv");
  write_file(cfg.output_dir + "/table_itertime.md",
             emit_table(rows, TableLayout::IterTime));
  write_file(cfg.output_dir + "/table_itertime.csv",
             emit_table_csv(rows, TableLayout::IterTime));
  write_file(cfg.output_dir + "/table_distgrad.md",
             emit_table(rows, TableLayout::DistGrad));
  write_file(cfg.output_dir + "/table_distgrad.csv",
             emit_table_csv(rows, TableLayout::DistGrad));
  std::cout << emit_table(rows, TableLayout::IterTime);
  return 0;
}

int cmd_problem_dump(const std::string& config_path,
                     const std::optional<std::string>& out_path) {
  const ExperimentConfig cfg = load_config_file(config_path);
  const ProblemInstance problem = build_problem(cfg.problem);
  const std::string text = serialize_problem(problem);
  if (out_path) {
    write_file(*out_path, text);
  } else {
    std::cout << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient methods under inexact gradients: benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, trace_path, method_str;
  double delta_flag = 0.0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir, dump_out;
  std::optional<double> stop_multiplier;

  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "run only this noise seed");
    cmd->add_option("--output-dir", output_dir, "override output_dir");
    cmd->add_option("--stop-multiplier", stop_multiplier,
                    "override solver.stop_multiplier");
  };

  CLI::App* run = app.add_subcommand("run", "run a grid and emit tables");
  run->add_option("config", config_path, "experiment config file")->required();
  add_overrides(run);

  CLI::App* verify =
      app.add_subcommand("verify", "audit a trace against the bounds");
  verify->add_option("trace", trace_path, "trace CSV")->required();
  verify->add_option("config", config_path, "experiment config file")
      ->required();
  verify->add_option("--method", method_str,
                     "method of the trace (inferred from the name by default)");
  verify->add_option("--delta", delta_flag, "noise level of the trace");

  CLI::App* tables =
      app.add_subcommand("tables", "rebuild tables from stored rows.csv");
  tables->add_option("config", config_path, "experiment config file")
      ->required();
  tables->add_option("--output-dir", output_dir, "override output_dir");

  CLI::App* problem = app.add_subcommand("problem", "problem utilities");
  problem->require_subcommand(1);
  CLI::App* dump =
      problem->add_subcommand("dump", "serialize the configured instance");
  dump->add_option("config", config_path, "experiment config file")
      ->required();
  dump->add_option("--out", dump_out, "write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed())
      return cmd_run(config_path, seed, output_dir, stop_multiplier);
    if (verify->parsed())
      return cmd_verify(trace_path, config_path, method_str, delta_flag);
    if (tables->parsed()) return cmd_tables(config_path, output_dir);
    if (problem->parsed() && dump->parsed())
      return cmd_problem_dump(config_path, dump_out);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const divergence_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
