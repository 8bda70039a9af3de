#pragma once

#include <string>
#include <vector>

#include "plgd/config.hpp"
#include "plgd/solvers.hpp"

namespace plgd {

enum class TableLayout { IterTime, DistGrad };

/// One grid cell: (method, delta, seed) on a fixed problem.
struct ResultRow {
  Method method = Method::ConstantStep;
  double delta = 0.0;
  double mu = 0.0;
  std::uint64_t seed = 0;
  long iterations = 0;
  double wall_time_ms = 0.0;
  double grad_ratio = 0.0;  // ||grad f(x_N)|| / delta with the exact gradient
  double distance = 0.0;    // ||x_N - x0||
  long func_calls = 0;
  long grad_calls = 0;
  bool failed = false;        // divergence flag; in-memory only
  std::string family;         // consistency tag; in-memory only
};

/// Runs every (method, delta, seed) cell on independent oracles, writes one
/// trace CSV per cell into output_dir, and returns the sorted rows.
std::vector<ResultRow> run_grid(const ExperimentConfig& config);

/// Markdown table grouped by (mu, delta), methods as column pairs,
/// seed-aggregated as median (min-max).
std::string emit_table(const std::vector<ResultRow>& rows, TableLayout layout);

/// The same aggregation as CSV.
std::string emit_table_csv(const std::vector<ResultRow>& rows,
                           TableLayout layout);

/// Header: method,delta,mu,seed,iterations,wall_time_ms,grad_ratio,distance,
/// func_calls,grad_calls
void write_rows_csv(const std::string& path,
                    const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_rows_csv(const std::string& path);

}  // namespace plgd
