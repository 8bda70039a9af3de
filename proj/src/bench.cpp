#include "plgd/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "plgd/noise_oracle.hpp"
#include "plgd/trace_io.hpp"

namespace plgd {

namespace {

constexpr const char* kRowsHeader =
    "method,delta,mu,seed,iterations,wall_time_ms,grad_ratio,distance,"
    "func_calls,grad_calls";

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

int method_order(Method m) {
  switch (m) {
    case Method::ConstantStep: return 0;
    case Method::AdaptiveL: return 1;
    case Method::AdaptiveLDelta: return 2;
  }
  return 3;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Agg {
  double med = 0.0, lo = 0.0, hi = 0.0;
  std::size_t count = 0;
};

Agg aggregate(const std::vector<double>& v) {
  Agg a;
  if (v.empty()) return a;
  a.count = v.size();
  a.med = median(v);
  a.lo = *std::min_element(v.begin(), v.end());
  a.hi = *std::max_element(v.begin(), v.end());
  return a;
}

std::string cell(const Agg& a) {
  if (a.count == 0) return "-";
  if (a.count == 1) return fmt_short(a.med);
  return fmt_short(a.med) + " (" + fmt_short(a.lo) + "-" + fmt_short(a.hi) +
         ")";
}

void check_single_family(const std::vector<ResultRow>& rows) {
  std::set<std::string> families;
  for (const auto& r : rows)
    if (!r.family.empty()) families.insert(r.family);
  if (families.size() > 1)
    throw std::invalid_argument("emit_table: rows from different problems");
}

struct GroupKey {
  double mu;
  double delta;
  bool operator<(const GroupKey& o) const {
    if (mu != o.mu) return mu < o.mu;
    return delta < o.delta;
  }
};

}  // namespace

std::vector<ResultRow> run_grid(const ExperimentConfig& config) {
  const ProblemInstance problem = build_problem(config.problem);
  SolverConfig solver = resolve_solver(config, problem);
  solver.record_iterates = false;

  std::filesystem::create_directories(config.output_dir);

  std::vector<ResultRow> rows;
  for (Method method : config.methods) {
    for (double delta : config.deltas) {
      for (std::uint64_t seed : config.seeds) {
        NoiseSpec noise;
        noise.delta = delta;
        noise.delta_f = solver.delta_f;
        noise.seed = seed;
        noise.mode = NoiseMode::SphereWorstCase;
        InexactOracle oracle(problem, noise);

        ResultRow row;
        row.method = method;
        row.delta = delta;
        row.mu = problem.pl_mu;
        row.seed = seed;
        row.family = problem.family;

        RunResult result;
        try {
          switch (method) {
            case Method::ConstantStep:
              result = run_constant_step(oracle, problem.lipschitz_L, solver);
              break;
            case Method::AdaptiveL:
              result = run_adaptive_L(oracle, delta, solver);
              break;
            case Method::AdaptiveLDelta:
              result = run_adaptive_L_delta(oracle, solver);
              break;
          }
        } catch (const divergence_error& e) {
          result = e.partial_result;
          row.failed = true;
        }

        row.iterations = result.n_iterations;
        row.wall_time_ms = result.wall_time_ms;
        if (result.x_hat.size() == problem.dim) {
          row.grad_ratio = problem.eval_grad(result.x_hat).norm() / delta;
          row.distance = (result.x_hat - problem.x0).norm();
        }
        row.func_calls = oracle.n_func_calls();
        row.grad_calls = oracle.n_grad_calls();
        rows.push_back(row);

        const std::string trace_path = config.output_dir + "/trace_" +
                                       method_name(method) + "_" +
                                       fmt_short(delta) + "_" +
                                       std::to_string(seed) + ".csv";
        write_trace_csv(trace_path, result);
        if (row.failed) {
          std::ofstream fail(config.output_dir + "/failures.txt",
                             std::ios::app);
          fail << trace_path << ": diverged\n";
        }
      }
    }
  }

  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (method_order(a.method) != method_order(b.method))
      return method_order(a.method) < method_order(b.method);
    if (a.delta != b.delta) return a.delta < b.delta;
    return a.seed < b.seed;
  });
  return rows;
}

std::string emit_table(const std::vector<ResultRow>& rows, TableLayout layout) {
  if (rows.empty()) throw std::invalid_argument("emit_table: no rows");
  check_single_family(rows);

  std::vector<Method> methods;
  for (const auto& r : rows)
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
  std::sort(methods.begin(), methods.end(), [](Method a, Method b) {
    return method_order(a) < method_order(b);
  });

  std::map<GroupKey, std::map<Method, std::vector<const ResultRow*>>> groups;
  for (const auto& r : rows)
    groups[{r.mu, r.delta}][r.method].push_back(&r);

  const char* col_a = layout == TableLayout::IterTime ? "Iters" : "dist(x0)";
  const char* col_b =
      layout == TableLayout::IterTime ? "Time, ms" : "grad_ratio";

  std::ostringstream out;
  out << "| mu | Delta |";
  for (Method m : methods)
    out << ' ' << method_name(m) << ' ' << col_a << " | " << method_name(m)
        << ' ' << col_b << " |";
  out << '\n';
  out << "|---|---|";
  for (std::size_t i = 0; i < 2 * methods.size(); ++i) out << "---|";
  out << '\n';

  double last_mu = std::nan("");
  for (const auto& [key, per_method] : groups) {
    const bool new_mu = !(key.mu == last_mu);
    last_mu = key.mu;
    out << "| " << (new_mu ? fmt_short(key.mu) : std::string()) << " | "
        << fmt_short(key.delta) << " |";
    for (Method m : methods) {
      std::vector<double> a, b;
      auto it = per_method.find(m);
      if (it != per_method.end()) {
        for (const ResultRow* r : it->second) {
          if (r->failed) continue;
          if (layout == TableLayout::IterTime) {
            a.push_back(static_cast<double>(r->iterations));
            b.push_back(r->wall_time_ms);
          } else {
            a.push_back(r->distance);
            b.push_back(r->grad_ratio);
          }
        }
      }
      out << ' ' << cell(aggregate(a)) << " | " << cell(aggregate(b)) << " |";
    }
    out << '\n';
  }
  return out.str();
}

std::string emit_table_csv(const std::vector<ResultRow>& rows,
                           TableLayout layout) {
  if (rows.empty()) throw std::invalid_argument("emit_table_csv: no rows");
  check_single_family(rows);

  std::map<GroupKey, std::map<Method, std::vector<const ResultRow*>>> groups;
  for (const auto& r : rows)
    groups[{r.mu, r.delta}][r.method].push_back(&r);

  const char* col_a = layout == TableLayout::IterTime ? "iters" : "distance";
  const char* col_b =
      layout == TableLayout::IterTime ? "time_ms" : "grad_ratio";

  std::ostringstream out;
  out << "mu,delta,method," << col_a << "_median," << col_a << "_min,"
      << col_a << "_max," << col_b << "_median," << col_b << "_min," << col_b
      << "_max\n";
  for (const auto& [key, per_method] : groups) {
    for (const auto& [m, ptrs] : per_method) {
      std::vector<double> a, b;
      for (const ResultRow* r : ptrs) {
        if (r->failed) continue;
        if (layout == TableLayout::IterTime) {
          a.push_back(static_cast<double>(r->iterations));
          b.push_back(r->wall_time_ms);
        } else {
          a.push_back(r->distance);
          b.push_back(r->grad_ratio);
        }
      }
      const Agg aa = aggregate(a), ab = aggregate(b);
      out << format_g17(key.mu) << ',' << format_g17(key.delta) << ','
          << method_name(m) << ',' << format_g17(aa.med) << ','
          << format_g17(aa.lo) << ',' << format_g17(aa.hi) << ','
          << format_g17(ab.med) << ',' << format_g17(ab.lo) << ','
          << format_g17(ab.hi) << '\n';
    }
  }
  return out.str();
}

void write_rows_csv(const std::string& path,
                    const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << kRowsHeader << '\n';
  for (const auto& r : rows) {
    out << method_name(r.method) << ',' << format_g17(r.delta) << ','
        << format_g17(r.mu) << ',' << r.seed << ',' << r.iterations << ','
        << format_g17(r.wall_time_ms) << ',' << format_g17(r.grad_ratio) << ','
        << format_g17(r.distance) << ',' << r.func_calls << ','
        << r.grad_calls << '\n';
  }
}

std::vector<ResultRow> read_rows_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kRowsHeader)
    throw std::runtime_error("bad rows header in " + path);
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    auto next = [&]() -> std::string {
      if (!std::getline(ss, field, ','))
        throw std::runtime_error("short row in " + path);
      return field;
    };
    ResultRow r;
    r.method = method_from_name(next());
    r.delta = std::stod(next());
    r.mu = std::stod(next());
    r.seed = std::stoull(next());
    r.iterations = std::stol(next());
    r.wall_time_ms = std::stod(next());
    r.grad_ratio = std::stod(next());
    r.distance = std::stod(next());
    r.func_calls = std::stol(next());
    r.grad_calls = std::stol(next());
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace plgd
