#include "plgd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "plgd/trace_io.hpp"

namespace plgd {

namespace {

struct KeyValue {
  std::string value;
  int line;
  int col;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) items.push_back(cur);
  }
  return items;
}

const std::vector<std::string> kKnownKeys = {
    "problem.family", "problem.n", "problem.m", "problem.mu", "problem.L",
    "problem.zero_count", "problem.seed", "deltas", "methods", "seeds",
    "output_dir", "solver.L_min", "solver.L0", "solver.Delta_min",
    "solver.Delta0", "solver.delta_f", "solver.stop_multiplier",
    "solver.stop_threshold_floor", "solver.max_iterations",
    "solver.max_inner_backtracks"};

class Fields {
 public:
  void insert(const std::string& key, KeyValue kv) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) ==
        kKnownKeys.end())
      throw ParseError(kv.line, kv.col, "unknown key '" + key + "'");
    if (map_.count(key))
      throw ParseError(kv.line, kv.col, "duplicate key '" + key + "'");
    map_.emplace(key, std::move(kv));
  }

  bool has(const std::string& key) const { return map_.count(key) != 0; }

  const KeyValue& at(const std::string& key) const {
    auto it = map_.find(key);
    if (it == map_.end())
      throw ParseError(0, 0, "missing required key '" + key + "'");
    return it->second;
  }

  double number(const std::string& key) const {
    const KeyValue& kv = at(key);
    try {
      std::size_t pos = 0;
      const double v = std::stod(kv.value, &pos);
      if (pos != kv.value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ParseError(kv.line, kv.col, "key '" + key + "': not a number");
    }
  }

  long integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v))
      throw ParseError(at(key).line, at(key).col,
                       "key '" + key + "': not an integer");
    return static_cast<long>(v);
  }

  std::uint64_t unsigned64(const std::string& key) const {
    const KeyValue& kv = at(key);
    try {
      std::size_t pos = 0;
      const std::uint64_t v = std::stoull(kv.value, &pos);
      if (pos != kv.value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ParseError(kv.line, kv.col,
                       "key '" + key + "': not an unsigned integer");
    }
  }

 private:
  std::map<std::string, KeyValue> map_;
};

[[noreturn]] void invariant_error(const Fields& f, const std::string& key,
                                  const std::string& msg) {
  const KeyValue& kv = f.at(key);
  throw ParseError(kv.line, kv.col, msg);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Fields fields;
  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(line_no, static_cast<int>(line.size()) + 1,
                       "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const int col = static_cast<int>(line.find_first_not_of(" \t")) + 1;
    if (key.empty()) throw ParseError(line_no, col, "empty key");
    if (value.empty())
      throw ParseError(line_no, static_cast<int>(eq) + 2, "empty value");
    fields.insert(key, {value, line_no, col});
  }

  ExperimentConfig cfg;

  const std::string family = fields.at("problem.family").value;
  if (family == "quadratic") {
    cfg.problem.family = ProblemFamily::Quadratic;
  } else if (family == "logistic") {
    cfg.problem.family = ProblemFamily::Logistic;
  } else if (family == "trig") {
    cfg.problem.family = ProblemFamily::Trig;
  } else {
    invariant_error(fields, "problem.family",
                    "problem.family must be quadratic, logistic or trig");
  }
  const bool quadratic = cfg.problem.family == ProblemFamily::Quadratic;

  cfg.problem.n = fields.integer("problem.n");
  if (cfg.problem.n < 1)
    invariant_error(fields, "problem.n", "problem.n must be >= 1");

  for (const char* key : {"problem.mu", "problem.L", "problem.zero_count"}) {
    if (!quadratic && fields.has(key))
      invariant_error(fields, key,
                      std::string(key) + " is only valid for the quadratic family");
  }
  if (quadratic && fields.has("problem.m"))
    invariant_error(fields, "problem.m",
                    "problem.m is only valid for logistic/trig families");

  if (quadratic) {
    cfg.problem.mu = fields.number("problem.mu");
    cfg.problem.L = fields.number("problem.L");
    if (!(cfg.problem.mu > 0.0))
      invariant_error(fields, "problem.mu", "problem.mu must be > 0");
    if (cfg.problem.mu > cfg.problem.L)
      invariant_error(fields, "problem.mu", "problem.mu must be <= problem.L");
    cfg.problem.zero_count =
        fields.has("problem.zero_count") ? fields.integer("problem.zero_count") : 0;
    if (cfg.problem.zero_count < 0 || cfg.problem.zero_count >= cfg.problem.n)
      invariant_error(fields, "problem.zero_count",
                      "problem.zero_count must be in [0, n)");
  } else {
    cfg.problem.m = fields.integer("problem.m");
    if (cfg.problem.m < 1)
      invariant_error(fields, "problem.m", "problem.m must be >= 1");
    if (cfg.problem.family == ProblemFamily::Trig &&
        2 * cfg.problem.m > cfg.problem.n)
      invariant_error(fields, "problem.m", "trig family needs 2m <= n");
  }
  if (fields.has("problem.seed"))
    cfg.problem.seed = fields.unsigned64("problem.seed");

  for (const std::string& item : split_list(fields.at("deltas").value)) {
    double d = 0.0;
    try {
      std::size_t pos = 0;
      d = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument("");
    } catch (...) {
      invariant_error(fields, "deltas", "deltas: '" + item + "' is not a number");
    }
    if (!(d > 0.0))
      invariant_error(fields, "deltas", "deltas must all be > 0");
    cfg.deltas.push_back(d);
  }
  if (cfg.deltas.empty())
    invariant_error(fields, "deltas", "deltas must be nonempty");

  for (const std::string& item : split_list(fields.at("methods").value)) {
    try {
      cfg.methods.push_back(method_from_name(item));
    } catch (const std::invalid_argument&) {
      invariant_error(fields, "methods",
                      "unknown method '" + item +
                          "' (constant | adaptive_l | adaptive_l_delta)");
    }
  }
  if (cfg.methods.empty())
    invariant_error(fields, "methods", "methods must be nonempty");

  for (const std::string& item : split_list(fields.at("seeds").value)) {
    try {
      std::size_t pos = 0;
      cfg.seeds.push_back(std::stoull(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("");
    } catch (...) {
      invariant_error(fields, "seeds",
                      "seeds: '" + item + "' is not an unsigned integer");
    }
  }
  if (cfg.seeds.empty())
    invariant_error(fields, "seeds", "seeds must be nonempty");

  if (fields.has("output_dir")) cfg.output_dir = fields.at("output_dir").value;

  SolverConfig& s = cfg.solver;
  if (fields.has("solver.Delta_min")) s.Delta_min = fields.number("solver.Delta_min");
  s.Delta0 = fields.has("solver.Delta0") ? fields.number("solver.Delta0")
                                         : s.Delta_min;
  if (fields.has("solver.delta_f")) s.delta_f = fields.number("solver.delta_f");
  if (fields.has("solver.stop_multiplier"))
    s.stop_multiplier = fields.number("solver.stop_multiplier");
  if (fields.has("solver.stop_threshold_floor"))
    s.stop_threshold_floor = fields.number("solver.stop_threshold_floor");
  if (fields.has("solver.max_iterations"))
    s.max_iterations = fields.integer("solver.max_iterations");
  if (fields.has("solver.max_inner_backtracks"))
    s.max_inner_backtracks =
        static_cast<int>(fields.integer("solver.max_inner_backtracks"));

  if (fields.has("solver.L_min")) {
    s.L_min = fields.number("solver.L_min");
    cfg.solver_L_min_resolved = true;
  } else if (quadratic) {
    s.L_min = cfg.problem.mu / 4.0;
    cfg.solver_L_min_resolved = true;
  }
  if (fields.has("solver.L0")) {
    s.L0 = fields.number("solver.L0");
    cfg.solver_L0_resolved = true;
  } else if (quadratic) {
    s.L0 = std::max(cfg.problem.L, s.L_min);
    cfg.solver_L0_resolved = true;
  }

  if (cfg.solver_L_min_resolved && cfg.solver_L0_resolved) {
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw ParseError(0, 0, e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  const char* family = cfg.problem.family == ProblemFamily::Quadratic
                           ? "quadratic"
                           : cfg.problem.family == ProblemFamily::Logistic
                                 ? "logistic"
                                 : "trig";
  out << "problem.family = " << family << '\n';
  out << "problem.n = " << cfg.problem.n << '\n';
  if (cfg.problem.family == ProblemFamily::Quadratic) {
    out << "problem.mu = " << format_g17(cfg.problem.mu) << '\n';
    out << "problem.L = " << format_g17(cfg.problem.L) << '\n';
    out << "problem.zero_count = " << cfg.problem.zero_count << '\n';
  } else {
    out << "problem.m = " << cfg.problem.m << '\n';
  }
  out << "problem.seed = " << cfg.problem.seed << '\n';

  out << "deltas = ";
  for (std::size_t i = 0; i < cfg.deltas.size(); ++i)
    out << (i ? ", " : "") << format_g17(cfg.deltas[i]);
  out << '\n';

  out << "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i)
    out << (i ? ", " : "") << method_name(cfg.methods[i]);
  out << '\n';

  out << "seeds = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
    out << (i ? ", " : "") << cfg.seeds[i];
  out << '\n';

  out << "output_dir = " << cfg.output_dir << '\n';
  if (cfg.solver_L_min_resolved)
    out << "solver.L_min = " << format_g17(cfg.solver.L_min) << '\n';
  if (cfg.solver_L0_resolved)
    out << "solver.L0 = " << format_g17(cfg.solver.L0) << '\n';
  out << "solver.Delta_min = " << format_g17(cfg.solver.Delta_min) << '\n';
  out << "solver.Delta0 = " << format_g17(cfg.solver.Delta0) << '\n';
  out << "solver.delta_f = " << format_g17(cfg.solver.delta_f) << '\n';
  out << "solver.stop_multiplier = " << format_g17(cfg.solver.stop_multiplier)
      << '\n';
  out << "solver.stop_threshold_floor = "
      << format_g17(cfg.solver.stop_threshold_floor) << '\n';
  out << "solver.max_iterations = " << cfg.solver.max_iterations << '\n';
  out << "solver.max_inner_backtracks = " << cfg.solver.max_inner_backtracks
      << '\n';
  return out.str();
}

ProblemInstance build_problem(const ProblemConfig& pc) {
  switch (pc.family) {
    case ProblemFamily::Quadratic:
      return make_quadratic(pc.n, pc.mu, pc.L, pc.zero_count, pc.seed);
    case ProblemFamily::Logistic:
      return make_logistic(pc.n, pc.m, pc.seed);
    case ProblemFamily::Trig:
      return make_trig_system(pc.n, pc.m, pc.seed);
  }
  throw std::logic_error("build_problem: bad family");
}

SolverConfig resolve_solver(const ExperimentConfig& cfg,
                            const ProblemInstance& problem) {
  SolverConfig s = cfg.solver;
  if (!cfg.solver_L_min_resolved) s.L_min = problem.pl_mu / 4.0;
  if (!(s.L_min > 0.0)) s.L_min = 1e-12;
  if (!cfg.solver_L0_resolved) s.L0 = std::max(problem.lipschitz_L, s.L_min);
  s.validate();
  return s;
}

}  // namespace plgd
