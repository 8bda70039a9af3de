#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "plgd/problems.hpp"
#include "plgd/solvers.hpp"

namespace plgd {

enum class ProblemFamily { Quadratic, Logistic, Trig };

struct ProblemConfig {
  ProblemFamily family = ProblemFamily::Quadratic;
  Index n = 0;
  Index m = 0;             // logistic / trig
  double mu = 0.0;         // quadratic
  double L = 0.0;          // quadratic
  Index zero_count = 0;    // quadratic
  std::uint64_t seed = 1234;
};

/// One experiment grid: problem x methods x deltas x seeds plus solver knobs.
struct ExperimentConfig {
  ProblemConfig problem;
  std::vector<double> deltas;
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds;
  SolverConfig solver;
  // L_min defaults to mu/4 and L0 to the nominal L; for problems whose
  // constants are only known after construction the defaults resolve there.
  bool solver_L_min_resolved = false;
  bool solver_L0_resolved = false;
  std::string output_dir = "out";
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("config:" + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

/// Parses the flat key-value format (see README). Unknown or duplicate keys
/// and invariant violations are hard errors.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config_file(const std::string& path);

/// Canonical text form; parse(serialize(parse(t))) == parse(t).
std::string serialize_config(const ExperimentConfig& config);

ProblemInstance build_problem(const ProblemConfig& config);

/// Fills the L_min / L0 defaults from the constructed problem's constants and
/// validates the result.
SolverConfig resolve_solver(const ExperimentConfig& config,
                            const ProblemInstance& problem);

}  // namespace plgd
