#include "plgd/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plgd {

namespace {
constexpr const char* kTraceHeader =
    "k,f,grad_tilde_norm,L_k,Delta_k,n_backtracks,func_calls,grad_calls";
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(const std::string& path, const RunResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << kTraceHeader << '\n';
  for (const auto& r : result.trace) {
    out << r.k << ',' << format_g17(r.f_exact) << ','
        << format_g17(r.grad_tilde_norm) << ',' << format_g17(r.L_k) << ','
        << format_g17(r.Delta_k) << ',' << r.n_backtracks << ','
        << r.n_func_calls_cum << ',' << r.n_grad_calls_cum << '\n';
  }
}

std::vector<IterationRecord> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader)
    throw std::runtime_error("bad trace header in " + path);

  std::vector<IterationRecord> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    IterationRecord r;
    auto next = [&]() -> std::string {
      if (!std::getline(ss, field, ','))
        throw std::runtime_error("short trace row in " + path);
      return field;
    };
    r.k = std::stol(next());
    r.f_exact = std::stod(next());
    r.f_tilde = r.f_exact;
    r.grad_tilde_norm = std::stod(next());
    r.L_k = std::stod(next());
    r.Delta_k = std::stod(next());
    r.n_backtracks = std::stoi(next());
    r.n_func_calls_cum = std::stol(next());
    r.n_grad_calls_cum = std::stol(next());
    trace.push_back(std::move(r));
  }
  return trace;
}

}  // namespace plgd
