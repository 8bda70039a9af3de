#pragma once

#include <string>
#include <vector>

#include "plgd/solvers.hpp"

namespace plgd {

/// 17-significant-digit decimal, enough for an exact double round trip.
std::string format_g17(double v);

/// Header: k,f,grad_tilde_norm,L_k,Delta_k,n_backtracks,func_calls,grad_calls
void write_trace_csv(const std::string& path, const RunResult& result);

/// Reads a trace written by write_trace_csv. Iterate vectors are not part of
/// the format; f_tilde is set equal to f (exact-function-value traces).
std::vector<IterationRecord> read_trace_csv(const std::string& path);

}  // namespace plgd
