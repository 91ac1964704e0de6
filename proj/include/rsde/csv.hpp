#pragma once

#include <string>
#include <vector>

#include "rsde/domain.hpp"
#include "rsde/grid.hpp"
#include "rsde/study.hpp"

namespace rsde {

/// 17 significant digits: enough for exact double round-trips.
std::string format_double(double v);

/// Path CSV: header "t,v1,...,vd", one row per node, decimal notation.
void write_path_csv(const std::string& file, const SampledPath& p);
SampledPath read_path_csv(const std::string& file);

/// Skorohod output: t, x..., k..., ktv.
void write_reflected_csv(const std::string& file, const ReflectedPair& rp);

/// Coupled pair dump: t, x..., k..., xdelta..., kdelta...
void write_coupled_csv(const std::string& file, const ReflectedSolution& ito,
                       const ReflectedSolution& driven);

/// Report CSV: "delta,n_delta,p,error,stderr,n_paths".
void write_report_csv(const std::string& file, const ConvergenceReport& report);

} // namespace rsde
