// Deterministic CSV emission.
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hmmlab/environment.hpp"
#include "hmmlab/filtering.hpp"
#include "hmmlab/model.hpp"

namespace hmmlab::csv {

/**
 * @brief Shortest decimal that round-trips to the same double.
 *
 * Locale-independent ('.' separator). Integral values keep a trailing ".0";
 * non-finite values print as "inf", "-inf" and "nan".
 */
std::string format_double(double v);

/// Columns n,x,y.
void write_simulation(std::ostream &os, const SimulatedPath &path);

/// Columns n,Pi_0..Pi_{d-1},log_Z.
void write_trajectory(std::ostream &os, const FilterTrajectory &trajectory);

/// Columns n,beta (n = 1..N).
void write_beta_curve(std::ostream &os, const BetaCurve &curve);

/// Columns n,value.
void write_series(std::ostream &os, const std::vector<double> &values, const std::string &column = "value");

/// Columns n,from,to,p for every reachable row of K_1..K_N.
void write_kernels(std::ostream &os, const EnvironmentKernelSequence &kernels);

} // namespace hmmlab::csv
