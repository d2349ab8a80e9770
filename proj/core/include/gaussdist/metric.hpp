#pragma once

#include <string>
#include <string_view>

#include "gaussdist/correlation.hpp"
#include "gaussdist/dense.hpp"

namespace gaussdist {

enum class Metric { Trace, Bures };

std::string_view to_string(Metric metric);
/// Accepts "trace" or "bures".
Metric parse_metric(std::string_view text);

/// Upper end of the metric's range: 1 for the trace distance, sqrt(2) for Bures.
double metric_upper_bound(Metric metric);

/// Distance between explicit density matrices.
double dense_distance(const dense::DenseState& rho, const dense::DenseState& sigma, Metric metric);

}  // namespace gaussdist
