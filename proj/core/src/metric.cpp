#include "gaussdist/metric.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "gaussdist/errors.hpp"
#include "gaussdist/fidelity.hpp"

namespace gaussdist {

std::string_view to_string(Metric metric) {
  return metric == Metric::Trace ? "trace" : "bures";
}

Metric parse_metric(std::string_view text) {
  if (text == "trace") return Metric::Trace;
  if (text == "bures") return Metric::Bures;
  throw ValidationError(fmt::format("unknown metric '{}' (expected trace or bures)", text));
}

double metric_upper_bound(Metric metric) {
  return metric == Metric::Trace ? 1.0 : std::numbers::sqrt2;
}

double dense_distance(const dense::DenseState& rho, const dense::DenseState& sigma, Metric metric) {
  if (metric == Metric::Trace) return dense::trace_distance(rho, sigma);
  return bures_from_fidelity(dense::fidelity_dense(rho, sigma));
}

}  // namespace gaussdist
