#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaussdist/metric.hpp"

namespace gaussdist {

struct SweepRow {
  int ell = 0;
  double x = 0.0;        // ell / L
  double average = 0.0;  // unscaled metric value
  std::size_t pairs = 0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  int ell_min = 0;
  int ell_max = 0;
  std::size_t points = 0;
};

/// Output of any average-distance sweep (Ising, XXZ or random ensemble).
struct SweepResult {
  std::string model;      // ising | xxz | random
  int L = 0;
  double param = 0.0;     // h, delta, or 0 for the random ensemble
  std::string sector = "full";
  std::string ordering = "all-pairs";
  Metric metric = Metric::Bures;
  std::optional<std::uint64_t> seed;
  std::vector<SweepRow> rows;
  std::optional<LinearFit> fit;
  std::vector<std::string> notes;
};

/// Fit window ceil(0.2 L) <= ell <= floor(0.4 L), in exact integer arithmetic.
std::pair<int, int> fit_window(int L);

/// Least squares of average against x = ell / L over fit_window(L). Bures
/// averages are divided by sqrt(2) first so both metrics live in [0, 1].
LinearFit linear_slope_fit(const std::vector<SweepRow>& rows, int L, Metric metric);

enum class ReferenceCurve { F, G };

/// f(x) = 2x for x < 1/2 and 1 otherwise; g(0) = 0 and g(x) = 1 for x > 0.
double reference_curve(double x, ReferenceCurve which);

/// Header: model,L,param,sector,ordering,metric,ell,x,average,pairs.
/// Floating values use 17 significant digits.
void write_sweep_csv(const SweepResult& result, std::ostream& out);

}  // namespace gaussdist
