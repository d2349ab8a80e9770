#include "gaussdist/sweep.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gaussdist/errors.hpp"

namespace gaussdist {

std::pair<int, int> fit_window(int L) {
  if (L < 1) throw ValidationError("chain length must be positive");
  return {(L + 4) / 5, (2 * L) / 5};
}

LinearFit linear_slope_fit(const std::vector<SweepRow>& rows, int L, Metric metric) {
  const auto [lo, hi] = fit_window(L);
  const double scale = metric == Metric::Bures ? 1.0 / std::numbers::sqrt2 : 1.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const SweepRow& r : rows) {
    if (r.ell < lo || r.ell > hi) continue;
    const double x = static_cast<double>(r.ell) / L;
    const double y = r.average * scale;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) {
    throw ValidationError(
        fmt::format("linear fit needs at least 2 rows with {} <= ell <= {} (L={}), got {}", lo, hi, L, n));
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  LinearFit fit;
  fit.slope = (dn * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / dn;
  fit.ell_min = lo;
  fit.ell_max = hi;
  fit.points = n;
  return fit;
}

double reference_curve(double x, ReferenceCurve which) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ValidationError(fmt::format("reference curve argument {} outside [0, 1]", x));
  }
  if (which == ReferenceCurve::F) return x < 0.5 ? 2.0 * x : 1.0;
  return x == 0.0 ? 0.0 : 1.0;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "model,L,param,sector,ordering,metric,ell,x,average,pairs\n";
  for (const SweepRow& r : result.rows) {
    fmt::print(out, "{},{},{:.17g},{},{},{},{},{:.17g},{:.17g},{}\n", result.model, result.L, result.param,
               result.sector, result.ordering, to_string(result.metric), r.ell, r.x, r.average, r.pairs);
  }
}

}  // namespace gaussdist
