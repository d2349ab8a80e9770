#include "gaussdist/random_ensemble.hpp"

#include <Eigen/QR>
#include <fmt/format.h>

#include "gaussdist/dense.hpp"
#include "gaussdist/errors.hpp"
#include "gaussdist/fidelity.hpp"
#include "gaussdist/parallel.hpp"

namespace gaussdist {

using Eigen::Index;
using Eigen::MatrixXd;

MatrixXd haar_orthogonal(int n, Rng& rng) {
  if (n < 1) throw ValidationError("orthogonal matrix size must be positive");
  std::normal_distribution<double> normal;
  MatrixXd a(n, n);
  // Column-major fill order is part of the reproducibility contract.
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) a(r, c) = normal(rng);
  }
  Eigen::HouseholderQR<MatrixXd> qr(a);
  MatrixXd q = qr.householderQ();
  const MatrixXd& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

CorrelationMatrix random_pure_gamma(int L, Rng& rng) {
  if (L < 1) throw ValidationError("number of sites must be positive");
  const MatrixXd u = haar_orthogonal(2 * L, rng);
  MatrixXd block = MatrixXd::Zero(2 * L, 2 * L);
  for (Index j = 0; j < L; ++j) {
    block(2 * j, 2 * j + 1) = -1.0;
    block(2 * j + 1, 2 * j) = 1.0;
  }
  MatrixXd m = u * block * u.transpose();
  return CorrelationMatrix(0.5 * (m - m.transpose()));
}

Rng state_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

std::vector<CorrelationMatrix> random_ensemble(const RandomEnsembleSpec& spec) {
  if (spec.L < 1) throw ValidationError("number of sites must be positive");
  if (spec.count < 2) {
    throw ValidationError(fmt::format("ensemble needs at least 2 states, got {}", spec.count));
  }
  std::vector<CorrelationMatrix> states(static_cast<std::size_t>(spec.count));
  parallel_for(states.size(), [&](std::size_t i) {
    Rng rng = state_rng(spec.seed, i);
    states[i] = random_pure_gamma(spec.L, rng);
  });
  return states;
}

EnsembleAverage all_pairs_average(const std::vector<CorrelationMatrix>& states, int ell, Metric metric) {
  if (states.size() < 2) throw ValidationError("all-pairs average needs at least 2 states");
  std::vector<CorrelationMatrix> blocks;
  blocks.reserve(states.size());
  for (const auto& s : states) blocks.push_back(s.leading_block(ell));

  std::vector<dense::DenseState> rho;
  if (metric == Metric::Trace) {
    dense::require_dense_guard(ell, dense::kSweepSites);
    rho.resize(blocks.size());
    parallel_for(blocks.size(), [&](std::size_t i) { rho[i] = dense::density_from_gamma(blocks[i]); });
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> values(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    values[p] = metric == Metric::Bures ? bures_distance(blocks[i], blocks[j])
                                        : dense::trace_distance(rho[i], rho[j]);
  });
  double sum = 0.0;
  for (double v : values) sum += v;
  return {sum / static_cast<double>(values.size()), values.size()};
}

SweepResult random_average_sweep(const RandomEnsembleSpec& spec, Metric metric, int ell_min, int ell_max) {
  if (ell_min <= 0) ell_min = 1;
  if (ell_max <= 0) ell_max = spec.L - 1;
  if (ell_min > ell_max || ell_max > spec.L) {
    throw ValidationError(fmt::format("subsystem range [{}, {}] invalid for L={}", ell_min, ell_max, spec.L));
  }
  const auto states = random_ensemble(spec);
  SweepResult result;
  result.model = "random";
  result.L = spec.L;
  result.param = 0.0;
  result.sector = "full";
  result.ordering = fmt::format("random:{}", spec.seed);
  result.metric = metric;
  result.seed = spec.seed;
  for (int ell = ell_min; ell <= ell_max; ++ell) {
    const EnsembleAverage avg = all_pairs_average(states, ell, metric);
    result.rows.push_back({ell, static_cast<double>(ell) / spec.L, avg.average, avg.pairs});
  }
  result.notes.push_back(fmt::format("count={}", spec.count));
  try {
    result.fit = linear_slope_fit(result.rows, spec.L, metric);
  } catch (const ValidationError&) {
    result.notes.push_back("fit window not covered by the requested rows");
  }
  return result;
}

}  // namespace gaussdist
