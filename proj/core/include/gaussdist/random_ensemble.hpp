#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "gaussdist/correlation.hpp"
#include "gaussdist/sweep.hpp"

namespace gaussdist {

using Rng = std::mt19937_64;

/// Haar-distributed n x n orthogonal matrix: QR of a standard Gaussian
/// matrix with R's diagonal made positive.
Eigen::MatrixXd haar_orthogonal(int n, Rng& rng);

/// m = U ((+)_j [[0, -1], [1, 0]]) U^T for a Haar U of size 2L: a random pure
/// Gaussian state on L sites.
CorrelationMatrix random_pure_gamma(int L, Rng& rng);

struct RandomEnsembleSpec {
  int L = 0;
  int count = 32;
  std::uint64_t seed = 0;
};

/// Generator for state `index`, seeded from (seed, index) so that states are
/// independent of evaluation order and thread count.
Rng state_rng(std::uint64_t seed, std::size_t index);

std::vector<CorrelationMatrix> random_ensemble(const RandomEnsembleSpec& spec);

struct EnsembleAverage {
  double average = 0.0;
  std::size_t pairs = 0;
};

/// All-pairs average of the subsystem distance on the leading `ell` sites.
/// Bures uses the Gaussian fidelity; trace builds dense states (ell within
/// the dense sweep guard).
EnsembleAverage all_pairs_average(const std::vector<CorrelationMatrix>& states, int ell, Metric metric);

/// Rows for ell_min..ell_max (defaults 1..L-1) with the fit attached.
SweepResult random_average_sweep(const RandomEnsembleSpec& spec, Metric metric, int ell_min = 0,
                                 int ell_max = 0);

}  // namespace gaussdist
