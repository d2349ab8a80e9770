#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "gaussdist/dense.hpp"
#include "gaussdist/metric.hpp"

namespace gaussdist::xxz {

/// Largest chain handled by the momentum-basis code (full-vector
/// reconstruction needs 2^L amplitudes).
inline constexpr int kMaxSites = 20;

/// Configurations are L-bit integers, site 1 in the most significant bit,
/// bit = 1 for a down spin. T shifts every spin one site to the right
/// (site L wraps to site 1).
std::uint32_t translate(std::uint32_t config, int L);

/// Momentum K, fixed n_down block. Basis states are
/// |a(K)> = R_a^{-1/2} sum_{r < R_a} e^{-i 2 pi K r / L} T^r |a>
/// for representatives a (smallest integer in their orbit) whose period R_a
/// satisfies K R_a = 0 mod L.
struct XXZSector {
  int L = 0;
  int K = 0;
  int n_down = 0;
  std::vector<std::uint32_t> representatives;  // ascending
  std::vector<int> periods;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(representatives.size()); }
  /// Position of a representative, or -1.
  Eigen::Index find(std::uint32_t representative) const;
};

XXZSector sector_basis(int L, int K, int n_down);

/// H = -1/4 sum (X X + Y Y + delta Z Z) - (h_z / 2) sum Z restricted to the
/// sector. The field term is the constant -(h_z / 2)(L - 2 n_down).
Eigen::MatrixXcd block_hamiltonian(const XXZSector& sector, double delta, double h_z = 0.0);

/// Full-space Hamiltonian (for oracles).
dense::SparseOperator dense_hamiltonian(int L, double delta, double h_z = 0.0);

struct XXZEigensystem {
  XXZSector sector;
  double delta = 0.0;
  double h_z = 0.0;
  Eigen::VectorXd energies;       // ascending
  Eigen::MatrixXcd vectors;       // sector-basis eigenvectors (columns)
  int near_degenerate_gaps = 0;   // adjacent energy gaps below 1e-10
};

/// Diagonalizes the field-free block and adds the field as a constant shift,
/// so eigenvectors do not depend on h_z. Each eigenvector's largest
/// amplitude is made real and positive.
XXZEigensystem diagonalize(const XXZSector& sector, double delta, double h_z = 0.0);

/// 2^L amplitude vector of a sector-basis vector.
dense::ComplexVector full_vector(const XXZSector& sector, const Eigen::VectorXcd& coefficients);

/// Reduced density matrix of the leading `ell` sites of eigenstate `index`.
dense::DenseState eigen_rdm(const XXZEigensystem& system, Eigen::Index index, int ell);

struct PairwiseAverage {
  double average = 0.0;
  std::size_t pairs = 0;
};

/// Mean distance over all unordered pairs of sector eigenstates.
PairwiseAverage pairwise_average(const XXZEigensystem& system, int ell, Metric metric);

/// CSV rows "L,K,n_down,delta,index,energy" (with header).
void write_sector_csv(const XXZEigensystem& system, std::ostream& out);

}  // namespace gaussdist::xxz
