#pragma once

#include <cstdint>
#include <vector>

#include "gaussdist/dense.hpp"
#include "gaussdist/ising.hpp"

// Explicit 2^L operators for the Ising chain, used as oracles for the
// free-fermion solution. All functions enforce dense::kMaxSites.
namespace gaussdist::ising::dense_ops {

using dense::ComplexMatrix;
using dense::ComplexVector;
using dense::SparseOperator;

/// H = -1/2 sum_j (X_j X_{j+1} + h Z_j), periodic.
SparseOperator hamiltonian(int L, double h);

/// P = prod_j Z_j.
SparseOperator parity(int L);

/// Cyclic shift T |b_1 b_2 ... b_L> = |b_L b_1 ... b_{L-1}>.
SparseOperator translation(int L);

/// Q_m = Pi_NS Q_m^NS + Pi_R Q_m^R, with Q_m^s = sum_k coeff (c_k^dag c_k - 1/2)
/// and Pi = (1 +- P)/2. Charge 0 reproduces the Hamiltonian.
ComplexMatrix charge(const IsingChain& chain, int m);

/// Bogoliubov annihilator c_k of a sector as a dense operator.
SparseOperator mode_annihilator(const IsingChain& chain, Sector sector, int mode);

/// Smallest ring arc (number of consecutive sites) containing the support of
/// every Pauli string whose coefficient in `op` exceeds `tolerance`.
int pauli_support_width(const ComplexMatrix& op, int L, double tolerance = 1e-10);

/// Dense eigenvectors matched to free-fermion labels. The joint eigenbasis is
/// obtained from a generic linear combination of P and all charges; each
/// eigenvector is assigned to the label whose (P, Q_0..Q_{L-1}) is nearest.
struct MatchedEigenstates {
  std::vector<ComplexVector> vectors;  // one per label, same order
  double max_charge_residual = 0.0;     // max |<v|Q_m|v> - label.charges[m]|
};

MatchedEigenstates match_eigenstates(const IsingChain& chain, const std::vector<EigenstateLabel>& labels,
                                     std::uint64_t seed = 7);

}  // namespace gaussdist::ising::dense_ops
