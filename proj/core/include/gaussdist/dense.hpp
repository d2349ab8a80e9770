#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gaussdist/correlation.hpp"

namespace gaussdist::dense {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using SparseOperator = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

/// Site 1 is the most significant tensor factor: basis index
/// i = sum_j b_j 2^(l - j), with b_j = 0 for sigma^z = +1.
///
/// Hard cap on the number of sites for any explicit 2^l construction.
inline constexpr int kMaxSites = 14;
/// Default cap for trace-distance sweeps (one Hermitian eigensolve per pair).
inline constexpr int kSweepSites = 12;

void require_dense_guard(int sites, int limit = kMaxSites);

/// Explicit density matrix. Hermiticity, unit trace and positivity are
/// checked on construction.
class DenseState {
 public:
  DenseState() = default;
  explicit DenseState(ComplexMatrix rho, double tolerance = 1e-10);

  /// Wraps a matrix without validation (internal fast path).
  static DenseState unchecked(ComplexMatrix rho);
  /// |psi><psi| for a normalized vector.
  static DenseState pure(const ComplexVector& psi);

  Eigen::Index dim() const { return rho_.rows(); }
  int sites() const;
  const ComplexMatrix& rho() const { return rho_; }

 private:
  ComplexMatrix rho_;
};

/// Jordan-Wigner Majorana operators d_1..d_2l on l sites (0-based storage:
/// ops[2j] = Z..Z X_j, ops[2j+1] = Z..Z Y_j).
struct MajoranaSet {
  int ell = 0;
  std::vector<SparseOperator> ops;
};

/// Memoized per l; safe for concurrent callers.
std::shared_ptr<const MajoranaSet> majorana_operators(int ell);

/// Pauli operators on site `site` (0-based) of an `sites`-site register.
SparseOperator pauli_x(int site, int sites);
SparseOperator pauli_y(int site, int sites);
SparseOperator pauli_z(int site, int sites);
SparseOperator identity(int sites);

/// rho = prod_j (1 - i gamma_j d'_{2j-1} d'_{2j}) / 2 with d' = O d, from the
/// canonical form. Exact for pure and near-pure modes.
DenseState density_from_gamma(const CorrelationMatrix& g);

/// rho = exp(-1/4 sum_{a,b} W_ab d_a d_b) / Z with W = 2 artanh(Gamma),
/// Z = sqrt(det(2/(1 + Gamma))). The 1/4 (sum over ordered pairs, d_a^2 = 1)
/// is what reproduces <d_a d_b> = Gamma_ab. Only valid for strictly mixed states.
DenseState density_from_gamma_exponential(const CorrelationMatrix& g);

/// Gamma_ab = tr(rho d_a d_b) - delta_ab, returned as m = Im(Gamma).
CorrelationMatrix gamma_from_density(const DenseState& rho);

/// tr(op d_a d_b) - delta_ab * tr(op) for an arbitrary operator, as a complex matrix.
ComplexMatrix correlation_of_operator(const ComplexMatrix& op);

/// D = 1/2 tr|rho - sigma|.
double trace_distance(const DenseState& rho, const DenseState& sigma);

/// F = tr sqrt(sqrt(rho) sigma sqrt(rho)), evaluated as the nuclear norm of
/// sqrt(rho) sqrt(sigma).
double fidelity_dense(const DenseState& rho, const DenseState& sigma);

/// F = tr sqrt(rho sigma) from the (non-Hermitian) eigenvalues of rho sigma.
/// Cross-check path; loses accuracy on rank-deficient inputs.
double fidelity_dense_product(const DenseState& rho, const DenseState& sigma);

/// Reduced state of the leading `keep` sites.
DenseState partial_trace(const DenseState& state, int keep);
DenseState partial_trace(const ComplexVector& psi, int keep);

/// Distances between the leading-`keep`-site marginals of two pure states,
/// evaluated on the amplitude matrices A (2^keep x 2^rest, rho = A A^dag):
/// F = ||A^dag B||_1 (Uhlmann) and D from rho - sigma restricted to the span
/// of [A B]. Cheap when the complement is small; never forms a 2^keep matrix
/// eigenproblem. Same coincidence rule as fidelity_dense.
double marginal_fidelity(const ComplexVector& psi, const ComplexVector& phi, int keep);
double marginal_trace_distance(const ComplexVector& psi, const ComplexVector& phi, int keep);

}  // namespace gaussdist::dense
