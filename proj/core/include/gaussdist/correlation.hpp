#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace gaussdist {

/// Numerical thresholds shared by the Gaussian-state algorithms.
namespace tol {
/// Entrywise tolerance on m + m^T for a correlation matrix.
inline constexpr double kAntisymmetry = 1e-12;
/// Canonical values above 1 by at most this much are snapped to 1; beyond is invalid.
inline constexpr double kSpectrumOvershoot = 1e-9;
/// A canonical value is a "unit" mode when 1 - gamma is below this.
inline constexpr double kUnitMode = 1e-10;
}  // namespace tol

/// Majorana correlation matrix of an l-site fermionic Gaussian state.
///
/// Stores the real antisymmetric 2l x 2l matrix m; the physical correlation
/// matrix is Gamma = i m, with Gamma_ab = tr(rho d_a d_b) - delta_ab. A single
/// mode with <sigma^z> = g has m = [[0, g], [-g, 0]].
///
/// Construction checks shape and antisymmetry and stores the exact
/// antisymmetric part. The spectral bound |gamma_j| <= 1 is checked lazily by
/// canonical_form(), which every algorithm calls anyway.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  explicit CorrelationMatrix(Eigen::MatrixXd m);

  /// Maximally mixed state on `ell` sites (m = 0).
  static CorrelationMatrix zero(int ell);

  /// Builds m = O^T (+)_j gamma_j [[0,1],[-1,0]] O.
  static CorrelationMatrix from_canonical(const Eigen::MatrixXd& rotation,
                                          std::span<const double> pair_values);

  int ell() const { return static_cast<int>(m_.rows() / 2); }
  const Eigen::MatrixXd& m() const { return m_; }

  /// Gamma = i m as a complex matrix.
  Eigen::MatrixXcd gamma() const;

  /// Correlation matrix of the leading `sites` sites (top-left 2*sites block).
  CorrelationMatrix leading_block(int sites) const;

 private:
  Eigen::MatrixXd m_;
};

/// O m O^T = (+)_j gamma_j [[0,1],[-1,0]], gamma_j >= 0 sorted descending.
struct CanonicalForm {
  Eigen::MatrixXd rotation;
  std::vector<double> pair_values;

  int unit_pairs(double tolerance = tol::kUnitMode) const;
  bool is_pure(double tolerance = tol::kUnitMode) const {
    return unit_pairs(tolerance) == static_cast<int>(pair_values.size());
  }
};

/// Real canonical form of an antisymmetric matrix via real Schur decomposition.
/// Throws ValidationError if some gamma_j exceeds 1 + tol::kSpectrumOvershoot;
/// values in (1, 1 + overshoot] are snapped to 1.
CanonicalForm canonical_form(const CorrelationMatrix& g);

/// The first argument's canonical pairs split into unit modes X and bulk Y,
/// with both inputs expressed in that canonical basis.
struct ModePartition {
  int unit_pairs = 0;  // x
  int bulk_pairs = 0;  // y
  Eigen::MatrixXd r_x;   // 2x x 2x, exactly (+) [[0,1],[-1,0]]
  Eigen::MatrixXd r_y;   // 2y x 2y
  Eigen::MatrixXd s_x;   // 2x x 2x
  Eigen::MatrixXd s_y;   // 2y x 2y
  Eigen::MatrixXd s_xy;  // 2x x 2y
  Eigen::MatrixXd s_yx;  // 2y x 2x
};

ModePartition classify_modes(const CorrelationMatrix& g1, const CorrelationMatrix& g2,
                             double tolerance = tol::kUnitMode);

/// Same, reusing an already computed canonical form of g1.
ModePartition classify_modes(const CanonicalForm& canon1, const CorrelationMatrix& g2,
                             double tolerance = tol::kUnitMode);

/// tr(rho_1 rho_2) = sqrt(det((1 + Gamma_1 Gamma_2) / 2)).
double gaussian_product_trace(const CorrelationMatrix& g1, const CorrelationMatrix& g2);

/// Correlation matrix of rho_1 rho_2 / tr(rho_1 rho_2).
///
/// The normalized product of two non-commuting Gaussian states is not
/// Hermitian, so its correlation matrix is a general complex antisymmetric
/// matrix. Use to_correlation_matrix() when the product is known to be
/// Hermitian (e.g. commuting inputs).
struct ComposedCorrelation {
  Eigen::MatrixXcd gamma;

  /// Imaginary part as a CorrelationMatrix; throws NumericalError when the
  /// real part of gamma exceeds `max_real_part`.
  CorrelationMatrix to_correlation_matrix(double max_real_part = 1e-10) const;
};

/// Gamma_1 x Gamma_2 = 1 - (1 - Gamma_1)(1 + Gamma_2 Gamma_1)^{-1}(1 - Gamma_2).
/// Throws NumericalError when 1 + Gamma_2 Gamma_1 is singular (orthogonal states).
ComposedCorrelation gaussian_compose(const CorrelationMatrix& g1, const CorrelationMatrix& g2);

/// Complex-Gamma versions of the product rules, for chained products of
/// Gaussian operators. The product trace is returned with the principal
/// square-root branch, so its sign is only defined up to +/-.
Eigen::MatrixXcd compose_general(const Eigen::MatrixXcd& gamma1, const Eigen::MatrixXcd& gamma2);
std::complex<double> product_trace_general(const Eigen::MatrixXcd& gamma1,
                                           const Eigen::MatrixXcd& gamma2);

/// Hermitian "K = (1 - Gamma)(1 + Gamma)^{-1}" of a strictly mixed state.
Eigen::MatrixXcd gibbs_kernel(const CorrelationMatrix& g);

}  // namespace gaussdist
