#include "gaussdist/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "gaussdist/diagnostics.hpp"
#include "gaussdist/errors.hpp"

namespace gaussdist {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

void require_same_shape(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  if (a.ell() != b.ell()) {
    throw ValidationError(
        fmt::format("correlation matrices have different sizes ({} vs {} sites)", a.ell(), b.ell()));
  }
}

// Direct sum of gamma_j [[0,1],[-1,0]].
MatrixXd canonical_blocks(std::span<const double> values) {
  const Index n = static_cast<Index>(values.size());
  MatrixXd c = MatrixXd::Zero(2 * n, 2 * n);
  for (Index j = 0; j < n; ++j) {
    c(2 * j, 2 * j + 1) = values[j];
    c(2 * j + 1, 2 * j) = -values[j];
  }
  return c;
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() % 2 != 0 || m_.rows() == 0) {
    throw ValidationError(
        fmt::format("correlation matrix must be square with positive even size, got {}x{}",
                    m_.rows(), m_.cols()));
  }
  if (!m_.allFinite()) {
    throw ValidationError("correlation matrix has non-finite entries");
  }
  const double asym = (m_ + m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol::kAntisymmetry) {
    throw ValidationError(fmt::format("correlation matrix is not antisymmetric (|m + m^T| = {:.3g})", asym));
  }
  m_ = 0.5 * (m_ - m_.transpose()).eval();
}

CorrelationMatrix CorrelationMatrix::zero(int ell) {
  if (ell <= 0) {
    throw ValidationError("number of sites must be positive");
  }
  return CorrelationMatrix(MatrixXd::Zero(2 * ell, 2 * ell));
}

CorrelationMatrix CorrelationMatrix::from_canonical(const MatrixXd& rotation,
                                                    std::span<const double> pair_values) {
  if (rotation.rows() != rotation.cols() ||
      rotation.rows() != 2 * static_cast<Index>(pair_values.size())) {
    throw ValidationError("rotation size does not match the number of canonical values");
  }
  MatrixXd m = rotation.transpose() * canonical_blocks(pair_values) * rotation;
  m = 0.5 * (m - m.transpose()).eval();
  return CorrelationMatrix(std::move(m));
}

MatrixXcd CorrelationMatrix::gamma() const {
  return std::complex<double>(0.0, 1.0) * m_.cast<std::complex<double>>();
}

CorrelationMatrix CorrelationMatrix::leading_block(int sites) const {
  if (sites <= 0 || sites > ell()) {
    throw ValidationError(fmt::format("subsystem size {} outside [1, {}]", sites, ell()));
  }
  return CorrelationMatrix(m_.topLeftCorner(2 * sites, 2 * sites));
}

int CanonicalForm::unit_pairs(double tolerance) const {
  // pair_values are sorted descending, so unit modes form a prefix.
  int count = 0;
  for (double g : pair_values) {
    if (1.0 - g < tolerance) {
      ++count;
    } else {
      break;
    }
  }
  return count;
}

CanonicalForm canonical_form(const CorrelationMatrix& g) {
  const MatrixXd& m = g.m();
  const Index n = m.rows();
  const Index half = n / 2;

  // i m is Hermitian with spectrum +-gamma_j. For gamma > 0 and eigenvector v,
  // sqrt2 Re v and sqrt2 Im v span the j-th canonical plane; mixing v with its
  // conjugate partner leaves that plane unchanged, so near-degenerate values
  // are harmless. Real Schur is avoided: it stalls on the highly degenerate
  // spectra of pure states.
  const MatrixXcd h = std::complex<double>(0.0, 1.0) * m.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of i m did not converge");
  }
  const Eigen::VectorXd& lam = es.eigenvalues();  // ascending
  const double zero_cut = 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());

  struct Pair {
    Eigen::VectorXd a;
    Eigen::VectorXd b;
    double value;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(half));

  Index positive = 0;
  for (Index i = n - 1; i >= half && lam(i) > zero_cut; --i) {
    Eigen::VectorXcd v = es.eigenvectors().col(i);
    const double top = v.cwiseAbs().maxCoeff();
    Index lead = 0;
    while (std::abs(v(lead)) < (1.0 - 1e-9) * top) ++lead;  // first of (near-)ties
    v *= std::conj(v(lead)) / std::abs(v(lead));  // deterministic in-plane orientation
    Eigen::VectorXd a = std::numbers::sqrt2 * v.real();
    Eigen::VectorXd b = -std::numbers::sqrt2 * v.imag();  // a.m.b = +gamma
    a.normalize();
    b -= b.dot(a) * a;
    b.normalize();
    pairs.push_back({std::move(a), std::move(b), 0.0});
    ++positive;
  }

  // Remaining (numerically zero) values: any real orthonormal basis of the
  // kernel, paired in order.
  const Index kernel = n - 2 * positive;
  if (kernel > 0) {
    MatrixXd span(n, 2 * kernel);
    Index col = 0;
    for (Index i = half - kernel / 2; i < half + kernel / 2; ++i) {
      span.col(col++) = es.eigenvectors().col(i).real();
      span.col(col++) = es.eigenvectors().col(i).imag();
    }
    Eigen::JacobiSVD<MatrixXd> svd(span, Eigen::ComputeThinU);
    for (Index k = 0; k < kernel; k += 2) {
      pairs.push_back({svd.matrixU().col(k), svd.matrixU().col(k + 1), 0.0});
    }
  }

  // One Newton-Schulz step pulls the eps-level residual non-orthogonality
  // between planes onto the nearest orthogonal matrix.
  MatrixXd rows(n, n);
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    rows.row(static_cast<Index>(2 * j)) = pairs[j].a.transpose();
    rows.row(static_cast<Index>(2 * j + 1)) = pairs[j].b.transpose();
  }
  rows = 0.5 * rows * (3.0 * MatrixXd::Identity(n, n) - rows.transpose() * rows);

  for (std::size_t j = 0; j < pairs.size(); ++j) {
    Eigen::VectorXd a = rows.row(static_cast<Index>(2 * j)).transpose();
    Eigen::VectorXd b = rows.row(static_cast<Index>(2 * j + 1)).transpose();
    double value = a.dot(m * b);
    if (value < 0.0) {
      std::swap(a, b);
      value = -value;
    }
    pairs[j] = {std::move(a), std::move(b), value};
  }

  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& x, const Pair& y) { return x.value > y.value; });

  CanonicalForm out;
  out.rotation.resize(n, n);
  out.pair_values.reserve(pairs.size());
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const Index r = static_cast<Index>(2 * j);
    out.rotation.row(r) = pairs[j].a.transpose();
    out.rotation.row(r + 1) = pairs[j].b.transpose();
    double value = pairs[j].value;
    if (value > 1.0 + tol::kSpectrumOvershoot) {
      throw ValidationError(
          fmt::format("correlation matrix has canonical value {:.12g} > 1 (not a physical state)", value));
    }
    out.pair_values.push_back(std::min(value, 1.0));
  }
  return out;
}

ModePartition classify_modes(const CorrelationMatrix& g1, const CorrelationMatrix& g2,
                             double tolerance) {
  require_same_shape(g1, g2);
  return classify_modes(canonical_form(g1), g2, tolerance);
}

ModePartition classify_modes(const CanonicalForm& canon1, const CorrelationMatrix& g2,
                             double tolerance) {
  const Index n = g2.m().rows();
  if (canon1.rotation.rows() != n) {
    throw ValidationError("canonical form and correlation matrix have different sizes");
  }
  const int ell = static_cast<int>(n / 2);
  const int x = canon1.unit_pairs(tolerance);
  const int y = ell - x;

  ModePartition p;
  p.unit_pairs = x;
  p.bulk_pairs = y;

  const std::vector<double> ones(static_cast<std::size_t>(x), 1.0);
  p.r_x = canonical_blocks(ones);
  p.r_y = canonical_blocks(std::span<const double>(canon1.pair_values).subspan(static_cast<std::size_t>(x)));

  MatrixXd s = canon1.rotation * g2.m() * canon1.rotation.transpose();
  s = 0.5 * (s - s.transpose()).eval();
  p.s_x = s.topLeftCorner(2 * x, 2 * x);
  p.s_y = s.bottomRightCorner(2 * y, 2 * y);
  p.s_xy = s.topRightCorner(2 * x, 2 * y);
  p.s_yx = s.bottomLeftCorner(2 * y, 2 * x);
  return p;
}

double gaussian_product_trace(const CorrelationMatrix& g1, const CorrelationMatrix& g2) {
  require_same_shape(g1, g2);
  // 1 + Gamma_1 Gamma_2 = 1 - m_1 m_2 is real.
  const Index n = g1.m().rows();
  const MatrixXd a = 0.5 * (MatrixXd::Identity(n, n) - g1.m() * g2.m());
  const double det = a.partialPivLu().determinant();
  if (det < -1e-12) {
    throw ValidationError(fmt::format("negative determinant {:.3g} in product trace; invalid inputs", det));
  }
  return std::sqrt(std::max(det, 0.0));
}

CorrelationMatrix ComposedCorrelation::to_correlation_matrix(double max_real_part) const {
  const double re = gamma.real().cwiseAbs().maxCoeff();
  if (re > max_real_part) {
    throw NumericalError(fmt::format(
        "composed correlation matrix is not Hermitian (real part {:.3g}); product of non-commuting states",
        re));
  }
  MatrixXd m = gamma.imag();
  return CorrelationMatrix(0.5 * (m - m.transpose()));
}

MatrixXcd compose_general(const MatrixXcd& gamma1, const MatrixXcd& gamma2) {
  const Index n = gamma1.rows();
  if (gamma2.rows() != n || gamma1.cols() != n || gamma2.cols() != n) {
    throw ValidationError("compose: dimension mismatch");
  }
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  const MatrixXcd denom = id + gamma2 * gamma1;
  const Eigen::VectorXd sv = denom.jacobiSvd().singularValues();
  if (sv.minCoeff() <= 1e-12) {
    throw NumericalError("compose: 1 + Gamma_2 Gamma_1 is singular (orthogonal states)");
  }
  MatrixXcd out = id - (id - gamma1) * denom.partialPivLu().solve(id - gamma2);
  const double asym = (out + out.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    warn(fmt::format("compose: antisymmetry deviation {:.3g} before re-antisymmetrization", asym));
  }
  return 0.5 * (out - out.transpose());
}

std::complex<double> product_trace_general(const MatrixXcd& gamma1, const MatrixXcd& gamma2) {
  const Index n = gamma1.rows();
  if (gamma2.rows() != n) {
    throw ValidationError("product trace: dimension mismatch");
  }
  const MatrixXcd a = 0.5 * (MatrixXcd::Identity(n, n) + gamma1 * gamma2);
  return std::sqrt(a.partialPivLu().determinant());
}

ComposedCorrelation gaussian_compose(const CorrelationMatrix& g1, const CorrelationMatrix& g2) {
  require_same_shape(g1, g2);
  return ComposedCorrelation{compose_general(g1.gamma(), g2.gamma())};
}

MatrixXcd gibbs_kernel(const CorrelationMatrix& g) {
  const Index n = g.m().rows();
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  const MatrixXcd gam = g.gamma();
  const MatrixXcd plus = id + gam;
  if (plus.jacobiSvd().singularValues().minCoeff() <= 1e-12) {
    throw NumericalError("Gibbs kernel undefined for states with unit modes");
  }
  return (id - gam) * plus.partialPivLu().inverse();
}

}  // namespace gaussdist
