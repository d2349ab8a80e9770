#include "gaussdist/dense.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "gaussdist/errors.hpp"

namespace gaussdist::dense {

namespace {

using Eigen::Index;
using Triplet = Eigen::Triplet<Complex>;

constexpr Complex kI{0.0, 1.0};

enum class Pauli { X, Y, Z };

// Z_0 ... Z_{site-1} P_site when `string` is set, otherwise just P_site.
SparseOperator pauli_operator(Pauli kind, int site, int sites, bool string) {
  if (site < 0 || site >= sites) {
    throw ValidationError(fmt::format("site {} outside register of {} sites", site, sites));
  }
  const Index dim = Index{1} << sites;
  const int bit = sites - 1 - site;
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(dim));
  for (Index col = 0; col < dim; ++col) {
    Complex value{1.0, 0.0};
    if (string) {
      // Sites 0..site-1 occupy bits sites-1 .. bit+1.
      const Index mask = (dim - 1) & ~((Index{2} << bit) - 1);
      if (std::popcount(static_cast<std::uint64_t>(col & mask)) % 2 != 0) {
        value = -value;
      }
    }
    const bool up = ((col >> bit) & 1) == 0;
    Index row = col;
    switch (kind) {
      case Pauli::X:
        row = col ^ (Index{1} << bit);
        break;
      case Pauli::Y:
        row = col ^ (Index{1} << bit);
        value *= up ? kI : -kI;
        break;
      case Pauli::Z:
        value *= up ? 1.0 : -1.0;
        break;
    }
    entries.emplace_back(row, col, value);
  }
  SparseOperator op(dim, dim);
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

std::shared_ptr<const MajoranaSet> build_majoranas(int ell) {
  auto set = std::make_shared<MajoranaSet>();
  set->ell = ell;
  set->ops.reserve(static_cast<std::size_t>(2 * ell));
  for (int j = 0; j < ell; ++j) {
    set->ops.push_back(pauli_operator(Pauli::X, j, ell, true));
    set->ops.push_back(pauli_operator(Pauli::Y, j, ell, true));
  }
  return set;
}

int sites_of_dim(Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) {
    throw ValidationError(fmt::format("dimension {} is not a power of two", dim));
  }
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

// tr(a * s) for dense a and sparse s.
Complex trace_product(const ComplexMatrix& a, const SparseOperator& s) {
  Complex acc{0.0, 0.0};
  for (Index k = 0; k < s.outerSize(); ++k) {
    for (SparseOperator::InnerIterator it(s, k); it; ++it) {
      acc += a(it.col(), it.row()) * it.value();
    }
  }
  return acc;
}

// Principal square root of a Hermitian PSD matrix, with eigenvalues at
// roundoff level set to exactly zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of density matrix did not converge");
  }
  const double cutoff = 16.0 * static_cast<double>(rho.rows()) * std::numeric_limits<double>::epsilon() *
                        std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd roots = es.eigenvalues();
  for (Index i = 0; i < roots.size(); ++i) {
    roots(i) = roots(i) > cutoff ? std::sqrt(roots(i)) : 0.0;
  }
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

void require_same_dim(const DenseState& a, const DenseState& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError(fmt::format("density matrices have different dimensions ({} vs {})", a.dim(), b.dim()));
  }
}

}  // namespace

void require_dense_guard(int sites, int limit) {
  if (sites > limit) {
    throw GuardError(fmt::format("{} sites exceeds the dense guard of {} sites", sites, limit));
  }
  if (sites <= 0) {
    throw ValidationError("number of sites must be positive");
  }
}

DenseState::DenseState(ComplexMatrix rho, double tolerance) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols()) {
    throw ValidationError("density matrix must be square");
  }
  sites_of_dim(rho_.rows());
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tolerance) {
    throw ValidationError(fmt::format("density matrix is not Hermitian (deviation {:.3g})", herm));
  }
  const Complex tr = rho_.trace();
  if (std::abs(tr - 1.0) > tolerance) {
    throw ValidationError(fmt::format("density matrix trace {:.12g} != 1", tr.real()));
  }
  rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tolerance) {
    throw ValidationError(fmt::format("density matrix has negative eigenvalue {:.3g}", es.eigenvalues().minCoeff()));
  }
}

DenseState DenseState::unchecked(ComplexMatrix rho) {
  DenseState s;
  s.rho_ = std::move(rho);
  return s;
}

DenseState DenseState::pure(const ComplexVector& psi) {
  return DenseState(psi * psi.adjoint());
}

int DenseState::sites() const { return sites_of_dim(rho_.rows()); }

SparseOperator pauli_x(int site, int sites) { return pauli_operator(Pauli::X, site, sites, false); }
SparseOperator pauli_y(int site, int sites) { return pauli_operator(Pauli::Y, site, sites, false); }
SparseOperator pauli_z(int site, int sites) { return pauli_operator(Pauli::Z, site, sites, false); }

SparseOperator identity(int sites) {
  const Index dim = Index{1} << sites;
  SparseOperator id(dim, dim);
  id.setIdentity();
  return id;
}

std::shared_ptr<const MajoranaSet> majorana_operators(int ell) {
  require_dense_guard(ell);
  static std::shared_mutex mutex;
  static std::map<int, std::shared_ptr<const MajoranaSet>> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(ell); it != cache.end()) {
      return it->second;
    }
  }
  auto built = build_majoranas(ell);
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(ell, std::move(built));
  return it->second;
}

DenseState density_from_gamma(const CorrelationMatrix& g) {
  const int ell = g.ell();
  require_dense_guard(ell);
  const auto majoranas = majorana_operators(ell);
  const CanonicalForm canon = canonical_form(g);
  const Index dim = Index{1} << ell;
  const Index n = 2 * ell;

  auto rotated = [&](Index a) {
    SparseOperator op(dim, dim);
    for (Index b = 0; b < n; ++b) {
      const double w = canon.rotation(a, b);
      if (w != 0.0) {
        op += Complex(w, 0.0) * majoranas->ops[static_cast<std::size_t>(b)];
      }
    }
    return op;
  };

  const SparseOperator id = identity(ell);
  ComplexMatrix rho = ComplexMatrix::Identity(dim, dim);
  for (int j = 0; j < ell; ++j) {
    const double gj = canon.pair_values[static_cast<std::size_t>(j)];
    if (gj == 0.0) {
      rho *= 0.5;
      continue;
    }
    const SparseOperator pair = rotated(2 * j) * rotated(2 * j + 1);
    const SparseOperator factor = 0.5 * (id - Complex(0.0, gj) * pair);
    rho = (rho * factor).eval();
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DenseState::unchecked(std::move(rho));
}

DenseState density_from_gamma_exponential(const CorrelationMatrix& g) {
  const int ell = g.ell();
  require_dense_guard(ell);
  const auto majoranas = majorana_operators(ell);
  const Index n = 2 * ell;
  const Index dim = Index{1} << ell;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g.gamma());
  const Eigen::VectorXd& lam = es.eigenvalues();
  if (lam.cwiseAbs().maxCoeff() >= 1.0 - 1e-12) {
    throw ValidationError("exponential form needs a strictly mixed state (|gamma| < 1)");
  }
  Eigen::VectorXd w(n);
  double log_z = 0.0;
  for (Index i = 0; i < n; ++i) {
    w(i) = 2.0 * std::atanh(lam(i));
    log_z += 0.5 * std::log(2.0 / (1.0 + lam(i)));
  }
  const ComplexMatrix wmat = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();

  SparseOperator exponent(dim, dim);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      if (a == b || std::abs(wmat(a, b)) == 0.0) continue;
      exponent += (-0.25 * wmat(a, b)) * (majoranas->ops[static_cast<std::size_t>(a)] *
                                          majoranas->ops[static_cast<std::size_t>(b)]);
    }
  }
  ComplexMatrix h = ComplexMatrix(exponent);
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> hs(h);
  const Eigen::VectorXd ev = (hs.eigenvalues().array() - log_z).exp();
  ComplexMatrix rho = hs.eigenvectors() * ev.asDiagonal() * hs.eigenvectors().adjoint();
  return DenseState::unchecked(0.5 * (rho + rho.adjoint()));
}

ComplexMatrix correlation_of_operator(const ComplexMatrix& op) {
  const int ell = sites_of_dim(op.rows());
  require_dense_guard(ell);
  const auto majoranas = majorana_operators(ell);
  const Index n = 2 * ell;
  ComplexMatrix gamma = ComplexMatrix::Zero(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      const SparseOperator prod =
          majoranas->ops[static_cast<std::size_t>(a)] * majoranas->ops[static_cast<std::size_t>(b)];
      gamma(a, b) = trace_product(op, prod);
      gamma(b, a) = -gamma(a, b);
    }
  }
  return gamma;
}

CorrelationMatrix gamma_from_density(const DenseState& rho) {
  const ComplexMatrix gamma = correlation_of_operator(rho.rho());
  const double re = gamma.real().cwiseAbs().maxCoeff();
  if (re > 1e-10) {
    throw NumericalError(fmt::format("correlation matrix of a density matrix has real part {:.3g}", re));
  }
  Eigen::MatrixXd m = gamma.imag();
  return CorrelationMatrix(0.5 * (m - m.transpose()));
}

double trace_distance(const DenseState& rho, const DenseState& sigma) {
  require_same_dim(rho, sigma);
  ComplexMatrix diff = rho.rho() - sigma.rho();
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(diff, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("trace distance eigensolver did not converge");
  }
  return std::clamp(0.5 * es.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

double fidelity_dense(const DenseState& rho, const DenseState& sigma) {
  require_same_dim(rho, sigma);
  // Same coincidence rule as the Gaussian path.
  if ((rho.rho() - sigma.rho()).cwiseAbs().maxCoeff() <= 1e-11) return 1.0;
  const ComplexMatrix product = psd_sqrt(rho.rho()) * psd_sqrt(sigma.rho());
  Eigen::JacobiSVD<ComplexMatrix> svd(product);
  return std::clamp(svd.singularValues().sum(), 0.0, 1.0);
}

double fidelity_dense_product(const DenseState& rho, const DenseState& sigma) {
  require_same_dim(rho, sigma);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(rho.rho() * sigma.rho(), false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigenvalues of rho sigma did not converge");
  }
  double f = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex lam = es.eigenvalues()(i);
    if (lam.real() < -1e-10) {
      throw NumericalError(fmt::format("rho sigma has eigenvalue with real part {:.3g}", lam.real()));
    }
    f += std::sqrt(std::max(lam.real(), 0.0));
  }
  return std::clamp(f, 0.0, 1.0);
}

DenseState partial_trace(const ComplexVector& psi, int keep) {
  const int total = sites_of_dim(psi.size());
  if (keep <= 0 || keep > total) {
    throw ValidationError(fmt::format("cannot keep {} of {} sites", keep, total));
  }
  const Index da = Index{1} << keep;
  const Index db = Index{1} << (total - keep);
  // Column-major view: column iA holds the amplitudes psi(iA * db + iB).
  const Eigen::Map<const ComplexMatrix> amps(psi.data(), db, da);
  ComplexMatrix rho = amps.transpose() * amps.conjugate();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DenseState::unchecked(std::move(rho));
}

DenseState partial_trace(const DenseState& state, int keep) {
  const int total = state.sites();
  if (keep <= 0 || keep > total) {
    throw ValidationError(fmt::format("cannot keep {} of {} sites", keep, total));
  }
  const Index da = Index{1} << keep;
  const Index db = Index{1} << (total - keep);
  ComplexMatrix rho = ComplexMatrix::Zero(da, da);
  for (Index i = 0; i < da; ++i) {
    for (Index k = 0; k < da; ++k) {
      Complex acc{0.0, 0.0};
      for (Index b = 0; b < db; ++b) {
        acc += state.rho()(i * db + b, k * db + b);
      }
      rho(i, k) = acc;
    }
  }
  return DenseState::unchecked(std::move(rho));
}

namespace {

// A with rho_A = A A^dag: row iA, column iB holds psi(iA * 2^rest + iB).
ComplexMatrix amplitude_matrix(const ComplexVector& psi, int keep) {
  const int total = sites_of_dim(psi.size());
  if (keep <= 0 || keep > total) {
    throw ValidationError(fmt::format("cannot keep {} of {} sites", keep, total));
  }
  const Index da = Index{1} << keep;
  const Index db = Index{1} << (total - keep);
  return Eigen::Map<const ComplexMatrix>(psi.data(), db, da).transpose();
}

// rho - sigma expressed in an orthonormal basis of span[A B].
ComplexMatrix marginal_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix stacked(a.rows(), a.cols() + b.cols());
  stacked << a, b;
  const Index rank = std::min(stacked.rows(), stacked.cols());
  Eigen::HouseholderQR<ComplexMatrix> qr(stacked);
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(stacked.rows(), rank);
  const ComplexMatrix qa = q.adjoint() * a;
  const ComplexMatrix qb = q.adjoint() * b;
  ComplexMatrix diff = qa * qa.adjoint() - qb * qb.adjoint();
  return 0.5 * (diff + diff.adjoint());
}

}  // namespace

double marginal_fidelity(const ComplexVector& psi, const ComplexVector& phi, int keep) {
  if (psi.size() != phi.size()) throw ValidationError("state vectors have different dimensions");
  const ComplexMatrix a = amplitude_matrix(psi, keep);
  const ComplexMatrix b = amplitude_matrix(phi, keep);
  if (marginal_difference(a, b).cwiseAbs().maxCoeff() <= 1e-11) return 1.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a.adjoint() * b);
  return std::clamp(svd.singularValues().sum(), 0.0, 1.0);
}

double marginal_trace_distance(const ComplexVector& psi, const ComplexVector& phi, int keep) {
  if (psi.size() != phi.size()) throw ValidationError("state vectors have different dimensions");
  const ComplexMatrix diff = marginal_difference(amplitude_matrix(psi, keep), amplitude_matrix(phi, keep));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(diff, Eigen::EigenvaluesOnly);
  return std::min(1.0, 0.5 * es.eigenvalues().cwiseAbs().sum());
}

}  // namespace gaussdist::dense
