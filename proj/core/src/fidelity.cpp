#include "gaussdist/fidelity.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <fmt/format.h>

#include "gaussdist/errors.hpp"
#include "gaussdist/pfaffian.hpp"

namespace gaussdist {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using cd = std::complex<double>;

constexpr double kEigenNegativity = 1e-10;

void require_same_shape(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  if (a.ell() != b.ell()) {
    throw ValidationError(
        fmt::format("correlation matrices have different sizes ({} vs {} sites)", a.ell(), b.ell()));
  }
}

// Pure state rebuilt from its canonical rotation with every value exactly 1.
MatrixXd snapped_pure(const CanonicalForm& canon) {
  const std::vector<double> ones(canon.pair_values.size(), 1.0);
  return CorrelationMatrix::from_canonical(canon.rotation, ones).m();
}

double pure_against(const CanonicalForm& pure, const MatrixXd& other) {
  const MatrixXd sum = 0.5 * (snapped_pure(pure) + other);
  const double overlap = std::abs(pfaffian(sum));  // = tr(rho_pure rho_other)
  if (overlap < kOrthogonalPrefactor) return 0.0;  // e.g. opposite parities
  return std::min(1.0, std::sqrt(overlap));
}

// sqrt(K) in the canonical basis: per pair (1 - i g J)/sqrt(1 - g^2).
MatrixXcd sqrt_kernel_canonical(const CanonicalForm& canon) {
  const Index n = static_cast<Index>(2 * canon.pair_values.size());
  MatrixXcd out = MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < canon.pair_values.size(); ++j) {
    const double g = canon.pair_values[j];
    const double s = 1.0 / std::sqrt((1.0 - g) * (1.0 + g));
    const Index r = static_cast<Index>(2 * j);
    out(r, r) = s;
    out(r + 1, r + 1) = s;
    out(r, r + 1) = cd(0.0, -g * s);
    out(r + 1, r) = cd(0.0, g * s);
  }
  return out;
}

// K in the canonical basis: per pair (1 + g^2 - 2 i g J)/(1 - g^2).
MatrixXcd kernel_canonical(const CanonicalForm& canon) {
  const Index n = static_cast<Index>(2 * canon.pair_values.size());
  MatrixXcd out = MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < canon.pair_values.size(); ++j) {
    const double g = canon.pair_values[j];
    const double d = (1.0 - g) * (1.0 + g);
    const Index r = static_cast<Index>(2 * j);
    out(r, r) = (1.0 + g * g) / d;
    out(r + 1, r + 1) = (1.0 + g * g) / d;
    out(r, r + 1) = cd(0.0, -2.0 * g / d);
    out(r + 1, r) = cd(0.0, 2.0 * g / d);
  }
  return out;
}

double regular_from_canonical(const CanonicalForm& c1, const CanonicalForm& c2) {
  const Index n = c1.rotation.rows();
  const Index ell = n / 2;

  // log of det((1+G1)/2)^{1/4} det((1+G2)/2)^{1/4}; det((1+G)/2) = prod (1-g^2)/4.
  double log_f = 0.0;
  for (double g : c1.pair_values) log_f += 0.25 * std::log((1.0 - g) * (1.0 + g) / 4.0);
  for (double g : c2.pair_values) log_f += 0.25 * std::log((1.0 - g) * (1.0 + g) / 4.0);

  // Eigenvalues of K1 K2 via the Hermitian similar matrix sqrt(K1) K2 sqrt(K1),
  // everything expressed in the canonical basis of the first state.
  const MatrixXd rel = c1.rotation * c2.rotation.transpose();
  const MatrixXcd k2 = rel.cast<cd>() * kernel_canonical(c2) * rel.transpose().cast<cd>();
  const MatrixXcd sk1 = sqrt_kernel_canonical(c1);
  MatrixXcd herm = sk1 * k2 * sk1;
  herm = 0.5 * (herm + herm.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigenvalues of K1 K2 did not converge");
  }
  const Eigen::VectorXd& mu = es.eigenvalues();  // ascending
  const double scale = std::max(1.0, mu(n - 1));
  if (mu(0) < -kEigenNegativity * scale) {
    throw NumericalError(fmt::format(
        "K1 K2 has eigenvalue {:.3g}; input carries unit-mode contamination and must be reduced first",
        mu(0)));
  }
  // Spectrum of K1 K2 is closed under mu -> 1/mu (K^T = K^{-1}), so
  // det(1 + sqrt(K1 K2)) = prod over the upper half of (mu^{1/4} + mu^{-1/4})^2.
  // Only the well-conditioned large eigenvalues enter.
  for (Index i = ell; i < n; ++i) {
    const double t = std::pow(std::max(mu(i), 1.0), 0.25);
    log_f += std::log(t + 1.0 / t);
  }
  return std::clamp(std::exp(log_f), 0.0, 1.0);
}

void check_single_mode_value(double g) {
  if (!(std::abs(g) <= 1.0 + tol::kSpectrumOvershoot)) {
    throw ValidationError(fmt::format("single-mode correlation {:.12g} outside [-1, 1]", g));
  }
}

double dispatch(const CorrelationMatrix& g1, const CorrelationMatrix& g2, FidelityReport& report) {
  const int ell = g1.ell();
  if (ell == 1) {
    report.branches.push_back(FidelityBranch::SingleMode);
    return fidelity_single_mode(g1.m()(0, 1), g2.m()(0, 1));
  }

  CanonicalForm c1 = canonical_form(g1);
  CanonicalForm c2 = canonical_form(g2);
  const int x1 = c1.unit_pairs();
  const int x2 = c2.unit_pairs();

  if (x1 == 0 && x2 == 0) {
    report.branches.push_back(FidelityBranch::Regular);
    return regular_from_canonical(c1, c2);
  }
  if (x1 == ell) {
    report.branches.push_back(FidelityBranch::Pure);
    return pure_against(c1, g2.m());
  }
  if (x2 == ell) {
    report.branches.push_back(FidelityBranch::Pure);
    return pure_against(c2, g1.m());
  }

  // Reduce on the state with more unit pairs; ties go to the first argument.
  const bool swap = x2 > x1;
  const CanonicalForm& reduce_canon = swap ? c2 : c1;
  const CorrelationMatrix& other = swap ? g1 : g2;

  const UnitReduction red = reduce_unit_modes(classify_modes(reduce_canon, other));
  ++report.reductions;
  if (red.orthogonal) {
    report.branches.push_back(FidelityBranch::Orthogonal);
    return 0.0;
  }
  report.branches.push_back(FidelityBranch::PartialUnit);
  return red.prefactor * dispatch(red.r_y, red.s_y, report);
}

}  // namespace

std::string_view to_string(FidelityBranch branch) {
  switch (branch) {
    case FidelityBranch::SingleMode: return "single-mode";
    case FidelityBranch::Regular: return "regular";
    case FidelityBranch::Pure: return "pure";
    case FidelityBranch::PartialUnit: return "partial-unit";
    case FidelityBranch::Orthogonal: return "orthogonal";
    case FidelityBranch::Coincident: return "coincident";
  }
  return "unknown";
}

double fidelity_single_mode(double gamma1, double gamma2) {
  check_single_mode_value(gamma1);
  check_single_mode_value(gamma2);
  // Unit values are snapped exactly, as in the multi-mode canonical form;
  // otherwise a 1e-16 residue would leak in as a 1e-8 square root.
  auto snap = [](double g) {
    g = std::clamp(g, -1.0, 1.0);
    return 1.0 - std::abs(g) < tol::kUnitMode ? std::copysign(1.0, g) : g;
  };
  const double a = snap(gamma1);
  const double b = snap(gamma2);
  const double f = 0.5 * (std::sqrt((1.0 + a) * (1.0 + b)) + std::sqrt((1.0 - a) * (1.0 - b)));
  return std::clamp(f, 0.0, 1.0);
}

double fidelity_pure(const CorrelationMatrix& g1, const CorrelationMatrix& g2) {
  require_same_shape(g1, g2);
  const CanonicalForm c1 = canonical_form(g1);
  if (c1.is_pure()) {
    return pure_against(c1, g2.m());
  }
  const CanonicalForm c2 = canonical_form(g2);
  if (c2.is_pure()) {
    return pure_against(c2, g1.m());
  }
  throw ValidationError("fidelity_pure: neither state is pure");
}

double fidelity_regular(const CorrelationMatrix& g1, const CorrelationMatrix& g2) {
  require_same_shape(g1, g2);
  const CanonicalForm c1 = canonical_form(g1);
  const CanonicalForm c2 = canonical_form(g2);
  if (c1.unit_pairs() > 0 || c2.unit_pairs() > 0) {
    throw ValidationError("fidelity_regular: input has unit modes; reduce first");
  }
  return regular_from_canonical(c1, c2);
}

UnitReduction reduce_unit_modes(const ModePartition& p) {
  const int x = p.unit_pairs;
  const int y = p.bulk_pairs;
  if (x <= 0 || y <= 0) {
    throw ValidationError(fmt::format("reduce_unit_modes needs a proper partition, got x={}, y={}", x, y));
  }

  const double det_rx = p.r_x.partialPivLu().determinant();
  if (std::abs(det_rx - 1.0) > 1e-9) {
    throw NumericalError(fmt::format("unit block has det {:.12g}, expected 1", det_rx));
  }

  UnitReduction out;
  // det((1 + R_X S_X)/2) = det((1 - r_x s_x)/2) = Pf((r_x + s_x)/2)^2 for pure r_x.
  const double overlap = std::abs(pfaffian(0.5 * (p.r_x + p.s_x)));
  if (overlap < kOrthogonalPrefactor) {
    out.orthogonal = true;
    return out;
  }
  out.prefactor = std::min(1.0, std::sqrt(overlap));

  // S~_Y = S_Y - S_YX R_X (1 + S_X R_X)^{-1} S_XY, in m-language
  // s~ = s_y + s_yx r_x (1 - s_x r_x)^{-1} s_xy.
  const Index nx = 2 * x;
  const MatrixXd denom = MatrixXd::Identity(nx, nx) - p.s_x * p.r_x;
  MatrixXd s_tilde = p.s_y + p.s_yx * p.r_x * denom.partialPivLu().solve(p.s_xy);
  s_tilde = 0.5 * (s_tilde - s_tilde.transpose()).eval();

  out.r_y = CorrelationMatrix(p.r_y);
  out.s_y = CorrelationMatrix(std::move(s_tilde));
  return out;
}

FidelityReport fidelity_report(const CorrelationMatrix& g1, const CorrelationMatrix& g2) {
  require_same_shape(g1, g2);
  FidelityReport report;
  if ((g1.m() - g2.m()).cwiseAbs().maxCoeff() <= kCoincidentStates) {
    canonical_form(g1);  // still validate the input
    report.branches.push_back(FidelityBranch::Coincident);
    report.value = 1.0;
    return report;
  }
  report.value = std::clamp(dispatch(g1, g2, report), 0.0, 1.0);
  return report;
}

double fidelity(const CorrelationMatrix& g1, const CorrelationMatrix& g2) {
  return fidelity_report(g1, g2).value;
}

double bures_from_fidelity(double f) {
  return std::sqrt(2.0 * std::max(0.0, 1.0 - f));
}

double bures_distance(const CorrelationMatrix& g1, const CorrelationMatrix& g2) {
  return bures_from_fidelity(fidelity(g1, g2));
}

}  // namespace gaussdist
