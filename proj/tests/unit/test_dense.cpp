#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "gaussdist/dense.hpp"
#include "gaussdist/errors.hpp"
#include "test_support.hpp"

namespace gd = gaussdist;
namespace dn = gaussdist::dense;
using dn::Complex;
using dn::ComplexMatrix;
using dn::ComplexVector;

namespace {

ComplexMatrix to_dense(const dn::SparseOperator& op) { return ComplexMatrix(op); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix pauli(char which) {
  ComplexMatrix p(2, 2);
  const Complex i(0, 1);
  switch (which) {
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, -i, i, 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: p = ComplexMatrix::Identity(2, 2);
  }
  return p;
}

dn::DenseState diag_state(double g) {
  ComplexMatrix r = ComplexMatrix::Zero(2, 2);
  r(0, 0) = (1 + g) / 2;
  r(1, 1) = (1 - g) / 2;
  return dn::DenseState(r);
}

}  // namespace

TEST(Majorana, SmallExamples) {
  const auto one = dn::majorana_operators(1);
  EXPECT_TRUE(to_dense(one->ops[0]).isApprox(pauli('X')));
  EXPECT_TRUE(to_dense(one->ops[1]).isApprox(pauli('Y')));
  const auto two = dn::majorana_operators(2);
  EXPECT_TRUE(to_dense(two->ops[2]).isApprox(kron(pauli('Z'), pauli('X'))));
  EXPECT_TRUE(to_dense(two->ops[3]).isApprox(kron(pauli('Z'), pauli('Y'))));
}

TEST(Majorana, AnticommutationExhaustive) {
  for (int ell = 1; ell <= 4; ++ell) {
    const auto set = dn::majorana_operators(ell);
    const Eigen::Index dim = Eigen::Index{1} << ell;
    for (int a = 0; a < 2 * ell; ++a) {
      const ComplexMatrix da = to_dense(set->ops[a]);
      EXPECT_TRUE(da.isApprox(da.adjoint()));
      for (int b = 0; b < 2 * ell; ++b) {
        const ComplexMatrix db = to_dense(set->ops[b]);
        const ComplexMatrix anti = da * db + db * da;
        const ComplexMatrix expected = (a == b ? 2.0 : 0.0) * ComplexMatrix::Identity(dim, dim);
        EXPECT_LT((anti - expected).cwiseAbs().maxCoeff(), 1e-14) << ell << " " << a << " " << b;
      }
    }
  }
}

TEST(Majorana, GuardAndSharedCache) {
  EXPECT_THROW(dn::majorana_operators(dn::kMaxSites + 1), gd::GuardError);
  EXPECT_EQ(dn::majorana_operators(3).get(), dn::majorana_operators(3).get());
}

TEST(DensityFromGamma, PureAndMixedExamples) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, -1, 0;
  const auto pure = dn::density_from_gamma(gd::CorrelationMatrix(m));
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 1;
  EXPECT_LT((pure.rho() - expected).cwiseAbs().maxCoeff(), 1e-15);

  const auto mixed = dn::density_from_gamma(gd::CorrelationMatrix::zero(3));
  EXPECT_LT((mixed.rho() - ComplexMatrix::Identity(8, 8) / 8.0).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DensityFromGamma, RoundTrip) {
  gd::Rng rng(21);
  for (int ell = 1; ell <= 5; ++ell) {
    for (int units : {0, 1, ell}) {
      if (units > ell) continue;
      const auto g = gd::testing::random_state(ell, units, rng);
      const auto back = dn::gamma_from_density(dn::density_from_gamma(g));
      EXPECT_LT((back.m() - g.m()).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(DensityFromGamma, ExponentialFormAgreesForMixedStates) {
  gd::Rng rng(22);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = gd::testing::random_state(3, 0, rng);
    const auto a = dn::density_from_gamma(g);
    const auto b = dn::density_from_gamma_exponential(g);
    EXPECT_LT((a.rho() - b.rho()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(GammaFromDensity, Examples) {
  EXPECT_LT(dn::gamma_from_density(dn::DenseState(ComplexMatrix::Identity(4, 4) / 4.0)).m().cwiseAbs().maxCoeff(),
            1e-15);
  ComplexMatrix up = ComplexMatrix::Zero(8, 8);
  up(0, 0) = 1;
  const auto g = dn::gamma_from_density(dn::DenseState(up));
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(g.m()(2 * j, 2 * j + 1), 1.0, 1e-15);
    EXPECT_NEAR(g.gamma()(2 * j, 2 * j + 1).imag(), 1.0, 1e-15);
  }
}

TEST(DenseState, Validation) {
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  EXPECT_THROW(dn::DenseState{bad}, gd::ValidationError);  // trace 2
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(dn::DenseState{neg}, gd::ValidationError);
  ComplexMatrix nonherm = ComplexMatrix::Identity(2, 2) / 2.0;
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(dn::DenseState{nonherm}, gd::ValidationError);
}

TEST(TraceDistance, Examples) {
  const auto a = diag_state(0.5);
  EXPECT_NEAR(dn::trace_distance(a, a), 0.0, 1e-15);
  EXPECT_NEAR(dn::trace_distance(diag_state(1), diag_state(-1)), 1.0, 1e-15);
  EXPECT_NEAR(dn::trace_distance(diag_state(0.5), diag_state(0)), 0.25, 1e-15);
  EXPECT_THROW(dn::trace_distance(a, dn::DenseState(ComplexMatrix::Identity(4, 4) / 4.0)), gd::ValidationError);
}

TEST(TraceDistance, TriangleInequality) {
  gd::Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = dn::density_from_gamma(gd::testing::random_state(3, 0, rng));
    const auto b = dn::density_from_gamma(gd::testing::random_state(3, 1, rng));
    const auto c = dn::density_from_gamma(gd::testing::random_state(3, 0, rng));
    EXPECT_LE(dn::trace_distance(a, c), dn::trace_distance(a, b) + dn::trace_distance(b, c) + 1e-10);
  }
}

TEST(FidelityDense, Examples) {
  const auto a = diag_state(0.3);
  EXPECT_NEAR(dn::fidelity_dense(a, a), 1.0, 1e-12);
  EXPECT_NEAR(dn::fidelity_dense(diag_state(1), diag_state(-1)), 0.0, 1e-12);
  EXPECT_NEAR(dn::fidelity_dense(diag_state(1), diag_state(0)), 1 / std::numbers::sqrt2, 1e-12);
}

TEST(FidelityDense, ProductFormAgreesOnMixedPairs) {
  gd::Rng rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = dn::density_from_gamma(gd::testing::random_state(3, 0, rng));
    const auto b = dn::density_from_gamma(gd::testing::random_state(3, 0, rng));
    EXPECT_NEAR(dn::fidelity_dense(a, b), dn::fidelity_dense_product(a, b), 1e-9);
  }
}

TEST(PartialTrace, ProductAndBellStates) {
  ComplexVector a(2), b(2);
  a << 0.6, Complex(0, 0.8);
  b << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  ComplexVector prod(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) prod(2 * i + j) = a(i) * b(j);
  const auto r = dn::partial_trace(prod, 1);
  EXPECT_LT((r.rho() - a * a.adjoint()).cwiseAbs().maxCoeff(), 1e-15);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  EXPECT_LT((dn::partial_trace(bell, 1).rho() - ComplexMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(dn::partial_trace(bell, 3), gd::ValidationError);
}

TEST(PartialTrace, MixedInputAndComplementarySpectra) {
  gd::Rng rng(25);
  std::normal_distribution<double> n;
  ComplexVector psi(32);
  for (auto& v : psi) v = Complex(n(rng), n(rng));
  psi.normalize();
  const auto r2 = dn::partial_trace(psi, 2);
  const auto full = dn::DenseState::pure(psi);
  EXPECT_LT((dn::partial_trace(full, 2).rho() - r2.rho()).cwiseAbs().maxCoeff(), 1e-14);

  // Reverse the site order so the complement becomes the leading block.
  ComplexVector rev(32);
  for (int i = 0; i < 32; ++i) {
    int r = 0;
    for (int bit = 0; bit < 5; ++bit) r |= ((i >> bit) & 1) << (4 - bit);
    rev(r) = psi(i);
  }
  const auto r3 = dn::partial_trace(rev, 3);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> e2(r2.rho()), e3(r3.rho());
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(e2.eigenvalues()(3 - k), e3.eigenvalues()(7 - k), 1e-12);
  }
}

TEST(MarginalDistances, MatchExplicitReducedStates) {
  gd::Rng rng(31);
  std::normal_distribution<double> normal;
  auto random_vector = [&](int sites) {
    dn::ComplexVector v(Eigen::Index{1} << sites);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {normal(rng), normal(rng)};
    return dn::ComplexVector(v.normalized());
  };
  for (int trial = 0; trial < 4; ++trial) {
    const auto psi = random_vector(6);
    const auto phi = random_vector(6);
    for (int keep = 1; keep <= 6; ++keep) {
      const auto a = dn::partial_trace(psi, keep);
      const auto b = dn::partial_trace(phi, keep);
      EXPECT_NEAR(dn::marginal_fidelity(psi, phi, keep), dn::fidelity_dense(a, b), 1e-10) << keep;
      EXPECT_NEAR(dn::marginal_trace_distance(psi, phi, keep), dn::trace_distance(a, b), 1e-10) << keep;
    }
    EXPECT_DOUBLE_EQ(dn::marginal_fidelity(psi, psi, 4), 1.0);
    EXPECT_NEAR(dn::marginal_trace_distance(psi, psi, 4), 0.0, 1e-14);
  }
  EXPECT_THROW(dn::marginal_fidelity(random_vector(3), random_vector(4), 2), gd::ValidationError);
}
