#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "gaussdist/errors.hpp"
#include "gaussdist/xxz.hpp"

namespace gd = gaussdist;
namespace xz = gaussdist::xxz;
using gd::dense::ComplexMatrix;

namespace {

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

const double kDelta = std::sqrt(2.0);

}  // namespace

TEST(XXZBasis, FullyPolarized) {
  for (int K = 0; K < 4; ++K) EXPECT_EQ(xz::sector_basis(4, K, 0).dim(), K == 0 ? 1 : 0);
}

TEST(XXZBasis, DimensionsSumToBinomial) {
  for (int L : {4, 6, 9, 12}) {
    for (int nd = 0; nd <= L; nd += std::max(1, L / 4)) {
      long total = 0;
      for (int K = 0; K < L; ++K) total += xz::sector_basis(L, K, nd).dim();
      EXPECT_EQ(total, binomial(L, nd)) << L << " " << nd;
    }
  }
}

TEST(XXZBasis, BruteForceOrbitCount) {
  const int L = 12, nd = 2, K = 1;
  std::set<std::uint32_t> reps;
  int compatible = 0;
  for (std::uint32_t c = 0; c < (1u << L); ++c) {
    if (__builtin_popcount(c) != nd) continue;
    std::uint32_t best = c, t = c;
    int period = 0;
    do {
      t = xz::translate(t, L);
      best = std::min(best, t);
      ++period;
    } while (t != c);
    if (reps.insert(best).second && (K * period) % L == 0) ++compatible;
  }
  const auto s = xz::sector_basis(L, K, nd);
  EXPECT_EQ(s.dim(), compatible);
  for (std::uint32_t r : s.representatives) EXPECT_TRUE(reps.count(r));
}

TEST(XXZBasis, Validation) {
  EXPECT_THROW(xz::sector_basis(4, 4, 1), gd::ValidationError);
  EXPECT_THROW(xz::sector_basis(4, 0, 5), gd::ValidationError);
  EXPECT_THROW(xz::sector_basis(xz::kMaxSites + 1, 0, 1), gd::GuardError);
}

TEST(XXZHamiltonian, TwoSiteSinglet) {
  // L=2 ring: both bonds couple the same pair, so H = -1/2 (XX + YY + delta ZZ).
  // In n_down=1, K=0 the state is the triplet (|ud> + |du>)/sqrt2 with energy -1/2 (2 - delta).
  const auto s = xz::sector_basis(2, 0, 1);
  ASSERT_EQ(s.dim(), 1);
  const auto h = xz::block_hamiltonian(s, kDelta);
  EXPECT_NEAR(h(0, 0).real(), -0.5 * (2 - kDelta), 1e-14);
  const auto s1 = xz::sector_basis(2, 1, 1);
  ASSERT_EQ(s1.dim(), 1);
  EXPECT_NEAR(xz::block_hamiltonian(s1, kDelta)(0, 0).real(), -0.5 * (-2 - kDelta), 1e-14);
}

TEST(XXZHamiltonian, BlockSpectraMatchDense) {
  for (int L : {4, 7, 8, 10}) {
    std::vector<double> blocks;
    for (int nd = 0; nd <= L; ++nd)
      for (int K = 0; K < L; ++K) {
        const auto s = xz::sector_basis(L, K, nd);
        if (s.dim() == 0) continue;
        const auto h = xz::block_hamiltonian(s, kDelta, 0.3);
        EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
        const auto sys = xz::diagonalize(s, kDelta, 0.3);
        for (Eigen::Index i = 0; i < sys.energies.size(); ++i) blocks.push_back(sys.energies(i));
      }
    std::sort(blocks.begin(), blocks.end());
    const ComplexMatrix full(xz::dense_hamiltonian(L, kDelta, 0.3));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(full, Eigen::EigenvaluesOnly);
    ASSERT_EQ(blocks.size(), static_cast<std::size_t>(es.eigenvalues().size()));
    for (std::size_t i = 0; i < blocks.size(); ++i) EXPECT_NEAR(blocks[i], es.eigenvalues()(i), 1e-10) << L;
  }
}

TEST(XXZHamiltonian, FieldIsConstantShift) {
  const auto s = xz::sector_basis(8, 1, 3);
  const auto h0 = xz::block_hamiltonian(s, kDelta, 0.0);
  const auto h1 = xz::block_hamiltonian(s, kDelta, 0.3);
  const auto diff = h1 - h0;
  const double shift = -0.5 * 0.3 * (8 - 6);
  EXPECT_LT((diff - shift * Eigen::MatrixXcd::Identity(s.dim(), s.dim())).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(XXZEigen, ReconstructionIsNormalizedEigenvector) {
  const int L = 8;
  const ComplexMatrix full(xz::dense_hamiltonian(L, kDelta));
  const auto sys = xz::diagonalize(xz::sector_basis(L, 1, 3), kDelta);
  for (Eigen::Index i = 0; i < sys.energies.size(); ++i) {
    const auto v = xz::full_vector(sys.sector, sys.vectors.col(i));
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    EXPECT_LT((full * v - sys.energies(i) * v).norm(), 1e-10);
  }
}

TEST(XXZEigen, PolarizedStateGivesPureProductRdm) {
  const auto sys = xz::diagonalize(xz::sector_basis(6, 0, 0), kDelta);
  const auto rdm = xz::eigen_rdm(sys, 0, 3);
  EXPECT_NEAR(rdm.rho()(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR((rdm.rho() * rdm.rho()).trace().real(), 1.0, 1e-14);
}

TEST(XXZEigen, RdmMatchesDenseEigenvectors) {
  // Non-degenerate states of one sector are fixed up to phase by (E, K, n_down);
  // compare with projecting the dense eigenvector of the same energy.
  const int L = 8;
  const ComplexMatrix full(xz::dense_hamiltonian(L, kDelta));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(full);
  const auto sys = xz::diagonalize(xz::sector_basis(L, 1, 2), kDelta);
  for (Eigen::Index i = 0; i < sys.energies.size(); ++i) {
    const auto v = xz::full_vector(sys.sector, sys.vectors.col(i));
    // Project onto the dense eigenspace and check it is fully contained in it.
    gd::dense::ComplexVector proj = gd::dense::ComplexVector::Zero(v.size());
    for (Eigen::Index c = 0; c < es.eigenvalues().size(); ++c) {
      if (std::abs(es.eigenvalues()(c) - sys.energies(i)) < 1e-9) {
        proj += es.eigenvectors().col(c) * (es.eigenvectors().col(c).adjoint() * v)(0, 0);
      }
    }
    EXPECT_NEAR(proj.norm(), 1.0, 1e-9);
    const auto a = gd::dense::partial_trace(v, 4);
    const auto b = gd::dense::partial_trace(gd::dense::ComplexVector(proj / proj.norm()), 4);
    EXPECT_LT((a.rho() - b.rho()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(XXZEigen, TranslationInvariantRdm) {
  const int L = 8;
  const auto sys = xz::diagonalize(xz::sector_basis(L, 1, 3), kDelta);
  for (Eigen::Index i = 0; i < sys.energies.size(); ++i) {
    const auto v = xz::full_vector(sys.sector, sys.vectors.col(i));
    gd::dense::ComplexVector shifted(v.size());
    for (std::uint32_t c = 0; c < v.size(); ++c) shifted(xz::translate(c, L)) = v(c);
    const auto a = gd::dense::partial_trace(v, 3);
    const auto b = gd::dense::partial_trace(shifted, 3);
    EXPECT_LT((a.rho() - b.rho()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(XXZPairwise, DimTwoAndRanges) {
  const auto small = xz::diagonalize(xz::sector_basis(4, 1, 1), kDelta);
  ASSERT_EQ(small.energies.size(), 1);
  EXPECT_THROW(xz::pairwise_average(small, 2, gd::Metric::Trace), gd::ValidationError);

  // Orbits 000011 and 000101 (period 6) survive K=1; 001001 (period 3) does not.
  const auto two = xz::diagonalize(xz::sector_basis(6, 1, 2), kDelta);
  ASSERT_EQ(two.energies.size(), 2);
  const auto avg = xz::pairwise_average(two, 2, gd::Metric::Trace);
  EXPECT_EQ(avg.pairs, 1u);
  EXPECT_NEAR(avg.average,
              gd::dense::trace_distance(xz::eigen_rdm(two, 0, 2), xz::eigen_rdm(two, 1, 2)), 1e-15);

  const auto sys = xz::diagonalize(xz::sector_basis(10, 1, 2), kDelta);
  for (int ell = 1; ell < 10; ++ell) {
    const auto t = xz::pairwise_average(sys, ell, gd::Metric::Trace);
    const auto b = xz::pairwise_average(sys, ell, gd::Metric::Bures);
    EXPECT_GE(t.average, 0.0);
    EXPECT_LE(t.average, 1.0 + 1e-12);
    EXPECT_LE(b.average, std::sqrt(2.0) + 1e-12);
    EXPECT_EQ(t.pairs, static_cast<std::size_t>(sys.energies.size() * (sys.energies.size() - 1) / 2));
  }
}

TEST(XXZPairwise, IndependentOfField) {
  const auto s = xz::sector_basis(10, 1, 2);
  const auto a = xz::diagonalize(s, kDelta, 0.0);
  const auto b = xz::diagonalize(s, kDelta, 0.3);
  for (int ell : {2, 4}) {
    EXPECT_NEAR(xz::pairwise_average(a, ell, gd::Metric::Trace).average,
                xz::pairwise_average(b, ell, gd::Metric::Trace).average, 1e-10);
    EXPECT_NEAR(xz::pairwise_average(a, ell, gd::Metric::Bures).average,
                xz::pairwise_average(b, ell, gd::Metric::Bures).average, 1e-10);
  }
}
