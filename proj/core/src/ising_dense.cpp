#include "gaussdist/ising_dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "gaussdist/errors.hpp"

namespace gaussdist::ising::dense_ops {

namespace {

using Eigen::Index;
using dense::Complex;

SparseOperator projector(int L, int sign) {
  SparseOperator id = dense::identity(L);
  SparseOperator p = parity(L);
  SparseOperator out = 0.5 * (id + static_cast<double>(sign) * p);
  return out;
}

}  // namespace

SparseOperator hamiltonian(int L, double h) {
  dense::require_dense_guard(L);
  const Index dim = Index{1} << L;
  SparseOperator hm(dim, dim);
  for (int j = 0; j < L; ++j) {
    hm += -0.5 * (dense::pauli_x(j, L) * dense::pauli_x((j + 1) % L, L));
    hm += -0.5 * h * dense::pauli_z(j, L);
  }
  return hm;
}

SparseOperator parity(int L) {
  dense::require_dense_guard(L);
  SparseOperator p = dense::identity(L);
  for (int j = 0; j < L; ++j) p = p * dense::pauli_z(j, L);
  return p;
}

SparseOperator translation(int L) {
  dense::require_dense_guard(L);
  const Index dim = Index{1} << L;
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(dim));
  for (Index b = 0; b < dim; ++b) {
    // Site 1 is the top bit; the last site's bit moves to the top.
    const Index low = b & 1;
    const Index shifted = (b >> 1) | (low << (L - 1));
    trip.emplace_back(shifted, b, 1.0);
  }
  SparseOperator t(dim, dim);
  t.setFromTriplets(trip.begin(), trip.end());
  return t;
}

SparseOperator mode_annihilator(const IsingChain& chain, Sector sector, int mode) {
  const int L = chain.L();
  const auto majoranas = dense::majorana_operators(L);
  const Eigen::MatrixXcd& w = chain.mode_coefficients(sector);
  const Index dim = Index{1} << L;
  SparseOperator c(dim, dim);
  for (Index a = 0; a < 2 * L; ++a) {
    c += w(mode, a) * majoranas->ops[static_cast<std::size_t>(a)];
  }
  return c;
}

ComplexMatrix charge(const IsingChain& chain, int m) {
  const int L = chain.L();
  if (m < 0 || m >= L) {
    throw ValidationError(fmt::format("charge index {} outside [0, {})", m, L));
  }
  dense::require_dense_guard(L);
  const Index dim = Index{1} << L;
  const SparseOperator id = dense::identity(L);
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Sector sector : {Sector::NS, Sector::R}) {
    const Eigen::MatrixXd& coeff = chain.charge_coefficients(sector);
    SparseOperator q(dim, dim);
    for (int i = 0; i < L; ++i) {
      const SparseOperator c = mode_annihilator(chain, sector, i);
      const SparseOperator cd = SparseOperator(c.adjoint());
      q += coeff(m, i) * (cd * c - 0.5 * id);
    }
    const SparseOperator proj = projector(L, sector == Sector::NS ? 1 : -1);
    out += ComplexMatrix(proj * q);
  }
  return out;
}

int pauli_support_width(const ComplexMatrix& op, int L, double tolerance) {
  dense::require_dense_guard(L, 10);
  const Index dim = Index{1} << L;
  if (op.rows() != dim || op.cols() != dim) {
    throw ValidationError("operator size does not match the number of sites");
  }
  int width = 0;
  std::vector<int> kinds(static_cast<std::size_t>(L));
  const std::uint64_t strings = std::uint64_t{1} << (2 * L);
  for (std::uint64_t s = 1; s < strings; ++s) {
    Index flip = 0;
    for (int j = 0; j < L; ++j) {
      const int kind = static_cast<int>((s >> (2 * j)) & 3u);  // 0 I, 1 X, 2 Y, 3 Z
      kinds[static_cast<std::size_t>(j)] = kind;
      if (kind == 1 || kind == 2) flip |= Index{1} << (L - 1 - j);
    }
    // tr(P op) = sum_c phase(c) op(c, c ^ flip), where P|c> = phase(c)|c ^ flip>.
    Complex tr = 0.0;
    for (Index c = 0; c < dim; ++c) {
      Complex phase = 1.0;
      for (int j = 0; j < L; ++j) {
        const int bit = static_cast<int>((c >> (L - 1 - j)) & 1);
        switch (kinds[static_cast<std::size_t>(j)]) {
          case 2: phase *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0); break;
          case 3: if (bit) phase = -phase; break;
          default: break;
        }
      }
      tr += phase * op(c, c ^ flip);
    }
    if (std::abs(tr) / static_cast<double>(dim) <= tolerance) continue;

    std::vector<int> sites;
    for (int j = 0; j < L; ++j) {
      if (kinds[static_cast<std::size_t>(j)] != 0) sites.push_back(j);
    }
    int max_gap = 0;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const int next = i + 1 < sites.size() ? sites[i + 1] : sites[0] + L;
      max_gap = std::max(max_gap, next - sites[i]);
    }
    width = std::max(width, L - max_gap + 1);
  }
  return width;
}

MatchedEigenstates match_eigenstates(const IsingChain& chain, const std::vector<EigenstateLabel>& labels,
                                     std::uint64_t seed) {
  const int L = chain.L();
  dense::require_dense_guard(L, 10);
  const Index dim = Index{1} << L;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.5, 1.5);
  std::vector<ComplexMatrix> charges;
  charges.reserve(static_cast<std::size_t>(L));
  for (int m = 0; m < L; ++m) charges.push_back(charge(chain, m));
  const ComplexMatrix p = ComplexMatrix(parity(L));

  ComplexMatrix combo = weight(rng) * p;
  for (const ComplexMatrix& q : charges) combo += weight(rng) * q;
  combo = 0.5 * (combo + combo.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(combo);
  if (es.info() != Eigen::Success) {
    throw NumericalError("dense eigensolver failed while matching eigenstates");
  }

  MatchedEigenstates out;
  out.vectors.assign(labels.size(), ComplexVector());
  std::vector<bool> taken(labels.size(), false);
  for (Index col = 0; col < dim; ++col) {
    const ComplexVector v = es.eigenvectors().col(col);
    const int par = (v.adjoint() * p * v)(0, 0).real() > 0.0 ? 1 : -1;
    std::vector<double> q(static_cast<std::size_t>(L));
    for (int m = 0; m < L; ++m) {
      q[static_cast<std::size_t>(m)] = (v.adjoint() * charges[static_cast<std::size_t>(m)] * v)(0, 0).real();
    }
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = labels.size();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (taken[i] || labels[i].parity != par) continue;
      double dist = 0.0;
      for (int m = 0; m < L; ++m) {
        dist = std::max(dist, std::abs(labels[i].charges[static_cast<std::size_t>(m)] - q[static_cast<std::size_t>(m)]));
      }
      if (dist < best) {
        best = dist;
        best_idx = i;
      }
    }
    if (best_idx == labels.size() || best > 1e-6) continue;  // outside the requested labels
    taken[best_idx] = true;
    out.vectors[best_idx] = v;
    out.max_charge_residual = std::max(out.max_charge_residual, best);
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!taken[i]) {
      throw NumericalError(fmt::format("no dense eigenvector matched label {} (mask {:#x})", i, labels[i].occupied));
    }
  }
  return out;
}

}  // namespace gaussdist::ising::dense_ops
