#include "gaussdist/xxz.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gaussdist/errors.hpp"
#include "gaussdist/fidelity.hpp"
#include "gaussdist/parallel.hpp"

namespace gaussdist::xxz {

namespace {

using Eigen::Index;
using cd = std::complex<double>;

void require_sites(int L, int limit) {
  if (L < 2) {
    throw ValidationError(fmt::format("XXZ chain needs at least 2 sites, got {}", L));
  }
  if (L > limit) {
    throw GuardError(fmt::format("XXZ chain length {} exceeds the limit {}", L, limit));
  }
}

struct Orbit {
  std::uint32_t representative;
  int period;
  int shift;  // T^shift(config) == representative
};

Orbit orbit_of(std::uint32_t config, int L) {
  Orbit out{config, L, 0};
  std::uint32_t c = config;
  for (int r = 1; r <= L; ++r) {
    c = translate(c, L);
    if (c < out.representative) {
      out.representative = c;
      out.shift = r;
    }
    if (c == config) {
      out.period = r;
      break;
    }
  }
  return out;
}

int spin(std::uint32_t config, int site, int L) {
  return ((config >> (L - 1 - site)) & 1u) ? -1 : 1;
}

}  // namespace

std::uint32_t translate(std::uint32_t config, int L) {
  const std::uint32_t low = config & 1u;
  return (config >> 1) | (low << (L - 1));
}

Index XXZSector::find(std::uint32_t representative) const {
  const auto it = std::lower_bound(representatives.begin(), representatives.end(), representative);
  if (it == representatives.end() || *it != representative) return -1;
  return static_cast<Index>(it - representatives.begin());
}

XXZSector sector_basis(int L, int K, int n_down) {
  require_sites(L, kMaxSites);
  if (K < 0 || K >= L) {
    throw ValidationError(fmt::format("momentum K={} outside [0, {})", K, L));
  }
  if (n_down < 0 || n_down > L) {
    throw ValidationError(fmt::format("n_down={} outside [0, {}]", n_down, L));
  }
  XXZSector s;
  s.L = L;
  s.K = K;
  s.n_down = n_down;
  const std::uint32_t count = std::uint32_t{1} << L;
  for (std::uint32_t c = 0; c < count; ++c) {
    if (std::popcount(c) != n_down) continue;
    const Orbit o = orbit_of(c, L);
    if (o.representative != c) continue;
    if ((K * o.period) % L != 0) continue;
    s.representatives.push_back(c);
    s.periods.push_back(o.period);
  }
  return s;
}

Eigen::MatrixXcd block_hamiltonian(const XXZSector& sector, double delta, double h_z) {
  const int L = sector.L;
  const Index dim = sector.dim();
  const double k = 2.0 * std::numbers::pi * sector.K / L;
  const double field = -0.5 * h_z * (L - 2 * sector.n_down);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Index a = 0; a < dim; ++a) {
    const std::uint32_t cfg = sector.representatives[static_cast<std::size_t>(a)];
    double diag = field;
    for (int j = 0; j < L; ++j) {
      const int jn = (j + 1) % L;
      const int sj = spin(cfg, j, L);
      const int sn = spin(cfg, jn, L);
      diag += -0.25 * delta * sj * sn;
      if (sj != sn) {
        const std::uint32_t flipped = cfg ^ (std::uint32_t{1} << (L - 1 - j)) ^ (std::uint32_t{1} << (L - 1 - jn));
        const Orbit o = orbit_of(flipped, L);
        const Index b = sector.find(o.representative);
        if (b < 0) continue;  // orbit incompatible with K: amplitudes cancel
        // flipped = T^{-shift} rep, so the phase is e^{-i k shift}.
        const double ratio = std::sqrt(static_cast<double>(sector.periods[static_cast<std::size_t>(a)]) /
                                       sector.periods[static_cast<std::size_t>(b)]);
        h(b, a) += -0.5 * ratio * std::polar(1.0, -k * o.shift);
      }
    }
    h(a, a) += diag;
  }
  return h;
}

dense::SparseOperator dense_hamiltonian(int L, double delta, double h_z) {
  dense::require_dense_guard(L);
  const Index dim = Index{1} << L;
  dense::SparseOperator h(dim, dim);
  for (int j = 0; j < L; ++j) {
    const int jn = (j + 1) % L;
    h += -0.25 * (dense::pauli_x(j, L) * dense::pauli_x(jn, L));
    h += -0.25 * (dense::pauli_y(j, L) * dense::pauli_y(jn, L));
    h += -0.25 * delta * (dense::pauli_z(j, L) * dense::pauli_z(jn, L));
    h += -0.5 * h_z * dense::pauli_z(j, L);
  }
  return h;
}

XXZEigensystem diagonalize(const XXZSector& sector, double delta, double h_z) {
  XXZEigensystem sys;
  sys.sector = sector;
  sys.delta = delta;
  sys.h_z = h_z;
  if (sector.dim() == 0) {
    sys.energies.resize(0);
    sys.vectors.resize(0, 0);
    return sys;
  }
  Eigen::MatrixXcd h = block_hamiltonian(sector, delta, 0.0);
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) {
    throw NumericalError("XXZ block eigensolver did not converge");
  }
  const double field = -0.5 * h_z * (sector.L - 2 * sector.n_down);
  sys.energies = es.eigenvalues().array() + field;
  sys.vectors = es.eigenvectors();
  for (Index c = 0; c < sys.vectors.cols(); ++c) {
    Index arg = 0;
    sys.vectors.col(c).cwiseAbs().maxCoeff(&arg);
    const cd lead = sys.vectors(arg, c);
    sys.vectors.col(c) *= std::conj(lead) / std::abs(lead);
  }
  for (Index i = 0; i + 1 < sys.energies.size(); ++i) {
    if (sys.energies(i + 1) - sys.energies(i) < 1e-10) ++sys.near_degenerate_gaps;
  }
  return sys;
}

dense::ComplexVector full_vector(const XXZSector& sector, const Eigen::VectorXcd& coefficients) {
  require_sites(sector.L, dense::kMaxSites);
  if (coefficients.size() != sector.dim()) {
    throw ValidationError("coefficient vector does not match the sector dimension");
  }
  const int L = sector.L;
  const double k = 2.0 * std::numbers::pi * sector.K / L;
  dense::ComplexVector psi = dense::ComplexVector::Zero(Index{1} << L);
  for (Index a = 0; a < sector.dim(); ++a) {
    const int period = sector.periods[static_cast<std::size_t>(a)];
    const double norm = 1.0 / std::sqrt(static_cast<double>(period));
    std::uint32_t cfg = sector.representatives[static_cast<std::size_t>(a)];
    for (int r = 0; r < period; ++r) {
      psi(cfg) += coefficients(a) * std::polar(norm, -k * r);
      cfg = translate(cfg, L);
    }
  }
  return psi;
}

dense::DenseState eigen_rdm(const XXZEigensystem& system, Index index, int ell) {
  if (index < 0 || index >= system.energies.size()) {
    throw ValidationError(fmt::format("eigenstate index {} outside [0, {})", index, system.energies.size()));
  }
  return dense::partial_trace(full_vector(system.sector, system.vectors.col(index)), ell);
}

PairwiseAverage pairwise_average(const XXZEigensystem& system, int ell, Metric metric) {
  const Index dim = system.energies.size();
  if (dim < 2) {
    throw ValidationError(fmt::format("pairwise average needs a sector with at least 2 states, got {}", dim));
  }
  const int L = system.sector.L;
  if (ell < 1 || ell > L) throw ValidationError(fmt::format("subsystem size {} outside [1, {}]", ell, L));
  const auto count = static_cast<std::size_t>(dim);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> values(pairs.size());

  // Large subsystems: work on the amplitude matrices, whose inner dimension
  // 2^(L - ell) is the smaller one.
  if (2 * ell > L) {
    std::vector<dense::ComplexVector> psi(count);
    parallel_for(count, [&](std::size_t i) {
      psi[i] = full_vector(system.sector, system.vectors.col(static_cast<Index>(i)));
    });
    parallel_for(pairs.size(), [&](std::size_t p) {
      const auto& a = psi[pairs[p].first];
      const auto& b = psi[pairs[p].second];
      values[p] = metric == Metric::Trace ? dense::marginal_trace_distance(a, b, ell)
                                          : bures_from_fidelity(dense::marginal_fidelity(a, b, ell));
    });
  } else {
    std::vector<dense::DenseState> rdms(count);
    parallel_for(count, [&](std::size_t i) { rdms[i] = eigen_rdm(system, static_cast<Index>(i), ell); });
    parallel_for(pairs.size(), [&](std::size_t p) {
      values[p] = dense_distance(rdms[pairs[p].first], rdms[pairs[p].second], metric);
    });
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  return {sum / static_cast<double>(values.size()), values.size()};
}

void write_sector_csv(const XXZEigensystem& system, std::ostream& out) {
  out << "L,K,n_down,delta,index,energy\n";
  for (Index i = 0; i < system.energies.size(); ++i) {
    fmt::print(out, "{},{},{},{:.17g},{},{:.17g}\n", system.sector.L, system.sector.K, system.sector.n_down,
               system.delta, i, system.energies(i));
  }
}

}  // namespace gaussdist::xxz
