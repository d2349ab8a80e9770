#include "gaussdist/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "gaussdist/errors.hpp"

namespace gaussdist::ising {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using cd = std::complex<double>;

constexpr double kZeroMode = 1e-12;

void require_sites(int L) {
  if (L < 1 || L > kMaxSites) {
    throw GuardError(fmt::format("chain length {} outside [1, {}]", L, kMaxSites));
  }
}

// Doubled momentum 2k of mode i: NS k = i + 1/2, R k = i.
int doubled_momentum(Sector sector, int mode) {
  return sector == Sector::NS ? 2 * mode + 1 : 2 * mode;
}

bool sector_parity_ok(Sector sector, std::uint32_t occupied) {
  const bool even = std::popcount(occupied) % 2 == 0;
  return sector == Sector::NS ? even : !even;
}

int total_momentum(Sector sector, std::uint32_t occupied, int L) {
  long twice = 0;
  for (std::uint32_t bits = occupied; bits != 0; bits &= bits - 1) {
    twice += doubled_momentum(sector, std::countr_zero(bits));
  }
  // Even count of half-integers (NS) or integers (R): twice is even.
  const long k = twice / 2;
  return static_cast<int>(((k % L) + L) % L);
}

}  // namespace

std::string to_string(Sector sector) {
  return sector == Sector::NS ? "NS" : "R";
}

double tie_tolerance(int L) {
  return 1e-9 * std::max(1, L);
}

double dispersion(double h, int L, double k) {
  if (h < 0.0) {
    throw ValidationError(fmt::format("transverse field must be non-negative, got {}", h));
  }
  if (L < 1) {
    throw ValidationError("chain length must be positive");
  }
  const double phi = 2.0 * std::numbers::pi * k / L;
  return std::sqrt(std::max(0.0, h * h - 2.0 * h * std::cos(phi) + 1.0));
}

int EigenstateLabel::mode_count() const {
  return std::popcount(occupied);
}

std::string describe(const std::optional<SectorFilter>& filter) {
  if (!filter) return "full";
  return fmt::format("P={}/K={}", filter->parity, filter->momentum);
}

IsingChain::IsingChain(int L, double h, ChargeConvention convention)
    : L_(L), h_(h), convention_(convention) {
  require_sites(L);
  if (!(h >= 0.0) || !std::isfinite(h)) {
    throw ValidationError(fmt::format("transverse field must be finite and non-negative, got {}", h));
  }
  ns_ = build_sector(Sector::NS);
  r_ = build_sector(Sector::R);
}

const IsingChain::SectorData& IsingChain::data(Sector sector) const {
  return sector == Sector::NS ? ns_ : r_;
}

IsingChain::SectorData IsingChain::build_sector(Sector sector) const {
  const int L = L_;
  const double pi = std::numbers::pi;
  SectorData d;
  d.k.resize(static_cast<std::size_t>(L));
  d.energy.resize(static_cast<std::size_t>(L));
  d.coefficients = MatrixXcd::Zero(L, 2 * L);
  d.charge_coeff = MatrixXd::Zero(L, L);

  const double inv_norm = 1.0 / (2.0 * std::sqrt(static_cast<double>(L)));
  for (int i = 0; i < L; ++i) {
    const int twice_k = doubled_momentum(sector, i);
    const double k = 0.5 * twice_k;
    d.k[static_cast<std::size_t>(i)] = k;
    // phi = 2 pi k / L; self-conjugate when 2k is a multiple of L.
    const double phi = pi * twice_k / L;
    const bool self_conjugate = twice_k % L == 0;
    const double xi = h_ - std::cos(phi);

    // BdG block [[xi, Delta], [Delta*, -xi]] on (a_k, a^dag_{-k}), Delta = -i sin(phi).
    cd alpha;
    cd beta;
    double eps;
    if (self_conjugate) {
      eps = xi;  // signed: the mode is a_k itself
      alpha = 1.0;
      beta = 0.0;
    } else {
      const cd delta(0.0, -std::sin(phi));
      eps = std::sqrt(xi * xi + std::norm(delta));
      if (xi >= 0.0) {
        const double n = std::sqrt(2.0 * eps * (eps + xi));
        alpha = (eps + xi) / n;
        beta = std::conj(delta) / n;
      } else {
        const double n = std::sqrt(2.0 * eps * (eps - xi));
        alpha = delta / n;
        beta = (eps - xi) / n;
      }
    }
    d.energy[static_cast<std::size_t>(i)] = eps;

    // c_k = alpha* a_k + beta* a^dag_{-k}, with a_j = (d_{2j} + i d_{2j+1}) / 2.
    const cd plus = std::conj(alpha) + std::conj(beta);
    const cd minus = cd(0.0, 1.0) * (std::conj(alpha) - std::conj(beta));
    for (int j = 0; j < L; ++j) {
      const cd phase = std::polar(inv_norm, -phi * j);
      d.coefficients(i, 2 * j) = phase * plus;
      d.coefficients(i, 2 * j + 1) = phase * minus;
    }

    const double arg = convention_ == ChargeConvention::FullMomentum ? 2.0 * pi * k / L : pi * k / L;
    for (int m = 0; m < L; ++m) {
      if (m % 2 == 0) {
        d.charge_coeff(m, i) = std::cos((m / 2) * arg) * eps;
      } else {
        d.charge_coeff(m, i) = std::sin(((m - 1) / 2 + 1) * arg);
      }
    }
  }
  return d;
}

double IsingChain::momentum_label(Sector sector, int mode) const {
  return data(sector).k.at(static_cast<std::size_t>(mode));
}

double IsingChain::mode_energy(Sector sector, int mode) const {
  return data(sector).energy.at(static_cast<std::size_t>(mode));
}

bool IsingChain::has_zero_mode() const {
  for (const SectorData* d : {&ns_, &r_}) {
    for (double e : d->energy) {
      if (std::abs(e) < kZeroMode) return true;
    }
  }
  return false;
}

const MatrixXcd& IsingChain::mode_coefficients(Sector sector) const {
  return data(sector).coefficients;
}

const MatrixXd& IsingChain::charge_coefficients(Sector sector) const {
  return data(sector).charge_coeff;
}

std::vector<double> IsingChain::charges(Sector sector, std::uint32_t occupied) const {
  const MatrixXd& c = data(sector).charge_coeff;
  Eigen::VectorXd n(L_);
  for (int i = 0; i < L_; ++i) n(i) = ((occupied >> i) & 1u) ? 0.5 : -0.5;
  const Eigen::VectorXd q = c * n;
  return {q.data(), q.data() + q.size()};
}

EigenstateLabel IsingChain::label(Sector sector, std::uint32_t occupied) const {
  if (L_ < 32 && (occupied >> L_) != 0) {
    throw ValidationError(fmt::format("occupation mask {:#x} has bits beyond L={}", occupied, L_));
  }
  if (!sector_parity_ok(sector, occupied)) {
    throw ValidationError(fmt::format("{} sector requires {} occupation, mask {:#x} has {} modes",
                                      to_string(sector), sector == Sector::NS ? "even" : "odd",
                                      occupied, std::popcount(occupied)));
  }
  EigenstateLabel out;
  out.sector = sector;
  out.occupied = occupied;
  out.parity = sector == Sector::NS ? 1 : -1;
  out.momentum = total_momentum(sector, occupied, L_);
  out.charges = charges(sector, occupied);
  out.energy = out.charges[0];
  return out;
}

SpectrumTable IsingChain::enumerate(std::optional<SectorFilter> filter) const {
  if (!filter && L_ > kMaxFullSites) {
    throw GuardError(fmt::format("full spectrum enumeration limited to L <= {} (got {}); pass a (P, K) filter",
                                 kMaxFullSites, L_));
  }
  if (filter && L_ > kMaxFilteredSites) {
    throw GuardError(fmt::format("sector enumeration limited to L <= {} (got {})", kMaxFilteredSites, L_));
  }
  if (filter) {
    if (filter->parity != 1 && filter->parity != -1) {
      throw ValidationError(fmt::format("parity filter must be +1 or -1, got {}", filter->parity));
    }
    if (filter->momentum < 0 || filter->momentum >= L_) {
      throw ValidationError(fmt::format("momentum filter {} outside [0, {})", filter->momentum, L_));
    }
  }

  SpectrumTable table;
  table.L = L_;
  table.h = h_;
  table.sector_filter = describe(filter);

  const std::uint32_t count = 1u << L_;
  for (Sector sector : {Sector::NS, Sector::R}) {
    const int parity = sector == Sector::NS ? 1 : -1;
    if (filter && filter->parity != parity) continue;
    for (std::uint32_t mask = 0; mask < count; ++mask) {
      if (!sector_parity_ok(sector, mask)) continue;
      if (filter && total_momentum(sector, mask, L_) != filter->momentum) continue;
      table.states.push_back(label(sector, mask));
    }
  }
  return table;
}

CorrelationMatrix IsingChain::eigenstate_correlation(const EigenstateLabel& state, int ell) const {
  return SubsystemCorrelations(*this, ell)(state);
}

SubsystemCorrelations::SubsystemCorrelations(const IsingChain& chain, int ell) : ell_(ell) {
  if (ell < 1 || ell > chain.L()) {
    throw ValidationError(fmt::format("subsystem size {} outside [1, {}]", ell, chain.L()));
  }
  const Index n = 2 * ell;
  auto build = [&](Sector sector, MatrixXd& base, std::vector<MatrixXd>& delta) {
    const MatrixXcd w = chain.mode_coefficients(sector).leftCols(n);
    // <d_a d_b> = 4 sum_k conj(w_a) w_b - 8 i sum_{occ} Im(conj(w_a) w_b).
    base = 4.0 * (w.adjoint() * w).imag();
    delta.clear();
    delta.reserve(static_cast<std::size_t>(w.rows()));
    for (Index k = 0; k < w.rows(); ++k) {
      const MatrixXcd outer = w.row(k).adjoint() * w.row(k);
      delta.push_back(-8.0 * outer.imag());
    }
  };
  build(Sector::NS, base_ns_, delta_ns_);
  build(Sector::R, base_r_, delta_r_);
}

CorrelationMatrix SubsystemCorrelations::operator()(const EigenstateLabel& state) const {
  const bool ns = state.sector == Sector::NS;
  const std::vector<MatrixXd>& delta = ns ? delta_ns_ : delta_r_;
  if (delta.size() < 32 && (static_cast<std::uint64_t>(state.occupied) >> delta.size()) != 0) {
    throw ValidationError("occupation mask does not match the chain length");
  }
  MatrixXd m = ns ? base_ns_ : base_r_;
  for (std::uint32_t bits = state.occupied; bits != 0; bits &= bits - 1) {
    m += delta[static_cast<std::size_t>(std::countr_zero(bits))];
  }
  return CorrelationMatrix(0.5 * (m - m.transpose()));
}

std::vector<int> complete_key_order(std::span<const int> prefix, int L) {
  std::vector<bool> used(static_cast<std::size_t>(L), false);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(L));
  for (int key : prefix) {
    if (key < 0 || key >= L) {
      throw ValidationError(fmt::format("charge index {} outside [0, {})", key, L));
    }
    if (used[static_cast<std::size_t>(key)]) {
      throw ValidationError(fmt::format("charge index {} repeated in key order", key));
    }
    used[static_cast<std::size_t>(key)] = true;
    out.push_back(key);
  }
  for (int key = 0; key < L; ++key) {
    if (!used[static_cast<std::size_t>(key)]) out.push_back(key);
  }
  return out;
}

std::string describe_key_order(std::span<const int> key_order) {
  return fmt::format("charges:{}", fmt::join(key_order, "/"));
}

SpectrumTable sort_spectrum(SpectrumTable table, std::span<const int> key_order) {
  const std::vector<int> keys = complete_key_order(key_order, table.L);
  const std::size_t n = table.states.size();
  const double tie = tie_tolerance(table.L);

  // Cluster each charge into ranks (values within the tie tolerance of their
  // neighbour share a rank), then sort lexicographically on the rank tuples.
  std::vector<std::vector<int>> ranks(keys.size(), std::vector<int>(n));
  std::vector<std::size_t> idx(n);
  for (std::size_t c = 0; c < keys.size(); ++c) {
    const auto q = static_cast<std::size_t>(keys[c]);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return table.states[a].charges[q] < table.states[b].charges[q];
    });
    int rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && table.states[idx[i]].charges[q] - table.states[idx[i - 1]].charges[q] > tie) {
        ++rank;
      }
      ranks[c][idx[i]] = rank;
    }
  }

  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    for (const auto& r : ranks) {
      if (r[a] != r[b]) return r[a] < r[b];
    }
    return false;
  });

  std::vector<EigenstateLabel> sorted;
  sorted.reserve(n);
  for (std::size_t i : idx) sorted.push_back(std::move(table.states[i]));
  table.states = std::move(sorted);
  table.key_order = keys;
  table.order_provenance = describe_key_order(keys);
  return table;
}

std::size_t degenerate_pairs(const SpectrumTable& table, int m) {
  if (m < 0 || m >= table.L) {
    throw ValidationError(fmt::format("sorting level m={} outside [0, {})", m, table.L));
  }
  std::vector<int> keys = table.key_order;
  if (keys.empty()) keys = complete_key_order({}, table.L);
  const double tie = tie_tolerance(table.L);
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < table.states.size(); ++i) {
    const auto& a = table.states[i].charges;
    const auto& b = table.states[i + 1].charges;
    bool same = true;
    for (int c = 0; c <= m && same; ++c) {
      const auto q = static_cast<std::size_t>(keys[static_cast<std::size_t>(c)]);
      same = std::abs(a[q] - b[q]) <= tie;
    }
    if (same) ++count;
  }
  return count;
}

double degeneracy_ratio(const SpectrumTable& table, int m) {
  if (table.states.size() < 2) {
    throw ValidationError("degeneracy ratio needs at least two states");
  }
  return static_cast<double>(degenerate_pairs(table, m)) / static_cast<double>(table.states.size() - 1);
}

double mode_number_difference(const SpectrumTable& table) {
  if (table.states.size() < 2) {
    throw ValidationError("mode-number difference needs at least two states");
  }
  long total = 0;
  for (std::size_t i = 0; i + 1 < table.states.size(); ++i) {
    total += std::abs(table.states[i].mode_count() - table.states[i + 1].mode_count());
  }
  return static_cast<double>(total) / static_cast<double>(table.states.size() - 1);
}

}  // namespace gaussdist::ising
