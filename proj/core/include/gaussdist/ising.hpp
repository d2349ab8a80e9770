#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gaussdist/correlation.hpp"

namespace gaussdist::ising {

/// Fermion boundary sector of the periodic transverse-field Ising chain.
/// NS: half-integer momenta k = i + 1/2, even occupation, parity +1.
/// R:  integer momenta k = i, odd occupation, parity -1.
enum class Sector { NS, R };

std::string to_string(Sector sector);

/// Momentum argument of the local charges Q_n^{+-}.
enum class ChargeConvention {
  /// cos(2 pi n k / L) eps_k and sin(2 pi (n+1) k / L): local (n+2)-site charges.
  FullMomentum,
  /// cos(pi n k / L) eps_k and sin(pi (n+1) k / L), read literally. Not local;
  /// kept so the locality check can demonstrate the difference.
  HalfAngle,
};

/// Largest chain (occupation masks are 32-bit). Single eigenstates and
/// their correlations are available up to here.
inline constexpr int kMaxSites = 32;
/// Largest L for which the full spectrum is enumerated.
inline constexpr int kMaxFullSites = 16;
/// Largest L for sector-filtered enumeration (all 2^L masks are scanned).
inline constexpr int kMaxFilteredSites = 24;

/// Sort/degeneracy equality tolerance for charge values.
double tie_tolerance(int L);

/// eps_k = sqrt(h^2 - 2 h cos(2 pi k / L) + 1).
double dispersion(double h, int L, double k);

/// One simultaneous eigenstate of H and all local charges.
struct EigenstateLabel {
  Sector sector = Sector::NS;
  std::uint32_t occupied = 0;  // bit i: mode i of the sector (k = i or i + 1/2)
  double energy = 0.0;
  int parity = 1;
  int momentum = 0;            // K in {0, ..., L-1}
  std::vector<double> charges; // Q_0 .. Q_{L-1}

  int mode_count() const;
};

struct SectorFilter {
  int parity = 1;
  int momentum = 0;
};

std::string describe(const std::optional<SectorFilter>& filter);

struct SpectrumTable {
  int L = 0;
  double h = 0.0;
  std::vector<EigenstateLabel> states;
  std::vector<int> key_order;  // charge indices used by the last sort (empty: unsorted)
  std::string order_provenance = "unsorted";
  std::string sector_filter = "full";
};

/// Free-fermion solution of H = -1/2 sum (X_j X_{j+1} + h Z_j) with periodic
/// boundary conditions. Immutable after construction; all queries are
/// thread-safe.
class IsingChain {
 public:
  IsingChain(int L, double h, ChargeConvention convention = ChargeConvention::FullMomentum);

  int L() const { return L_; }
  double h() const { return h_; }
  ChargeConvention convention() const { return convention_; }

  /// Momentum label k of mode i in a sector.
  double momentum_label(Sector sector, int mode) const;

  /// Quasiparticle energy of a mode. For the self-conjugate k = 0 mode of the
  /// R sector this is the signed value h - 1 (see README); elsewhere it equals
  /// dispersion().
  double mode_energy(Sector sector, int mode) const;

  /// True when some mode has |eps_k| < 1e-12 (h = 1, R sector, k = 0). The
  /// zero mode keeps the unrotated convention c_0 = a_0.
  bool has_zero_mode() const;

  /// Rows: Bogoliubov annihilators c_k = sum_a w_k(a) d_a in terms of the
  /// 2L Majoranas of the chain (L x 2L).
  const Eigen::MatrixXcd& mode_coefficients(Sector sector) const;

  EigenstateLabel label(Sector sector, std::uint32_t occupied) const;
  std::vector<double> charges(Sector sector, std::uint32_t occupied) const;

  /// Coefficient table: Q_m = sum_i coefficient(m, i) (n_i - 1/2).
  const Eigen::MatrixXd& charge_coefficients(Sector sector) const;

  /// Enumerates all physical states (NS even, R odd), optionally restricted to
  /// one (P, K) sector. Order: NS masks ascending, then R masks ascending.
  SpectrumTable enumerate(std::optional<SectorFilter> filter = std::nullopt) const;

  /// Correlation matrix of the leading `ell` sites in the given eigenstate.
  CorrelationMatrix eigenstate_correlation(const EigenstateLabel& state, int ell) const;

 private:
  struct SectorData {
    std::vector<double> k;
    std::vector<double> energy;
    Eigen::MatrixXcd coefficients;  // L x 2L
    Eigen::MatrixXd charge_coeff;   // L x L
  };

  const SectorData& data(Sector sector) const;
  SectorData build_sector(Sector sector) const;

  int L_;
  double h_;
  ChargeConvention convention_;
  SectorData ns_;
  SectorData r_;
};

/// Builds subsystem correlation matrices for many eigenstates of one chain:
/// m = B + sum_{k occupied} D_k with precomputed 2l x 2l blocks.
class SubsystemCorrelations {
 public:
  SubsystemCorrelations(const IsingChain& chain, int ell);

  int ell() const { return ell_; }
  CorrelationMatrix operator()(const EigenstateLabel& state) const;

 private:
  int ell_;
  Eigen::MatrixXd base_ns_;
  Eigen::MatrixXd base_r_;
  std::vector<Eigen::MatrixXd> delta_ns_;
  std::vector<Eigen::MatrixXd> delta_r_;
};

/// Extends a key prefix with the remaining charge indices in ascending order.
std::vector<int> complete_key_order(std::span<const int> prefix, int L);

/// Hierarchical sort by the charges listed in key_order (ties within
/// tie_tolerance). Stable with respect to the incoming order.
SpectrumTable sort_spectrum(SpectrumTable table, std::span<const int> key_order);

std::string describe_key_order(std::span<const int> key_order);

/// Fraction of adjacent pairs whose first m+1 sort keys agree within the tie
/// tolerance (Q_0..Q_m for an unsorted or energy-first table). Denominator:
/// number of states - 1.
double degeneracy_ratio(const SpectrumTable& table, int m);

/// Number of adjacent pairs counted by degeneracy_ratio.
std::size_t degenerate_pairs(const SpectrumTable& table, int m);

/// <dN> = 1/(d-1) sum |N_i - N_{i+1}|.
double mode_number_difference(const SpectrumTable& table);

}  // namespace gaussdist::ising
