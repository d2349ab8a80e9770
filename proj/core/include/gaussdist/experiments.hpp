#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gaussdist/ising.hpp"
#include "gaussdist/sweep.hpp"
#include "gaussdist/xxz.hpp"

namespace gaussdist {

/// How eigenstates are ordered before consecutive pairs are formed.
struct Ordering {
  enum class Kind { Charges, Random };
  Kind kind = Kind::Charges;
  std::vector<int> keys;   // charge prefix (Charges)
  std::uint64_t seed = 0;  // permutation seed (Random)

  static Ordering charges(std::vector<int> keys);
  static Ordering random(std::uint64_t seed);
};

/// Parses "charges:0,1,2", "charges:2/0/1" or "random:SEED".
Ordering parse_ordering(std::string_view text);
/// Canonical comma-free form: "charges:2/0/1" or "random:SEED".
std::string describe(const Ordering& ordering);

/// Sorts by charges, or applies a seeded uniform shuffle to the table as given.
ising::SpectrumTable apply_ordering(ising::SpectrumTable table, const Ordering& ordering);

struct PairAverage {
  double average = 0.0;
  std::size_t pairs = 0;
};

/// Distances between consecutive states (d - 1 values, table order) on the
/// leading `ell` sites. Bures: Gaussian fidelity; trace: dense states built
/// from the correlation matrices.
std::vector<double> consecutive_distances(const ising::IsingChain& chain, const ising::SpectrumTable& table,
                                          int ell, Metric metric);

PairAverage average_consecutive_distance(const ising::IsingChain& chain, const ising::SpectrumTable& table,
                                         int ell, Metric metric);

/// Averages for ell_min..ell_max with the slope fit attached when the fit
/// window is covered.
SweepResult ising_sweep(const ising::IsingChain& chain, const ising::SpectrumTable& table, Metric metric,
                        int ell_min, int ell_max);

/// All-pairs averages inside one XXZ sector.
SweepResult xxz_sweep(int L, int K, int n_down, double delta, double h_z, Metric metric, int ell_min,
                      int ell_max);

/// Degeneracy ratio r(m) for m = 0..L-1 on a table sorted with the default key order.
std::vector<double> degeneracy_profile(const ising::SpectrumTable& table);

/// Rows "index,sector,occupied,E,P,K,Q0..Q{n-1}" (with header).
void write_spectrum_csv(const ising::SpectrumTable& table, std::ostream& out, int charge_count);

/// Rows "index,Q{m}..." for the listed charges in table order.
void export_charge_profiles(const ising::SpectrumTable& table, const std::vector<int>& charge_indices,
                            std::ostream& out);

}  // namespace gaussdist
