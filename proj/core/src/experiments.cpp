#include "gaussdist/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>

#include "gaussdist/dense.hpp"
#include "gaussdist/errors.hpp"
#include "gaussdist/fidelity.hpp"
#include "gaussdist/parallel.hpp"

namespace gaussdist {

namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError(fmt::format("invalid {} '{}'", what, text));
  }
  return value;
}

void check_ell_range(int L, int& ell_min, int& ell_max) {
  if (ell_min <= 0) ell_min = 1;
  if (ell_max <= 0) ell_max = L - 1;
  if (ell_min > ell_max || ell_max > L) {
    throw ValidationError(fmt::format("subsystem range [{}, {}] invalid for L={}", ell_min, ell_max, L));
  }
}

void attach_fit(SweepResult& result) {
  const auto [lo, hi] = fit_window(result.L);
  const bool covered = std::any_of(result.rows.begin(), result.rows.end(), [&](const SweepRow& r) {
    return r.ell == lo;
  }) && std::any_of(result.rows.begin(), result.rows.end(), [&](const SweepRow& r) { return r.ell == hi; });
  if (covered && hi > lo) {
    result.fit = linear_slope_fit(result.rows, result.L, result.metric);
  } else {
    result.notes.push_back(fmt::format("fit window {}..{} not covered", lo, hi));
  }
}

}  // namespace

Ordering Ordering::charges(std::vector<int> keys) {
  Ordering o;
  o.kind = Kind::Charges;
  o.keys = std::move(keys);
  return o;
}

Ordering Ordering::random(std::uint64_t seed) {
  Ordering o;
  o.kind = Kind::Random;
  o.seed = seed;
  return o;
}

Ordering parse_ordering(std::string_view text) {
  constexpr std::string_view charges_prefix = "charges:";
  constexpr std::string_view random_prefix = "random:";
  if (text.starts_with(random_prefix)) {
    return Ordering::random(parse_number<std::uint64_t>(text.substr(random_prefix.size()), "seed"));
  }
  if (text.starts_with(charges_prefix)) {
    std::vector<int> keys;
    std::string_view rest = text.substr(charges_prefix.size());
    while (!rest.empty()) {
      const std::size_t cut = rest.find_first_of(",/");
      keys.push_back(parse_number<int>(rest.substr(0, cut), "charge index"));
      if (cut == std::string_view::npos) break;
      rest.remove_prefix(cut + 1);
    }
    if (keys.empty()) throw ValidationError("charge ordering needs at least one index");
    return Ordering::charges(std::move(keys));
  }
  throw ValidationError(fmt::format("unknown ordering '{}' (expected charges:I,J,... or random:SEED)", text));
}

std::string describe(const Ordering& ordering) {
  if (ordering.kind == Ordering::Kind::Random) return fmt::format("random:{}", ordering.seed);
  return ising::describe_key_order(ordering.keys);
}

ising::SpectrumTable apply_ordering(ising::SpectrumTable table, const Ordering& ordering) {
  if (ordering.kind == Ordering::Kind::Charges) {
    return ising::sort_spectrum(std::move(table), ordering.keys);
  }
  std::mt19937_64 rng(ordering.seed);
  std::shuffle(table.states.begin(), table.states.end(), rng);
  table.key_order.clear();
  table.order_provenance = fmt::format("random-permutation({})", ordering.seed);
  return table;
}

std::vector<double> consecutive_distances(const ising::IsingChain& chain, const ising::SpectrumTable& table,
                                          int ell, Metric metric) {
  const std::size_t n = table.states.size();
  if (n < 2) throw ValidationError("consecutive-pair average needs at least 2 states");
  if (metric == Metric::Trace) dense::require_dense_guard(ell, dense::kSweepSites);
  const ising::SubsystemCorrelations correlations(chain, ell);

  std::vector<double> values(n - 1);
  // Each chunk walks its pairs in order and reuses the right-hand state.
  const std::size_t chunks = std::min<std::size_t>(n - 1, 4 * std::max(1u, worker_count()));
  const std::size_t per_chunk = (n - 1 + chunks - 1) / chunks;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * per_chunk;
    const std::size_t end = std::min(n - 1, begin + per_chunk);
    if (begin >= end) return;
    CorrelationMatrix left = correlations(table.states[begin]);
    dense::DenseState left_rho;
    if (metric == Metric::Trace) left_rho = dense::density_from_gamma(left);
    for (std::size_t i = begin; i < end; ++i) {
      CorrelationMatrix right = correlations(table.states[i + 1]);
      if (metric == Metric::Bures) {
        values[i] = bures_distance(left, right);
      } else {
        dense::DenseState right_rho = dense::density_from_gamma(right);
        values[i] = dense::trace_distance(left_rho, right_rho);
        left_rho = std::move(right_rho);
      }
      left = std::move(right);
    }
  });
  return values;
}

PairAverage average_consecutive_distance(const ising::IsingChain& chain, const ising::SpectrumTable& table,
                                         int ell, Metric metric) {
  const std::vector<double> values = consecutive_distances(chain, table, ell, metric);
  double sum = 0.0;
  for (double v : values) sum += v;  // fixed order: deterministic for any thread count
  return {sum / static_cast<double>(values.size()), values.size()};
}

SweepResult ising_sweep(const ising::IsingChain& chain, const ising::SpectrumTable& table, Metric metric,
                        int ell_min, int ell_max) {
  check_ell_range(chain.L(), ell_min, ell_max);
  SweepResult result;
  result.model = "ising";
  result.L = chain.L();
  result.param = chain.h();
  result.sector = table.sector_filter;
  result.ordering = table.key_order.empty() && table.order_provenance == "unsorted"
                        ? "unsorted"
                        : table.order_provenance;
  if (table.order_provenance.starts_with("random-permutation(")) {
    const std::string_view p = table.order_provenance;
    result.ordering = fmt::format("random:{}", p.substr(19, p.size() - 20));
  }
  result.metric = metric;
  for (int ell = ell_min; ell <= ell_max; ++ell) {
    const PairAverage avg = average_consecutive_distance(chain, table, ell, metric);
    result.rows.push_back({ell, static_cast<double>(ell) / chain.L(), avg.average, avg.pairs});
  }
  if (chain.has_zero_mode()) {
    result.notes.push_back("zero mode at k=0 (R sector): unrotated convention c_0 = a_0");
  }
  attach_fit(result);
  return result;
}

SweepResult xxz_sweep(int L, int K, int n_down, double delta, double h_z, Metric metric, int ell_min,
                      int ell_max) {
  check_ell_range(L, ell_min, ell_max);
  const xxz::XXZSector sector = xxz::sector_basis(L, K, n_down);
  const xxz::XXZEigensystem system = xxz::diagonalize(sector, delta, h_z);
  SweepResult result;
  result.model = "xxz";
  result.L = L;
  result.param = delta;
  result.sector = fmt::format("K={}/n_down={}", K, n_down);
  result.ordering = "all-pairs";
  result.metric = metric;
  for (int ell = ell_min; ell <= ell_max; ++ell) {
    const xxz::PairwiseAverage avg = xxz::pairwise_average(system, ell, metric);
    result.rows.push_back({ell, static_cast<double>(ell) / L, avg.average, avg.pairs});
  }
  result.notes.push_back(fmt::format("dim={}", sector.dim()));
  result.notes.push_back(fmt::format("h_z={}", h_z));
  if (system.near_degenerate_gaps > 0) {
    result.notes.push_back(fmt::format("near-degenerate gaps below 1e-10: {}", system.near_degenerate_gaps));
  }
  attach_fit(result);
  return result;
}

std::vector<double> degeneracy_profile(const ising::SpectrumTable& table) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(table.L));
  for (int m = 0; m < table.L; ++m) out.push_back(ising::degeneracy_ratio(table, m));
  return out;
}

void write_spectrum_csv(const ising::SpectrumTable& table, std::ostream& out, int charge_count) {
  charge_count = std::clamp(charge_count, 0, table.L);
  out << "index,sector,occupied,E,P,K";
  for (int m = 0; m < charge_count; ++m) out << ",Q" << m;
  out << '\n';
  for (std::size_t i = 0; i < table.states.size(); ++i) {
    const auto& s = table.states[i];
    fmt::print(out, "{},{},{},{:.17g},{},{}", i, ising::to_string(s.sector), s.occupied, s.energy, s.parity,
               s.momentum);
    for (int m = 0; m < charge_count; ++m) fmt::print(out, ",{:.17g}", s.charges[static_cast<std::size_t>(m)]);
    out << '\n';
  }
}

void export_charge_profiles(const ising::SpectrumTable& table, const std::vector<int>& charge_indices,
                            std::ostream& out) {
  for (int m : charge_indices) {
    if (m < 0 || m >= table.L) {
      throw ValidationError(fmt::format("charge index {} outside [0, {})", m, table.L));
    }
  }
  out << "index";
  for (int m : charge_indices) out << ",Q" << m;
  out << '\n';
  for (std::size_t i = 0; i < table.states.size(); ++i) {
    out << i;
    for (int m : charge_indices) {
      fmt::print(out, ",{:.17g}", table.states[i].charges[static_cast<std::size_t>(m)]);
    }
    out << '\n';
  }
}

}  // namespace gaussdist
