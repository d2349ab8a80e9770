#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "gaussdist/dense.hpp"
#include "gaussdist/errors.hpp"
#include "gaussdist/experiments.hpp"
#include "gaussdist/fidelity.hpp"
#include "gaussdist/ising_dense.hpp"

namespace gd = gaussdist;
namespace is = gaussdist::ising;

namespace {

std::vector<gd::SweepRow> line_rows(int L, double slope, double intercept) {
  std::vector<gd::SweepRow> rows;
  for (int ell = 1; ell < L; ++ell) {
    const double x = static_cast<double>(ell) / L;
    rows.push_back({ell, x, slope * x + intercept, 1});
  }
  return rows;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Fit, WindowIsExactIntegerArithmetic) {
  EXPECT_EQ(gd::fit_window(10), std::make_pair(2, 4));
  EXPECT_EQ(gd::fit_window(12), std::make_pair(3, 4));
  EXPECT_EQ(gd::fit_window(14), std::make_pair(3, 5));
  EXPECT_EQ(gd::fit_window(16), std::make_pair(4, 6));
  EXPECT_EQ(gd::fit_window(15), std::make_pair(3, 6));
}

TEST(Fit, ExactLine) {
  const auto fit = gd::linear_slope_fit(line_rows(20, 2.0, 0.0), 20, gd::Metric::Trace);
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-12);
  EXPECT_EQ(fit.ell_min, 4);
  EXPECT_EQ(fit.ell_max, 8);
  EXPECT_EQ(fit.points, 5u);
}

TEST(Fit, ConstantHasZeroSlope) {
  const auto fit = gd::linear_slope_fit(line_rows(14, 0.0, 0.7), 14, gd::Metric::Trace);
  EXPECT_NEAR(fit.slope, 0.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 0.7, 1e-12);
}

TEST(Fit, BuresIsScaled) {
  const auto fit = gd::linear_slope_fit(line_rows(20, 2.0 * std::numbers::sqrt2, 0.0), 20, gd::Metric::Bures);
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
}

TEST(Fit, NeedsTwoPointsInWindow) {
  auto rows = line_rows(20, 1.0, 0.0);
  std::erase_if(rows, [](const gd::SweepRow& r) { return r.ell != 5; });
  EXPECT_THROW(gd::linear_slope_fit(rows, 20, gd::Metric::Trace), gd::ValidationError);
  // Rows outside the window never count.
  EXPECT_THROW(gd::linear_slope_fit(line_rows(4, 1.0, 0.0), 4, gd::Metric::Trace), gd::ValidationError);
}

TEST(ReferenceCurves, Values) {
  using gd::ReferenceCurve;
  EXPECT_DOUBLE_EQ(gd::reference_curve(0.25, ReferenceCurve::F), 0.5);
  EXPECT_DOUBLE_EQ(gd::reference_curve(0.75, ReferenceCurve::F), 1.0);
  EXPECT_DOUBLE_EQ(gd::reference_curve(0.5, ReferenceCurve::F), 1.0);
  EXPECT_DOUBLE_EQ(gd::reference_curve(0.5, ReferenceCurve::G), 1.0);
  EXPECT_DOUBLE_EQ(gd::reference_curve(0.0, ReferenceCurve::G), 0.0);
  EXPECT_DOUBLE_EQ(gd::reference_curve(1e-6, ReferenceCurve::G), 1.0);
  EXPECT_THROW(gd::reference_curve(1.5, ReferenceCurve::F), gd::ValidationError);
}

TEST(Ordering, Parse) {
  const auto a = gd::parse_ordering("charges:2,0,1");
  EXPECT_EQ(a.kind, gd::Ordering::Kind::Charges);
  EXPECT_EQ(a.keys, (std::vector<int>{2, 0, 1}));
  EXPECT_EQ(gd::parse_ordering("charges:2/0/1").keys, a.keys);
  const auto r = gd::parse_ordering("random:18446744073709551615");
  EXPECT_EQ(r.kind, gd::Ordering::Kind::Random);
  EXPECT_EQ(r.seed, 18446744073709551615ull);
  EXPECT_EQ(gd::describe(r), "random:18446744073709551615");
  for (const char* bad : {"charges:", "charges:a", "random:", "random:-1", "energy", "charges:1,,2"}) {
    EXPECT_THROW(gd::parse_ordering(bad), gd::ValidationError) << bad;
  }
}

TEST(Ordering, ChargePrefixEqualsDefaultSort) {
  const is::IsingChain chain(7, 1.0);
  const auto table = chain.enumerate();
  const auto a = gd::apply_ordering(table, gd::Ordering::charges({0, 1, 2}));
  const auto b = is::sort_spectrum(table, std::vector<int>{});
  ASSERT_EQ(a.states.size(), b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) EXPECT_EQ(a.states[i].occupied, b.states[i].occupied);
  EXPECT_EQ(a.order_provenance, b.order_provenance);
}

TEST(Ordering, RandomIsSeedDeterministic) {
  const is::IsingChain chain(8, 1.0);
  const auto table = is::sort_spectrum(chain.enumerate(), std::vector<int>{});
  const auto a = gd::apply_ordering(table, gd::Ordering::random(99));
  const auto b = gd::apply_ordering(table, gd::Ordering::random(99));
  const auto c = gd::apply_ordering(table, gd::Ordering::random(100));
  bool same_as_c = true, same_as_sorted = true;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    EXPECT_EQ(a.states[i].occupied, b.states[i].occupied);
    EXPECT_EQ(a.states[i].sector, b.states[i].sector);
    same_as_c &= a.states[i].occupied == c.states[i].occupied && a.states[i].sector == c.states[i].sector;
    same_as_sorted &= a.states[i].occupied == table.states[i].occupied && a.states[i].sector == table.states[i].sector;
  }
  EXPECT_FALSE(same_as_c);
  EXPECT_FALSE(same_as_sorted);
  EXPECT_EQ(a.order_provenance, "random-permutation(99)");
  EXPECT_TRUE(a.key_order.empty());
}

TEST(ConsecutiveAverage, IdenticalStatesGiveZero) {
  const is::IsingChain chain(6, 1.3);
  auto table = chain.enumerate();
  table.states.assign(5, table.states[3]);
  for (gd::Metric metric : {gd::Metric::Bures, gd::Metric::Trace}) {
    const auto avg = gd::average_consecutive_distance(chain, table, 3, metric);
    EXPECT_EQ(avg.pairs, 4u);
    EXPECT_NEAR(avg.average, 0.0, 1e-7);
  }
}

TEST(ConsecutiveAverage, TwoStatesIsSinglePair) {
  const is::IsingChain chain(6, 0.8);
  auto table = is::sort_spectrum(chain.enumerate(), std::vector<int>{});
  table.states.resize(2);
  const is::SubsystemCorrelations corr(chain, 2);
  const auto avg = gd::average_consecutive_distance(chain, table, 2, gd::Metric::Bures);
  EXPECT_EQ(avg.pairs, 1u);
  EXPECT_DOUBLE_EQ(avg.average, gd::bures_distance(corr(table.states[0]), corr(table.states[1])));
  table.states.resize(1);
  EXPECT_THROW(gd::average_consecutive_distance(chain, table, 2, gd::Metric::Bures), gd::ValidationError);
}

TEST(ConsecutiveAverage, TraceRespectsDenseGuard) {
  const is::IsingChain chain(16, 1.0);
  const auto table = chain.enumerate(is::SectorFilter{1, 1});
  EXPECT_THROW(gd::average_consecutive_distance(chain, table, gd::dense::kSweepSites + 1, gd::Metric::Trace),
               gd::GuardError);
}

TEST(ConsecutiveAverage, GaussianAndDensePipelinesAgree) {
  for (int L : {4, 5, 6}) {
    for (double h : {0.5, 1.0, 2.0}) {
      const is::IsingChain chain(L, h);
      const auto table = is::sort_spectrum(chain.enumerate(), std::vector<int>{});
      const auto matched = is::dense_ops::match_eigenstates(chain, table.states);
      for (int ell = 1; ell <= 3; ++ell) {
        std::vector<gd::dense::DenseState> rho;
        for (const auto& v : matched.vectors) rho.push_back(gd::dense::partial_trace(v, ell));
        double bures = 0.0, trace = 0.0;
        for (std::size_t i = 0; i + 1 < rho.size(); ++i) {
          bures += gd::bures_from_fidelity(gd::dense::fidelity_dense(rho[i], rho[i + 1]));
          trace += gd::dense::trace_distance(rho[i], rho[i + 1]);
        }
        const double n = static_cast<double>(rho.size() - 1);
        EXPECT_NEAR(gd::average_consecutive_distance(chain, table, ell, gd::Metric::Bures).average, bures / n,
                    1e-9)
            << L << " " << h << " " << ell;
        EXPECT_NEAR(gd::average_consecutive_distance(chain, table, ell, gd::Metric::Trace).average, trace / n,
                    1e-9);
      }
    }
  }
}

TEST(Sweep, IsingRowsAndFit) {
  const is::IsingChain chain(10, 1.0);
  const auto table = gd::apply_ordering(chain.enumerate(), gd::Ordering::charges({0}));
  const auto r = gd::ising_sweep(chain, table, gd::Metric::Bures, 0, 0);
  ASSERT_EQ(r.rows.size(), 9u);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(r.rows[i].ell, static_cast<int>(i) + 1);
    EXPECT_EQ(r.rows[i].pairs, 1023u);
    EXPECT_LE(r.rows[i].average / std::numbers::sqrt2, 1.0 + 1e-9);
  }
  ASSERT_TRUE(r.fit.has_value());
  EXPECT_EQ(r.fit->ell_min, 2);
  EXPECT_EQ(r.fit->ell_max, 4);
  EXPECT_EQ(r.model, "ising");
  EXPECT_EQ(r.sector, "full");

  const auto partial = gd::ising_sweep(chain, table, gd::Metric::Bures, 1, 2);
  EXPECT_FALSE(partial.fit.has_value());
  EXPECT_THROW(gd::ising_sweep(chain, table, gd::Metric::Bures, 3, 11), gd::ValidationError);
}

TEST(Sweep, RandomOrderingDescriptor) {
  const is::IsingChain chain(6, 1.0);
  const auto table = gd::apply_ordering(chain.enumerate(), gd::Ordering::random(5));
  EXPECT_EQ(gd::ising_sweep(chain, table, gd::Metric::Bures, 1, 2).ordering, "random:5");
}

TEST(Sweep, XXZSector) {
  const auto r = gd::xxz_sweep(8, 1, 2, std::numbers::sqrt2, 0.0, gd::Metric::Trace, 1, 4);
  EXPECT_EQ(r.model, "xxz");
  EXPECT_EQ(r.sector, "K=1/n_down=2");
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_TRUE(r.fit.has_value());
}

TEST(Csv, SweepFormat) {
  gd::SweepResult r;
  r.model = "ising";
  r.L = 10;
  r.param = 0.1;
  r.sector = "P=1/K=1";
  r.ordering = "charges:0/1";
  r.metric = gd::Metric::Bures;
  r.rows = {{1, 0.1, 1.0 / 3.0, 9}};
  std::ostringstream out;
  gd::write_sweep_csv(r, out);
  const auto l = lines(out.str());
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0], "model,L,param,sector,ordering,metric,ell,x,average,pairs");
  EXPECT_EQ(l[1], "ising,10,0.10000000000000001,P=1/K=1,charges:0/1,bures,1,0.10000000000000001,"
                  "0.33333333333333331,9");
  // 17 significant digits round-trip exactly.
  EXPECT_EQ(std::stod("0.33333333333333331"), 1.0 / 3.0);
}

TEST(Csv, SpectrumAndProfiles) {
  const is::IsingChain chain(4, 1.0);
  const auto table = is::sort_spectrum(chain.enumerate(), std::vector<int>{});
  std::ostringstream spec;
  gd::write_spectrum_csv(table, spec, 2);
  const auto sl = lines(spec.str());
  EXPECT_EQ(sl[0], "index,sector,occupied,E,P,K,Q0,Q1");
  EXPECT_EQ(sl.size(), 17u);

  std::ostringstream prof;
  gd::export_charge_profiles(table, {0, 2}, prof);
  const auto pl = lines(prof.str());
  EXPECT_EQ(pl[0], "index,Q0,Q2");
  EXPECT_EQ(pl.size(), 17u);
  EXPECT_THROW(gd::export_charge_profiles(table, {4}, prof), gd::ValidationError);
}

TEST(ChargeProfiles, SortedMonotoneAndShuffledNot) {
  const is::IsingChain chain(8, 1.0);
  const auto sorted = is::sort_spectrum(chain.enumerate(), std::vector<int>{});
  const auto shuffled = gd::apply_ordering(sorted, gd::Ordering::random(3));
  auto monotone = [](const is::SpectrumTable& t) {
    for (std::size_t i = 0; i + 1 < t.states.size(); ++i) {
      if (t.states[i + 1].charges[0] < t.states[i].charges[0] - is::tie_tolerance(t.L)) return false;
    }
    return true;
  };
  EXPECT_TRUE(monotone(sorted));
  EXPECT_FALSE(monotone(shuffled));
}

TEST(Degeneracy, ProfileLength) {
  const is::IsingChain chain(7, 1.0);
  const auto table = is::sort_spectrum(chain.enumerate(), std::vector<int>{});
  const auto r = gd::degeneracy_profile(table);
  ASSERT_EQ(r.size(), 7u);
  EXPECT_GT(r[0], 0.0);
  EXPECT_EQ(r[1], 0.0);
}
