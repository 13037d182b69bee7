#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "genum/error.hpp"
#include "genum/optimizer.hpp"
#include "oracles.hpp"

using namespace genum;

namespace {

HistogramModel from_mask(const Granularization& gr, std::uint64_t mask) {
  HistogramModel m = gr.model_shell();
  const std::vector<std::uint64_t> counts = gr.dense_counts();
  std::uint64_t w = 0, h = 0;
  for (std::uint64_t b = 0; b < gr.G; ++b) {
    ++w;
    h += counts[b];
    if (b + 1 == gr.G || ((mask >> b) & 1)) {
      m.intervals.push_back({w, h});
      w = h = 0;
    }
  }
  return m;
}

double cost(const HistogramModel& m) { return genum_cost(m, m.total_count()).total; }

void expect_valid(const HistogramModel& m, std::uint64_t n) {
  EXPECT_EQ(m.total_count(), n);
  EXPECT_EQ(m.total_width(), m.G);
  const auto b = m.bounds();
  for (std::size_t i = 1; i < b.size(); ++i) EXPECT_LT(b[i - 1], b[i]);
}

}  // namespace

TEST(Granularize, SingleBin) {
  const DataSet d = DataSet::from_entries({{1, 1}, {2, 1}, {3, 1}});
  const Granularization gr = granularize(d, 1, 1000);
  EXPECT_EQ(gr.dense_counts(), (std::vector<std::uint64_t>{3}));
  EXPECT_EQ(gr.dense_multiple_distinct(), (std::vector<bool>{true}));
}

TEST(Granularize, HandEvaluatedTwoPoints) {
  const DataSet d = DataSet::from_entries({{0, 1}, {1, 1}});
  const Granularization gr = granularize(d, 2, 2);
  EXPECT_DOUBLE_EQ(gr.domain_lower(), -0.25);
  EXPECT_DOUBLE_EQ(gr.domain_upper(), 1.25);
  EXPECT_EQ(gr.dense_counts(), (std::vector<std::uint64_t>{1, 1}));
}

TEST(Granularize, DegenerateDomain) {
  const DataSet d = DataSet::from_entries({{4, 3}});
  EXPECT_NO_THROW(granularize(d, 1, 1));
  try {
    granularize(d, 2, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateDomain);
  }
}

TEST(GranularizeProperty, BinIndexMatchesLinearScan) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    const DataSet d = oracle::small_dataset(rng, 40);
    if (d.distinct_count() < 2) continue;
    const std::uint64_t E = 2 + rng() % 5000;
    for (std::uint64_t G : oracle::schedule(E)) {
      if (G > 512) break;
      const Granularization gr = granularize(d, G, E);
      EXPECT_EQ(gr.dense_counts(), oracle::bin_counts(d, G, E)) << "G=" << G << " E=" << E;
      std::uint64_t total = 0;
      for (const GBin& b : gr.bins) {
        EXPECT_LT(b.index, G);
        total += b.count;
      }
      EXPECT_EQ(total, d.n());
    }
  }
}

TEST(Schedule, PowersOfTwoThenCap) {
  EXPECT_EQ(granularity_schedule(1), (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(granularity_schedule(12), (std::vector<std::uint64_t>{1, 2, 4, 8, 12}));
  EXPECT_EQ(granularity_schedule(16), (std::vector<std::uint64_t>{1, 2, 4, 8, 16}));
  const auto s = granularity_schedule(1'000'000'000);
  EXPECT_EQ(s.size(), 31u);
  EXPECT_EQ(s[29], 1u << 29);
  EXPECT_EQ(s.back(), 1'000'000'000u);
  EXPECT_EQ(granularity_schedule(1ull << 40).back(), kMaxGranularity);
}

TEST(Greedy, FlatCountsGiveOneInterval) {
  std::vector<double> v;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 20; ++j) v.push_back(i);
  }
  const DataSet d = DataSet::from_values(v);
  const Granularization gr = granularize(d, 64, 64);
  const HistogramModel m = greedy_build(gr);
  EXPECT_EQ(m.K(), 1u);
  EXPECT_EQ(oracle::exhaustive(std::vector<std::uint64_t>(8, 160), 8).mask, 0u);
}

TEST(Greedy, SpikeIsIsolatedAndBeatsNull) {
  std::vector<double> v;
  for (int i = 0; i < 64; ++i) v.push_back(i);
  for (int j = 0; j < 500; ++j) v.push_back(40);
  const DataSet d = DataSet::from_values(v);
  const Granularization gr = granularize(d, 64, 64);
  const HistogramModel m = greedy_build(gr);
  HistogramModel null = gr.model_shell();
  null.intervals = {{64, d.n()}};
  EXPECT_LT(cost(m), cost(null));
  const std::uint64_t spike = bin_index(40, gr.origin, gr.range, gr.epsilon, gr.G);
  const auto cuts = m.cuts();
  std::size_t k = 0;
  while (cuts[k + 1] <= spike) ++k;
  EXPECT_GE(m.intervals[k].count, 500u);
  EXPECT_LE(m.intervals[k].g_width, 2u);
}

TEST(GreedyProperty, NotWorseThanFinestOrNull) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 200; ++t) {
    const DataSet d = oracle::small_dataset(rng, 60);
    if (d.distinct_count() < 2) continue;
    const std::uint64_t G = std::uint64_t{1} << (rng() % 9);
    const Granularization gr = granularize(d, G, 1'000'000);
    const HistogramModel m = greedy_build(gr);
    expect_valid(m, d.n());
    HistogramModel finest = from_mask(gr, ~std::uint64_t{0});
    HistogramModel null = gr.model_shell();
    null.intervals = {{G, d.n()}};
    const double tol = 1e-9 * cost(null);
    EXPECT_LE(cost(m), cost(null) + tol);
    if (G <= 64) EXPECT_LE(cost(m), cost(finest) + tol);
  }
}

TEST(PostOptimize, OptimalModelUnchangedAndPerturbedRecovered) {
  std::mt19937_64 rng(23);
  int perturbed = 0;
  for (int t = 0; t < 400; ++t) {
    const DataSet d = oracle::small_dataset(rng, 12);
    if (d.distinct_count() < 2) continue;
    const std::uint64_t E = 2 + rng() % 11;
    const std::uint64_t G = oracle::schedule(E)[rng() % oracle::schedule(E).size()];
    const Granularization gr = granularize(d, G, E);
    const oracle::Best best = oracle::exhaustive(gr.dense_counts(), static_cast<double>(E));
    const HistogramModel opt = from_mask(gr, best.mask);
    const double tol = 1e-9 * std::fabs(best.cost);
    EXPECT_NEAR(cost(post_optimize(opt, gr)), best.cost, tol);

    for (std::uint64_t b = 0; b + 2 < G; ++b) {
      // Shift one boundary b+1 -> b+2 when b+2 is free.
      if (((best.mask >> b) & 1) && !((best.mask >> (b + 1)) & 1)) {
        const std::uint64_t shifted = (best.mask & ~(std::uint64_t{1} << b)) |
                                      (std::uint64_t{1} << (b + 1));
        const HistogramModel p = post_optimize(from_mask(gr, shifted), gr);
        EXPECT_NEAR(cost(p), best.cost, tol) << "G=" << G << " E=" << E;
        ++perturbed;
        break;
      }
    }
  }
  EXPECT_GT(perturbed, 50);
}

TEST(PostOptimizeProperty, NonIncreasingAndIdempotent) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 200; ++t) {
    const DataSet d = oracle::small_dataset(rng, 80);
    if (d.distinct_count() < 2) continue;
    const std::uint64_t G = std::uint64_t{1} << (rng() % 12);
    const Granularization gr = granularize(d, G, 1'000'000);
    const std::uint64_t mask = rng();
    const HistogramModel start = G <= 64 ? from_mask(gr, mask) : greedy_build(gr);
    const HistogramModel once = post_optimize(start, gr);
    expect_valid(once, d.n());
    EXPECT_LE(cost(once), cost(start) + 1e-9 * cost(start));
    EXPECT_EQ(post_optimize(once, gr), once);
  }
}

TEST(BuildStandard, SingleDistinctValue) {
  const DataSet d = DataSet::from_entries({{2.5, 7}});
  const StandardResult r = build_standard(d);
  EXPECT_EQ(r.model.K(), 1u);
  EXPECT_EQ(r.chosen_G, 1u);
  EXPECT_LT(r.model.domain_lower(), 2.5);
  EXPECT_GT(r.model.domain_upper(), 2.5);
}

TEST(BuildStandardProperty, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 300; ++t) {
    const DataSet d = oracle::small_dataset(rng, 12);
    BuildOptions o;
    o.force_E = 1 + rng() % 12;
    const StandardResult r = build_standard(d, o);
    const oracle::Best best = oracle::exhaustive_over_schedule(d, *o.force_E);
    EXPECT_LE(r.cost.total - best.cost, 1e-9 * std::fabs(best.cost))
        << "t=" << t << " E=" << *o.force_E << " G=" << r.chosen_G << " oracle G=" << best.G;
  }
}

TEST(BuildStandardProperty, InvariantsDeterminismAndLevel) {
  std::mt19937_64 rng(26);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> v(200 + rng() % 800);
    for (double& x : v) x = normal(rng);
    const DataSet d = DataSet::from_values(v);
    const StandardResult a = build_standard(d);
    const StandardResult b = build_standard(d);
    EXPECT_EQ(a.model, b.model);
    expect_valid(a.model, d.n());
    EXPECT_LE(a.cost.total, a.null_cost);
    EXPECT_GE(level(a.cost.total, a.null_cost), 0.0);
    EXPECT_EQ(a.cost.total, genum_cost(a.model, d.n()).total);
  }
}

TEST(BuildStandard, BimodalDataHasPositiveLevel) {
  std::vector<double> v;
  for (int i = 0; i < 300; ++i) v.push_back(0.001 * i);
  for (int i = 0; i < 300; ++i) v.push_back(100 + 0.001 * i);
  const StandardResult r = build_standard(DataSet::from_values(v));
  EXPECT_GT(level(r.cost.total, r.null_cost), 0.0);
  EXPECT_GE(r.model.K(), 3u);
}

TEST(BuildStandard, EarlyStopStopsAndStaysClose) {
  std::mt19937_64 rng(27);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(3000);
  for (double& x : v) x = normal(rng);
  const DataSet d = DataSet::from_values(v);
  BuildOptions o;
  o.early_stop = true;
  const StandardResult fast = build_standard(d, o);
  const StandardResult full = build_standard(d);
  EXPECT_GE(fast.cost.total, full.cost.total);
  EXPECT_LT(fast.chosen_G, 1u << 20);
  EXPECT_NEAR(fast.cost.total, full.cost.total, 1e-3 * full.cost.total);
}

TEST(BuildStandardProperty, ExactTransformInvariance) {
  std::mt19937_64 rng(28);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> v(100 + rng() % 200);
    for (double& x : v) x = static_cast<double>(rng() % (1u << 20));
    const DataSet d = DataSet::from_values(v);
    const StandardResult base = build_standard(d);
    const int p = static_cast<int>(rng() % 9) - 4;
    const double shift = static_cast<double>(rng() % 1024);
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::ldexp(v[i], p) + shift;
    const StandardResult moved = build_standard(DataSet::from_values(w));
    ASSERT_EQ(moved.model.intervals, base.model.intervals);
    const auto b0 = base.model.bounds();
    const auto b1 = moved.model.bounds();
    for (std::size_t k = 0; k < b0.size(); ++k) {
      const double expect = std::ldexp(b0[k], p) + shift;
      EXPECT_LE(std::fabs(b1[k] - expect), std::nextafter(std::fabs(expect), INFINITY) -
                                               std::fabs(expect))
          << k;
    }
  }
}
