#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "genum/criterion.hpp"
#include "genum/error.hpp"
#include "oracles.hpp"

using namespace genum;

namespace {

HistogramModel model(std::uint64_t E, std::uint64_t G, std::vector<IntervalSpec> iv) {
  HistogramModel m;
  m.E = E;
  m.G = G;
  m.origin = 0.0;
  m.range = 1.0;
  m.epsilon = 1.0 / static_cast<double>(E);
  m.intervals = std::move(iv);
  return m;
}

double oracle_cost(const HistogramModel& m) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> iv;
  for (const auto& s : m.intervals) iv.push_back({s.g_width, s.count});
  return oracle::genum_cost(iv, m.G, static_cast<double>(m.E));
}

HistogramModel random_model(std::mt19937_64& rng, std::uint64_t max_G) {
  const std::uint64_t G = 1 + rng() % max_G;
  const std::uint64_t K = 1 + rng() % std::min<std::uint64_t>(G, 40);
  // K-1 distinct cut positions in [1, G).
  std::vector<std::uint64_t> cuts{0, G};
  while (cuts.size() < K + 1) {
    const std::uint64_t c = 1 + rng() % (G - 1);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<IntervalSpec> iv;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const std::uint64_t h = rng() % 3 == 0 ? 0 : rng() % 100000;
    iv.push_back({cuts[k + 1] - cuts[k], h});
  }
  const std::uint64_t E = G + rng() % 1'000'000'000;
  return model(E, G, iv);
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;
}

}  // namespace

TEST(UniversalCodeLength, SmallValues) {
  EXPECT_NEAR(universal_code_length(1), 1.0525907, 1e-6);
  EXPECT_NEAR(universal_code_length(2), 1.0525907 + std::log(2.0), 1e-6);
  EXPECT_DOUBLE_EQ(universal_code_length(1), std::log(2.865064));
  EXPECT_EQ(code_of([] { universal_code_length(0); }), ErrorCode::NonPositiveInteger);
}

TEST(UniversalCodeLength, MatchesSeriesAndIsMonotone) {
  double prev = universal_code_length(1);
  for (std::uint64_t k = 2; k <= 1'000'000; ++k) {
    const double v = universal_code_length(k);
    ASSERT_GE(v, prev) << k;
    prev = v;
    if (k % 9973 == 0) {
      EXPECT_NEAR(v, oracle::log_star(static_cast<double>(k)), 1e-12);
    }
  }
}

TEST(LogBinomial, SmallCasesAgainstEnumeration) {
  EXPECT_EQ(log_binomial(0, 0), 0.0);
  EXPECT_NEAR(log_binomial(4, 2), std::log(6.0), 1e-14);
  EXPECT_NEAR(log_binomial(10, 3), std::log(120.0), 1e-13);
  for (unsigned n = 0; n <= 16; ++n) {
    for (unsigned k = 0; k <= n; ++k) {
      EXPECT_NEAR(log_binomial(n, k),
                  std::log(static_cast<double>(oracle::count_subsets(n, k))), 1e-12)
          << n << ' ' << k;
    }
  }
  EXPECT_EQ(log_binomial(7, 7), 0.0);
  EXPECT_EQ(code_of([] { log_binomial(3, 4); }), ErrorCode::InvalidArguments);
}

TEST(LogFactorial, TableAndLgammaAgree) {
  double acc = 0.0;
  for (std::uint64_t k = 1; k <= 70000; ++k) {
    acc += std::log(static_cast<double>(k));
    if (k % 997 == 0 || k == 65535 || k == 65536) {
      EXPECT_NEAR(log_factorial(k), acc, 1e-9 * acc) << k;
    }
  }
  EXPECT_EQ(log_factorial(0), 0.0);
  EXPECT_EQ(log_factorial(1), 0.0);
  EXPECT_TRUE(std::isfinite(log_factorial(1'000'000'000)));
  EXPECT_TRUE(std::isfinite(log_binomial((1ull << 30) + 1'000'000'000, 1'000'000'000)));
}

TEST(GenumCost, NullModelClosedForm) {
  for (std::uint64_t n : {1ull, 10ull, 1'000'000ull}) {
    for (std::uint64_t E : {10ull, 1'000'000'000ull}) {
      const CostBreakdown c = genum_cost(model(E, 1, {{1, n}}), n);
      const double expect = 2 * universal_code_length(1) +
                            static_cast<double>(n) * std::log(static_cast<double>(E));
      EXPECT_NEAR(c.total, expect, 1e-12 * expect);
      EXPECT_EQ(c.boundary_prior, 0.0);
      EXPECT_EQ(c.multinomial_choice, 0.0);
      EXPECT_EQ(c.multinomial_factorial, 0.0);
    }
  }
}

TEST(GenumCost, HandEvaluatedTwoIntervalModel) {
  const CostBreakdown c = genum_cost(model(2, 2, {{1, 1}, {1, 1}}), 2);
  EXPECT_NEAR(c.num_intervals_prior, oracle::log_star(2), 1e-14);
  EXPECT_NEAR(c.granularity_prior, oracle::log_star(2), 1e-14);
  EXPECT_NEAR(c.boundary_prior, std::log(3.0), 1e-14);
  EXPECT_NEAR(c.multinomial_choice, std::log(3.0), 1e-14);
  EXPECT_NEAR(c.multinomial_factorial, std::log(2.0), 1e-14);
  EXPECT_NEAR(c.bin_index, 0.0, 1e-15);
}

TEST(GenumCost, TotalIsSumOfTermsAndTermsNonNegative) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 2000; ++t) {
    const HistogramModel m = random_model(rng, 1 << 20);
    const CostBreakdown c = genum_cost(m, m.total_count());
    const double sum = c.num_intervals_prior + c.granularity_prior + c.boundary_prior +
                       c.multinomial_choice + c.multinomial_factorial + c.bin_index;
    EXPECT_EQ(c.total, sum);
    for (double term : {c.num_intervals_prior, c.granularity_prior, c.boundary_prior,
                        c.multinomial_choice, c.multinomial_factorial, c.bin_index}) {
      EXPECT_GE(term, 0.0);
    }
    EXPECT_NEAR(c.total, oracle_cost(m), 1e-9 * std::max(1.0, c.total));
  }
}

TEST(GenumCost, KOneTotalIndependentOfGranularity) {
  for (std::uint64_t G : {1ull, 2ull, 64ull, 1ull << 20}) {
    const std::uint64_t n = 500, E = 1'000'000;
    const double expect = universal_code_length(1) + universal_code_length(G) +
                          static_cast<double>(n) * std::log(static_cast<double>(E));
    EXPECT_NEAR(genum_cost(model(E, G, {{G, n}}), n).total, expect, 1e-10 * expect);
  }
}

TEST(GenumCost, Errors) {
  EXPECT_EQ(code_of([] { genum_cost(model(4, 2, {{1, 1}, {1, 1}}), 3); }),
            ErrorCode::InconsistentCounts);
  EXPECT_EQ(code_of([] { genum_cost(model(4, 3, {{1, 1}, {1, 1}}), 2); }),
            ErrorCode::InconsistentWidths);
}

TEST(EnumCost, NullAndHandEvaluated) {
  const std::uint64_t n = 4, E = 4;
  EXPECT_NEAR(enum_cost(model(E, E, {{E, n}}), n).total,
              universal_code_length(1) + 4 * std::log(4.0), 1e-13);
  // E=4, K=2, h=(3,1), E_k=(2,2).
  const double expect = oracle::log_star(2) + std::log(5.0) /* C(5,1) */ +
                        std::log(5.0) /* C(5,1) */ + std::log(4.0) /* 4!/3!1! */ +
                        3 * std::log(2.0) + std::log(2.0);
  const CostBreakdown c = enum_cost(model(E, E, {{2, 3}, {2, 1}}), n);
  EXPECT_NEAR(c.total, expect, 1e-13);
  EXPECT_EQ(c.granularity_prior, 0.0);
}

TEST(EnumCost, DiffersFromGenumByGranularityPriorWhenGEqualsE) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    HistogramModel m = random_model(rng, 5000);
    m.E = m.G;
    const std::uint64_t n = m.total_count();
    EXPECT_NEAR(genum_cost(m, n).total - enum_cost(m, n).total,
                universal_code_length(m.G), 1e-9 * genum_cost(m, n).total);
  }
}

TEST(MergeDelta, MatchesFullRecomputation) {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 1000) {
    const HistogramModel m = random_model(rng, 1 << 20);
    if (m.K() < 2) continue;
    const std::uint64_t n = m.total_count();
    const std::size_t k = rng() % (m.K() - 1);
    HistogramModel merged = m;
    merged.intervals[k] = {m.intervals[k].g_width + m.intervals[k + 1].g_width,
                           m.intervals[k].count + m.intervals[k + 1].count};
    merged.intervals.erase(merged.intervals.begin() + static_cast<std::ptrdiff_t>(k) + 1);
    const double full = oracle_cost(merged) - oracle_cost(m);
    const double scale = std::max(1.0, oracle_cost(m));
    EXPECT_NEAR(merge_delta_cost(m, k, n), full, 1e-9 * scale);
    ++checked;
  }
}

TEST(MergeDelta, TwoIntervalsToNull) {
  const HistogramModel m = model(1000, 8, {{3, 40}, {5, 7}});
  const HistogramModel null = model(1000, 8, {{8, 47}});
  EXPECT_NEAR(merge_delta_cost(m, 0, 47), genum_cost(null, 47).total - genum_cost(m, 47).total,
              1e-10);
  EXPECT_EQ(code_of([&] { merge_delta_cost(m, 1, 47); }), ErrorCode::IndexOutOfRange);
}

TEST(MergeDelta, WidthSubDeltaWithSingleton) {
  // Absorbing an empty width-1 neighbour costs h ln(1 + 1/w) in bin index.
  for (std::uint64_t w : {1ull, 10ull, 1000ull}) {
    const std::uint64_t h = 250;
    EXPECT_NEAR(width_merge_delta(h, w, 0, 1),
                static_cast<double>(h) * std::log1p(1.0 / static_cast<double>(w)), 1e-10);
  }
}

TEST(Level, Basics) {
  EXPECT_EQ(level(10.0, 10.0), 0.0);
  EXPECT_EQ(level(5.0, 10.0), 0.5);
  EXPECT_EQ(code_of([] { level(1.0, 0.0); }), ErrorCode::NonPositiveNullCost);
}

TEST(HistogramModel, BoundsPartitionDomain) {
  HistogramModel m = model(10, 4, {{1, 2}, {2, 3}, {1, 0}});
  const std::vector<double> b = m.bounds();
  ASSERT_EQ(b.size(), 4u);
  EXPECT_EQ(b.front(), m.domain_lower());
  EXPECT_EQ(b.back(), m.domain_upper());
  EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
  EXPECT_EQ(m.cuts(), (std::vector<std::uint64_t>{0, 1, 3, 4}));
}
