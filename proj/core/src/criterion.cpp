#include "genum/criterion.hpp"

#include <cmath>
#include <string>

#include "genum/error.hpp"
#include "lgamma.hpp"

namespace genum {

namespace {

constexpr double kRissanenConstant = 2.865064;

void check_model(const HistogramModel& model, std::uint64_t n) {
  if (model.intervals.empty()) {
    throw Error(ErrorCode::InvalidArguments, "cost: model has no interval");
  }
  std::uint64_t counts = 0;
  std::uint64_t widths = 0;
  for (const auto& iv : model.intervals) {
    if (iv.g_width == 0) {
      throw Error(ErrorCode::InconsistentWidths, "cost: zero-width interval");
    }
    counts += iv.count;
    widths += iv.g_width;
  }
  if (counts != n) {
    throw Error(ErrorCode::InconsistentCounts,
                "cost: interval counts sum to " + std::to_string(counts) +
                    ", expected " + std::to_string(n));
  }
  if (widths != model.G) {
    throw Error(ErrorCode::InconsistentWidths,
                "cost: interval widths sum to " + std::to_string(widths) +
                    ", expected G=" + std::to_string(model.G));
  }
}

double xlog(std::uint64_t h, std::uint64_t w) {
  return h == 0 ? 0.0 : static_cast<double>(h) * std::log(static_cast<double>(w));
}

}  // namespace

double HistogramModel::domain_lower() const noexcept {
  return origin - epsilon / 2;
}

double HistogramModel::domain_upper() const noexcept {
  return origin + (domain_width() - epsilon / 2);
}

double HistogramModel::g_bin_width() const noexcept {
  return domain_width() / static_cast<double>(G);
}

double HistogramModel::bound_at(std::uint64_t cut) const noexcept {
  if (cut == 0) return domain_lower();
  if (cut >= G) return domain_upper();
  return origin + (static_cast<double>(cut) * g_bin_width() - epsilon / 2);
}

std::vector<double> HistogramModel::bounds() const {
  std::vector<double> out;
  out.reserve(intervals.size() + 1);
  for (std::uint64_t c : cuts()) out.push_back(bound_at(c));
  return out;
}

std::vector<std::uint64_t> HistogramModel::cuts() const {
  std::vector<std::uint64_t> out;
  out.reserve(intervals.size() + 1);
  std::uint64_t c = 0;
  out.push_back(c);
  for (const auto& iv : intervals) {
    c += iv.g_width;
    out.push_back(c);
  }
  return out;
}

std::uint64_t HistogramModel::total_count() const noexcept {
  std::uint64_t s = 0;
  for (const auto& iv : intervals) s += iv.count;
  return s;
}

std::uint64_t HistogramModel::total_width() const noexcept {
  std::uint64_t s = 0;
  for (const auto& iv : intervals) s += iv.g_width;
  return s;
}

double universal_code_length(std::uint64_t k) {
  if (k == 0) {
    throw Error(ErrorCode::NonPositiveInteger, "log*: k must be >= 1");
  }
  double total = std::log(kRissanenConstant);
  double term = std::log(static_cast<double>(k));
  while (term > 0.0) {
    total += term;
    term = std::log(term);
  }
  return total;
}

namespace {

constexpr std::uint64_t kFactorialTable = 1 << 16;

const std::vector<double>& factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kFactorialTable);
    for (std::uint64_t k = 2; k < kFactorialTable; ++k) {
      t[k] = detail::lgamma_safe(static_cast<double>(k) + 1.0);
    }
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(std::uint64_t k) {
  if (k <= 1) return 0.0;
  if (k < kFactorialTable) return factorial_table()[k];
  return detail::lgamma_safe(static_cast<double>(k) + 1.0);
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) {
    throw Error(ErrorCode::InvalidArguments, "log_binomial: k > n");
  }
  if (k == 0 || k == n) return 0.0;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

CostBreakdown genum_cost(const HistogramModel& model, std::uint64_t n) {
  check_model(model, n);
  const std::uint64_t K = model.K();
  const std::uint64_t G = model.G;

  CostBreakdown c;
  c.num_intervals_prior = universal_code_length(K);
  c.granularity_prior = universal_code_length(G);
  c.boundary_prior = log_binomial(G + K - 1, K - 1);
  c.multinomial_choice = log_binomial(n + K - 1, K - 1);

  double factorial = log_factorial(n);
  double width = 0.0;
  for (const auto& iv : model.intervals) {
    factorial -= log_factorial(iv.count);
    width += xlog(iv.count, iv.g_width);
  }
  // Both quantities are mathematically >= 0; clamp the rounding residue.
  c.multinomial_factorial = factorial > 0.0 ? factorial : 0.0;
  const double ratio = static_cast<double>(model.E) / static_cast<double>(G);
  c.bin_index = width + static_cast<double>(n) * std::log(ratio);
  if (c.bin_index < 0.0) c.bin_index = 0.0;

  c.total = c.num_intervals_prior + c.granularity_prior + c.boundary_prior +
            c.multinomial_choice + c.multinomial_factorial + c.bin_index;
  return c;
}

CostBreakdown enum_cost(const HistogramModel& model, std::uint64_t n) {
  check_model(model, n);
  const std::uint64_t K = model.K();
  const std::uint64_t E = model.G;

  CostBreakdown c;
  c.num_intervals_prior = universal_code_length(K);
  c.granularity_prior = 0.0;
  c.boundary_prior = log_binomial(E + K - 1, K - 1);
  c.multinomial_choice = log_binomial(n + K - 1, K - 1);
  double factorial = log_factorial(n);
  double width = 0.0;
  for (const auto& iv : model.intervals) {
    factorial -= log_factorial(iv.count);
    width += xlog(iv.count, iv.g_width);
  }
  c.multinomial_factorial = factorial > 0.0 ? factorial : 0.0;
  c.bin_index = width;
  c.total = c.num_intervals_prior + c.granularity_prior + c.boundary_prior +
            c.multinomial_choice + c.multinomial_factorial + c.bin_index;
  return c;
}

double width_merge_delta(std::uint64_t h_a, std::uint64_t g_a,
                         std::uint64_t h_b, std::uint64_t g_b) {
  // (h_a + h_b) ln(g_a + g_b) - h_a ln g_a - h_b ln g_b, written with log1p
  // so that tiny relative width changes are not lost to cancellation.
  const double ga = static_cast<double>(g_a);
  const double gb = static_cast<double>(g_b);
  double d = 0.0;
  if (h_a != 0) d += static_cast<double>(h_a) * std::log1p(gb / ga);
  if (h_b != 0) d += static_cast<double>(h_b) * std::log1p(ga / gb);
  return d;
}

double merge_local_delta(std::uint64_t h_a, std::uint64_t g_a,
                         std::uint64_t h_b, std::uint64_t g_b) {
  return width_merge_delta(h_a, g_a, h_b, g_b) - log_binomial(h_a + h_b, h_a);
}

double interval_count_delta(std::uint64_t K, std::uint64_t G, std::uint64_t n) {
  if (K < 2) {
    throw Error(ErrorCode::InvalidArguments, "interval_count_delta: K < 2");
  }
  // C(M+K-1, K-1) / C(M+K-2, K-2) = (M+K-1) / (K-1) for both binomials.
  const double k1 = static_cast<double>(K - 1);
  return (universal_code_length(K - 1) - universal_code_length(K)) -
         std::log1p(static_cast<double>(G) / k1) -
         std::log1p(static_cast<double>(n) / k1);
}

double merge_delta_cost(const HistogramModel& model, std::size_t k,
                        std::uint64_t n) {
  if (k + 1 >= model.K()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "merge_delta_cost: interval index out of range");
  }
  const auto& a = model.intervals[k];
  const auto& b = model.intervals[k + 1];
  return merge_local_delta(a.count, a.g_width, b.count, b.g_width) +
         interval_count_delta(model.K(), model.G, n);
}

double level(double model_cost, double null_cost) {
  if (!(null_cost > 0.0)) {
    throw Error(ErrorCode::NonPositiveNullCost, "level: null cost must be > 0");
  }
  return 1.0 - model_cost / null_cost;
}

}  // namespace genum
