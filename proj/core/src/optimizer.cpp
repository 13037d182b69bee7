#include "genum/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "genum/conditioning.hpp"
#include "genum/error.hpp"

namespace genum {

double degenerate_epsilon(double value) noexcept {
  return std::max(std::fabs(value) * 0x1p-20, std::numeric_limits<double>::min());
}

std::uint64_t bin_index(double x, double origin, double range, double epsilon,
                        std::uint64_t G) noexcept {
  // Everything is measured from the origin so that exact scalings and
  // translations of the data leave the assignment unchanged.
  const double offset = (x - origin) + epsilon / 2;
  const double pos = static_cast<double>(G) * offset / (range + epsilon);
  if (!(pos > 0.0)) return 0;
  const double idx = std::floor(pos);
  if (idx >= static_cast<double>(G - 1)) return G - 1;
  return static_cast<std::uint64_t>(idx);
}

std::vector<std::uint64_t> Granularization::dense_counts() const {
  std::vector<std::uint64_t> out(G, 0);
  for (const GBin& b : bins) out[b.index] = b.count;
  return out;
}

std::vector<bool> Granularization::dense_multiple_distinct() const {
  std::vector<bool> out(G, false);
  for (const GBin& b : bins) out[b.index] = b.multiple_distinct;
  return out;
}

HistogramModel Granularization::model_shell() const {
  HistogramModel m;
  m.E = E;
  m.G = G;
  m.origin = origin;
  m.range = range;
  m.epsilon = epsilon;
  return m;
}

Granularization granularize(const DataSet& d, std::uint64_t G, std::uint64_t E) {
  if (G == 0 || E == 0) {
    throw Error(ErrorCode::InvalidArguments, "granularize: G and E must be >= 1");
  }
  const double range = d.range();
  if (!std::isfinite(range)) {
    throw Error(ErrorCode::InvalidRange, "granularize: range overflows");
  }
  if (range == 0.0 && G > 1) {
    throw Error(ErrorCode::DegenerateDomain,
                "granularize: single distinct value requires G = 1");
  }
  Granularization gr;
  gr.E = E;
  gr.G = G;
  gr.n = d.n();
  gr.origin = d.min_value();
  gr.range = range;
  gr.epsilon = range > 0.0 ? range / static_cast<double>(E)
                           : degenerate_epsilon(d.min_value());

  for (const Entry& e : d.entries()) {
    const std::uint64_t idx = bin_index(e.value, gr.origin, gr.range, gr.epsilon, G);
    if (!gr.bins.empty() && gr.bins.back().index == idx) {
      gr.bins.back().count += e.frequency;
      gr.bins.back().multiple_distinct = true;
    } else {
      gr.bins.push_back({idx, e.frequency, false});
    }
  }
  return gr;
}

namespace {

std::vector<IntervalSpec> finest_intervals(const Granularization& gr) {
  std::vector<IntervalSpec> out;
  out.reserve(2 * gr.bins.size() + 1);
  std::uint64_t pos = 0;
  for (const GBin& b : gr.bins) {
    if (b.index > pos) out.push_back({b.index - pos, 0});
    out.push_back({1, b.count});
    pos = b.index + 1;
  }
  if (pos < gr.G) out.push_back({gr.G - pos, 0});
  return out;
}

struct HeapItem {
  double delta;
  std::uint64_t start;
  std::uint32_t left;
  std::uint32_t version;
};

struct HeapOrder {
  bool operator()(const HeapItem& a, const HeapItem& b) const noexcept {
    if (a.delta != b.delta) return a.delta > b.delta;
    return a.start > b.start;
  }
};

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

}  // namespace

HistogramModel greedy_build(const Granularization& gr) {
  HistogramModel model = gr.model_shell();
  std::vector<IntervalSpec> nodes = finest_intervals(gr);
  const std::size_t m = nodes.size();
  if (m >= kNone) {
    throw Error(ErrorCode::InvalidArguments, "greedy_build: too many intervals");
  }
  if (m == 1) {
    model.intervals = std::move(nodes);
    return model;
  }

  std::vector<std::uint32_t> next(m), prev(m), version(m, 0);
  std::vector<std::uint64_t> start(m);
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < m; ++i) {
    next[i] = i + 1 < m ? static_cast<std::uint32_t>(i + 1) : kNone;
    prev[i] = i > 0 ? static_cast<std::uint32_t>(i - 1) : kNone;
    start[i] = pos;
    pos += nodes[i].g_width;
  }

  std::vector<HeapItem> storage;
  storage.reserve(m);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const auto& a = nodes[i];
    const auto& b = nodes[i + 1];
    storage.push_back({merge_local_delta(a.count, a.g_width, b.count, b.g_width),
                       start[i], static_cast<std::uint32_t>(i), 0});
  }
  std::priority_queue<HeapItem, std::vector<HeapItem>, HeapOrder> heap(
      HeapOrder{}, std::move(storage));

  // Each heap item is keyed by (left node, version of left node). The version
  // of a node is bumped whenever it or its right neighbour changes.
  model.intervals = nodes;
  double cost = genum_cost(model, gr.n).total;
  double best_cost = cost;
  std::size_t best_step = 0;
  std::vector<std::uint32_t> merges;
  merges.reserve(m - 1);

  std::uint64_t K = m;
  auto push = [&](std::uint32_t left) {
    const std::uint32_t right = next[left];
    if (right == kNone) return;
    const auto& a = nodes[left];
    const auto& b = nodes[right];
    heap.push({merge_local_delta(a.count, a.g_width, b.count, b.g_width),
               start[left], left, version[left]});
  };

  while (K > 1 && !heap.empty()) {
    const HeapItem top = heap.top();
    heap.pop();
    if (top.version != version[top.left] || next[top.left] == kNone) continue;
    const std::uint32_t a = top.left;
    const std::uint32_t b = next[a];

    cost += top.delta + interval_count_delta(K, gr.G, gr.n);
    --K;
    nodes[a].g_width += nodes[b].g_width;
    nodes[a].count += nodes[b].count;
    next[a] = next[b];
    if (next[b] != kNone) prev[next[b]] = a;
    ++version[a];
    version[b] = kNone;
    merges.push_back(a);
    if (cost < best_cost) {
      best_cost = cost;
      best_step = merges.size();
    }
    push(a);
    if (prev[a] != kNone) {
      ++version[prev[a]];
      push(prev[a]);
    }
  }

  // Replay the best prefix of the merge sequence on the finest model.
  nodes = finest_intervals(gr);
  for (std::size_t i = 0; i < m; ++i) {
    next[i] = i + 1 < m ? static_cast<std::uint32_t>(i + 1) : kNone;
  }
  for (std::size_t s = 0; s < best_step; ++s) {
    const std::uint32_t a = merges[s];
    const std::uint32_t b = next[a];
    nodes[a].g_width += nodes[b].g_width;
    nodes[a].count += nodes[b].count;
    next[a] = next[b];
  }
  model.intervals.clear();
  for (std::uint32_t i = 0; i != kNone; i = next[i]) {
    model.intervals.push_back(nodes[i]);
  }
  return model;
}

namespace {

// Working state of the hill climber. Cuts live on a compressed axis of
// candidate g-bin positions: the two edges of every nonempty g-bin, plus the
// domain ends and the cuts of the input model. Inside a run of empty g-bins
// the cost is concave in a cut's position, so an optimal cut always sits at
// one end of the run.
class Climber {
 public:
  Climber(const HistogramModel& model, const Granularization& gr)
      : G_(gr.G), n_(gr.n) {
    std::vector<std::uint64_t> pos;
    pos.reserve(2 * gr.bins.size() + model.K() + 2);
    for (const GBin& b : gr.bins) {
      pos.push_back(b.index);
      pos.push_back(b.index + 1);
    }
    for (std::uint64_t c : model.cuts()) pos.push_back(c);
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    positions_ = std::move(pos);

    prefix_.resize(positions_.size());
    std::size_t bi = 0;
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < positions_.size(); ++j) {
      while (bi < gr.bins.size() && gr.bins[bi].index < positions_[j]) {
        acc += gr.bins[bi].count;
        ++bi;
      }
      prefix_[j] = acc;
    }

    for (std::uint64_t c : model.cuts()) {
      cuts_.push_back(static_cast<std::size_t>(
          std::lower_bound(positions_.begin(), positions_.end(), c) -
          positions_.begin()));
    }
  }

  bool sweep() {
    bool changed = false;
    changed |= moves();
    changed |= removals();
    changed |= insertions();
    if (!changed) changed |= regroupings();
    return changed;
  }

  std::vector<IntervalSpec> intervals() const {
    std::vector<IntervalSpec> out;
    out.reserve(cuts_.size() - 1);
    for (std::size_t i = 0; i + 1 < cuts_.size(); ++i) {
      out.push_back({positions_[cuts_[i + 1]] - positions_[cuts_[i]],
                     prefix_[cuts_[i + 1]] - prefix_[cuts_[i]]});
    }
    return out;
  }

 private:
  double phi(std::size_t lo, std::size_t hi) const {
    const std::uint64_t h = prefix_[hi] - prefix_[lo];
    if (h == 0) return 0.0;
    const double w = static_cast<double>(positions_[hi] - positions_[lo]);
    return static_cast<double>(h) * std::log(w) - log_factorial(h);
  }

  double prior(std::uint64_t K) const {
    return universal_code_length(K) + log_binomial(G_ + K - 1, K - 1) +
           log_binomial(n_ + K - 1, K - 1);
  }

  static double tol(double scale) { return 1e-11 * std::max(1.0, std::fabs(scale)); }

  bool moves() {
    bool changed = false;
    for (std::size_t i = 1; i + 1 < cuts_.size(); ++i) {
      const std::size_t l = cuts_[i - 1];
      const std::size_t r = cuts_[i + 1];
      const double current = phi(l, cuts_[i]) + phi(cuts_[i], r);
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_j = cuts_[i];
      for (std::size_t j = l + 1; j < r; ++j) {
        const double c = phi(l, j) + phi(j, r);
        if (c < best) {
          best = c;
          best_j = j;
        }
      }
      if (best_j != cuts_[i] && best < current - tol(current)) {
        cuts_[i] = best_j;
        changed = true;
      }
    }
    return changed;
  }

  // Best single cut strictly inside (l, r), as (cost of both sides, position).
  std::pair<double, std::size_t> best_cut(std::size_t l, std::size_t r) const {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = l;
    for (std::size_t j = l + 1; j < r; ++j) {
      const double c = phi(l, j) + phi(j, r);
      if (c < best) {
        best = c;
        best_j = j;
      }
    }
    return {best, best_j};
  }

  // Replaces w consecutive inner cuts (w = 1..kCollapseSpan) by no cut or by
  // one well-placed cut over the union of their intervals.
  bool removals() {
    bool changed = false;
    std::size_t i = 1;
    while (i + 1 < cuts_.size()) {
      const std::uint64_t K = cuts_.size() - 1;
      const std::size_t l = cuts_[i - 1];
      double best_gain = 0.0;
      std::size_t best_w = 0;
      std::size_t best_j = 0;
      double parts = phi(l, cuts_[i]);
      for (std::size_t w = 1; w <= kCollapseSpan && i + w < cuts_.size(); ++w) {
        const std::size_t r = cuts_[i + w];
        parts += phi(cuts_[i + w - 1], r);
        const double before = parts + prior(K);
        const double none = phi(l, r) + prior(K - w);
        if (before - none > best_gain + tol(before)) {
          best_gain = before - none;
          best_w = w;
          best_j = 0;
        }
        if (w >= 2) {
          const auto [c, j] = best_cut(l, r);
          const double one = c + prior(K - w + 1);
          if (before - one > best_gain + tol(before)) {
            best_gain = before - one;
            best_w = w;
            best_j = j;
          }
        }
      }
      if (best_w == 0) {
        ++i;
        continue;
      }
      const auto first = cuts_.begin() + static_cast<std::ptrdiff_t>(i);
      cuts_.erase(first, first + static_cast<std::ptrdiff_t>(best_w));
      if (best_j != 0) {
        cuts_.insert(cuts_.begin() + static_cast<std::ptrdiff_t>(i), best_j);
        ++i;
      }
      changed = true;
    }
    return changed;
  }

  bool insertions() {
    bool changed = false;
    std::size_t i = 0;
    while (i + 1 < cuts_.size()) {
      const std::size_t l = cuts_[i];
      const std::size_t r = cuts_[i + 1];
      if (r - l < 2) {
        ++i;
        continue;
      }
      const std::uint64_t K = cuts_.size() - 1;
      const double whole = phi(l, r);
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_j = 0;
      for (std::size_t j = l + 1; j < r; ++j) {
        const double c = phi(l, j) + phi(j, r);
        if (c < best) {
          best = c;
          best_j = j;
        }
      }
      const double before = whole + prior(K);
      const double after = best + prior(K + 1);
      if (after < before - tol(before)) {
        cuts_.insert(cuts_.begin() + static_cast<std::ptrdiff_t>(i + 1), best_j);
        changed = true;
        i += 2;
        continue;
      }
      ++i;
    }
    return changed;
  }

  // Best two cuts strictly inside (l, r).
  std::tuple<double, std::size_t, std::size_t> best_pair(std::size_t l, std::size_t r) const {
    double best = std::numeric_limits<double>::infinity();
    std::size_t b1 = l;
    std::size_t b2 = l;
    for (std::size_t j1 = l + 1; j1 + 1 < r; ++j1) {
      const double left = phi(l, j1);
      for (std::size_t j2 = j1 + 1; j2 < r; ++j2) {
        const double c = left + phi(j1, j2) + phi(j2, r);
        if (c < best) {
          best = c;
          b1 = j1;
          b2 = j2;
        }
      }
    }
    return {best, b1, b2};
  }

  // Inserts two cuts into one interval, or replaces the cut between two
  // adjacent intervals by two. Quadratic in the window, so only tried on short
  // windows and once the linear neighbourhoods are exhausted.
  bool regroupings() {
    bool changed = false;
    for (std::size_t i = 0; i + 1 < cuts_.size(); ++i) {
      const std::size_t l = cuts_[i];
      const std::size_t r = cuts_[i + 1];
      if (r - l < 3 || r - l > kRegroupWindow) continue;
      const std::uint64_t K = cuts_.size() - 1;
      const double before = phi(l, r) + prior(K);
      const auto [pair, j1, j2] = best_pair(l, r);
      if (pair + prior(K + 2) < before - tol(before)) {
        cuts_.insert(cuts_.begin() + static_cast<std::ptrdiff_t>(i + 1), {j1, j2});
        changed = true;
        i += 2;
      }
    }
    for (std::size_t i = 1; i + 1 < cuts_.size(); ++i) {
      const std::size_t l = cuts_[i - 1];
      const std::size_t r = cuts_[i + 1];
      if (r - l < 3 || r - l > kRegroupWindow) continue;
      const std::uint64_t K = cuts_.size() - 1;
      const double before = phi(l, cuts_[i]) + phi(cuts_[i], r) + prior(K);
      const auto [best, b1, b2] = best_pair(l, r);
      const double after = best + prior(K + 1);
      if (after < before - tol(before)) {
        cuts_[i] = b1;
        cuts_.insert(cuts_.begin() + static_cast<std::ptrdiff_t>(i + 1), b2);
        changed = true;
        ++i;
      }
    }
    return changed;
  }

  static constexpr std::size_t kRegroupWindow = 256;
  static constexpr std::size_t kCollapseSpan = 3;

  std::uint64_t G_;
  std::uint64_t n_;
  std::vector<std::uint64_t> positions_;
  std::vector<std::uint64_t> prefix_;
  std::vector<std::size_t> cuts_;
};

constexpr int kMaxSweeps = 20;

}  // namespace

HistogramModel post_optimize(const HistogramModel& model,
                             const Granularization& gr) {
  if (model.G != gr.G || model.total_width() != gr.G ||
      model.total_count() != gr.n) {
    throw Error(ErrorCode::InvalidArguments,
                "post_optimize: model does not match the granularization");
  }
  Climber climber(model, gr);
  for (int s = 0; s < kMaxSweeps; ++s) {
    if (!climber.sweep()) break;
  }
  HistogramModel out = model;
  out.intervals = climber.intervals();
  return out;
}

std::vector<std::uint64_t> granularity_schedule(std::uint64_t E) {
  const std::uint64_t cap = std::min(kMaxGranularity, E);
  std::vector<std::uint64_t> out;
  for (std::uint64_t G = 1; G < cap; G *= 2) out.push_back(G);
  out.push_back(cap);
  return out;
}

StandardResult build_standard(const DataSet& d, const BuildOptions& opts) {
  if (d.n() == 0) {
    throw Error(ErrorCode::EmptyInput, "build_standard: empty dataset");
  }
  if (opts.e_max == 0 || (opts.force_E && *opts.force_E == 0)) {
    throw Error(ErrorCode::InvalidArguments, "build_standard: E must be >= 1");
  }
  const std::uint64_t n = d.n();
  StandardResult res;

  std::uint64_t E = 1;
  if (opts.force_E) {
    E = *opts.force_E;
    res.at_mantissa_limit = false;
  } else {
    const auto eff = effective_epsilon_bins(d, opts.e_max);
    E = eff.E;
    res.at_mantissa_limit = eff.at_mantissa_limit;
  }
  if (d.distinct_count() == 1) E = opts.force_E ? E : 1;

  {
    HistogramModel null_model;
    null_model.E = E;
    null_model.intervals = {{1, n}};
    res.null_cost = genum_cost(null_model, n).total;
  }

  const std::vector<std::uint64_t> schedule =
      d.distinct_count() == 1 ? std::vector<std::uint64_t>{1} : granularity_schedule(E);
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  int misses = 0;
  bool have = false;
  for (std::uint64_t G : schedule) {
    const Granularization gr = granularize(d, G, E);
    HistogramModel m = post_optimize(greedy_build(gr), gr);
    CostBreakdown c = genum_cost(m, n);
    if (!have || c.total < res.cost.total) {
      res.model = std::move(m);
      res.cost = c;
      res.chosen_G = G;
      have = true;
      misses = 0;
    } else {
      ++misses;
    }
    if (opts.early_stop && static_cast<double>(G) > sqrt_n && misses >= 3) break;
  }
  return res;
}

}  // namespace genum
