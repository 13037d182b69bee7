#include "genum/twolevel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "genum/conditioning.hpp"
#include "genum/error.hpp"

namespace genum {

const char* to_string(SubsetOrigin origin) {
  switch (origin) {
    case SubsetOrigin::LogInterval: return "log-interval";
    case SubsetOrigin::Merged: return "merged";
    case SubsetOrigin::Split: return "split";
  }
  return "unknown";
}

double predicted_first_bin_count(double a, double b, double n_i, std::uint64_t k,
                                 std::uint64_t t_E) {
  const double log_ratio = (std::log(b) - std::log(a)) / static_cast<double>(k);
  return (n_i / static_cast<double>(k)) *
         std::log1p(std::expm1(log_ratio) / static_cast<double>(t_E)) / log_ratio;
}

namespace {

// Negative when k pieces are predicted PWCH. Convex in ln k: the prediction
// term is convex in ln k and ln(n_i / k) is linear in it.
double split_margin(double a, double b, std::uint64_t n_i, std::uint64_t k,
                    std::uint64_t t_E) {
  const double ni = static_cast<double>(n_i);
  return predicted_first_bin_count(a, b, ni, k, t_E) -
         std::log(ni / static_cast<double>(k));
}

}  // namespace

std::uint64_t split_piece_count(double a, double b, std::uint64_t n_i,
                                std::uint64_t t_E) {
  if (!(0.0 < a && a < b) || n_i < 2 || t_E == 0) {
    throw Error(ErrorCode::InvalidArguments, "split_piece_count: requires 0 < a < b, n_i >= 2");
  }
  auto f = [&](std::uint64_t k) { return split_margin(a, b, n_i, k, t_E); };

  // Minimizer of the margin: first k whose forward difference is >= 0.
  std::uint64_t lo = 2;
  std::uint64_t hi = n_i;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (f(mid + 1) >= f(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const std::uint64_t k_star = lo;
  if (!(f(k_star) < 0.0)) return k_star;

  // The margin decreases on [2, k_star]: smallest k with a negative margin.
  lo = 2;
  hi = k_star;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (f(mid) < 0.0) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

namespace {

DataSet concat(const DataSet& a, const DataSet& b) {
  std::vector<Entry> es = a.entries();
  es.insert(es.end(), b.entries().begin(), b.entries().end());
  return DataSet::from_entries(std::move(es));
}

// Interval index (into the model's intervals) of every entry of d.
std::vector<std::size_t> assign_intervals(const DataSet& d, const HistogramModel& m) {
  const std::vector<std::uint64_t> cuts = m.cuts();
  std::vector<std::size_t> out;
  out.reserve(d.distinct_count());
  for (const Entry& e : d.entries()) {
    const std::uint64_t g = bin_index(e.value, m.origin, m.range, m.epsilon, m.G);
    const auto it = std::upper_bound(cuts.begin(), cuts.end(), g);
    out.push_back(static_cast<std::size_t>(it - cuts.begin()) - 1);
  }
  return out;
}

}  // namespace

SubsetPartition first_level_partition(const DataSet& d, const BuildOptions& opts) {
  SubsetPartition p;
  auto [logd, mapping] = log_dataset_cr(d);
  p.mapping = mapping;

  BuildOptions lo;
  lo.e_max = opts.e_max;
  lo.early_stop = true;
  StandardResult r;
  try {
    r = build_standard(logd, lo);
  } catch (const Error& e) {
    throw Error(ErrorCode::PropagatedBuildError,
                std::string("first level: ") + e.what());
  }

  const HistogramModel& m = r.model;
  const std::vector<std::uint64_t> cuts = m.cuts();
  const auto& es = d.entries();
  std::size_t begin = 0;
  std::size_t current = 0;
  for (std::size_t i = 0; i <= es.size(); ++i) {
    std::size_t k = current;
    if (i < es.size()) {
      const double y = mapping.forward(es[i].value);
      const std::uint64_t g = bin_index(y, m.origin, m.range, m.epsilon, m.G);
      k = static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), g) -
                                   cuts.begin()) - 1;
    }
    if (i == 0) {
      current = k;
      continue;
    }
    if (i == es.size() || k != current) {
      Subset s{d.subrange(begin, i), true, SubsetOrigin::LogInterval, begin};
      s.pwch = !is_pich(s.data, opts.e_max);
      p.subsets.push_back(std::move(s));
      begin = i;
      current = k;
    }
  }
  return p;
}

SubsetPartition merge_adjacent_pwch(SubsetPartition p, std::uint64_t e_max) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::size_t i = 0;
    while (i + 1 < p.subsets.size()) {
      DataSet u = concat(p.subsets[i].data, p.subsets[i + 1].data);
      if (!is_pich(u, e_max)) {
        p.subsets[i].data = std::move(u);
        p.subsets[i].pwch = true;
        p.subsets[i].origin = SubsetOrigin::Merged;
        p.subsets.erase(p.subsets.begin() + static_cast<std::ptrdiff_t>(i + 1));
        changed = true;
      } else {
        ++i;
      }
    }
  }
  return p;
}

std::pair<SplitPlan, std::vector<DataSet>> split_pich_subset(const DataSet& s,
                                                            std::uint64_t e_max) {
  if (s.distinct_count() < 2) {
    throw Error(ErrorCode::UnsplittableDegenerate, "split: single distinct value");
  }
  const bool positive = s.min_value() > 0.0;
  const bool negative = s.max_value() < 0.0;
  if (!positive && !negative) {
    throw Error(ErrorCode::InvalidArguments,
                "split: subset must lie strictly on one side of zero");
  }
  if (!is_pich(s, e_max)) {
    throw Error(ErrorCode::NotPich, "split: subset is not PICH");
  }
  const double a = positive ? s.min_value() : -s.max_value();
  const double b = positive ? s.max_value() : -s.min_value();
  const std::uint64_t t_E = pich_bins(e_max);

  SplitPlan plan;
  plan.k = split_piece_count(a, b, s.n(), t_E);
  plan.n_ik = static_cast<double>(s.n()) / static_cast<double>(plan.k);
  plan.n_eps = predicted_first_bin_count(a, b, static_cast<double>(s.n()), plan.k, t_E);

  // Magnitude cuts a = m_0 < m_1 < ... < m_k = b.
  std::vector<double> mags(plan.k + 1);
  const double log_ratio = std::log(b / a);
  mags.front() = a;
  for (std::uint64_t j = 1; j < plan.k; ++j) {
    mags[j] = a * std::exp(log_ratio * static_cast<double>(j) /
                           static_cast<double>(plan.k));
  }
  mags.back() = b;

  // Piece j holds magnitudes in (m_{j-1}, m_j], the first one closed at a.
  std::vector<std::vector<Entry>> pieces(plan.k);
  for (const Entry& e : s.entries()) {
    const double mag = std::fabs(e.value);
    auto it = std::lower_bound(mags.begin() + 1, mags.end(), mag);
    std::size_t j = static_cast<std::size_t>(it - (mags.begin() + 1));
    if (j >= plan.k) j = plan.k - 1;
    pieces[j].push_back(e);
  }

  std::vector<DataSet> out;
  if (positive) {
    plan.cut_points = mags;
    for (auto& p : pieces) {
      if (!p.empty()) out.push_back(DataSet::from_entries(std::move(p)));
    }
  } else {
    plan.cut_points.assign(mags.size(), 0.0);
    std::transform(mags.rbegin(), mags.rend(), plan.cut_points.begin(),
                   [](double m) { return -m; });
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
      if (!it->empty()) out.push_back(DataSet::from_entries(std::move(*it)));
    }
  }
  return {std::move(plan), std::move(out)};
}

double Grid::line(double cut) const {
  return origin + (cut * ((range + epsilon) / static_cast<double>(G)) - epsilon / 2);
}

Grid Grid::of(const HistogramModel& m) {
  return {m.origin, m.range, m.epsilon, m.G};
}

namespace {

// Bound strictly above `prev` and at most `next`. Starts from `target` (or
// the gap midpoint when `target` is not a valid separator) and moves it onto
// the nearest line of `grid` that still separates the two values.
double place_bound(double target, double prev, double next, const Grid& grid) {
  double b = target;
  if (!(prev < b && b <= next)) {
    b = prev + (next - prev) / 2;
    if (!(prev < b && b <= next)) b = next;
  }
  const double step = (grid.range + grid.epsilon) / static_cast<double>(grid.G);
  const double c0 = std::round((b - grid.origin + grid.epsilon / 2) / step);
  double best = b;
  double best_dist = std::numeric_limits<double>::infinity();
  for (double c : {c0 - 1, c0, c0 + 1}) {
    const double line = grid.line(c);
    if (prev < line && line <= next && std::fabs(line - b) < best_dist) {
      best = line;
      best_dist = std::fabs(line - b);
    }
  }
  return best;
}

std::uint64_t frequency_sum(const DataSet& d, std::size_t begin, std::size_t end) {
  std::uint64_t s = 0;
  for (std::size_t i = begin; i < end; ++i) s += d.entries()[i].frequency;
  return s;
}

}  // namespace

std::vector<BoundaryPiece> build_boundary(const DataSet& d, const BoundaryInput& in,
                                          const BuildOptions& opts) {
  if (!(in.begin < in.split && in.split < in.end && in.end <= d.distinct_count())) {
    throw Error(ErrorCode::InvalidArguments, "build_boundary: empty side");
  }
  const DataSet u = d.subrange(in.begin, in.end);
  StandardResult r;
  try {
    r = build_standard(u, opts);
  } catch (const Error& e) {
    throw Error(ErrorCode::PropagatedBuildError, std::string("boundary: ") + e.what());
  }
  const std::vector<std::size_t> which = assign_intervals(u, r.model);
  const std::vector<double> bounds = r.model.bounds();
  const auto& es = d.entries();
  const std::size_t last_left = in.split - 1 - in.begin;
  const std::size_t first_right = in.split - in.begin;
  const std::size_t kL = which[last_left];
  const std::size_t kR = which[first_right];
  const double max_left = es[in.split - 1].value;
  const double min_right = es[in.split].value;

  auto piece = [&](double lo, double hi, std::size_t b, std::size_t e, bool boundary,
                   std::size_t subset) {
    BoundaryPiece p;
    p.interval.lower = lo;
    p.interval.upper = hi;
    p.interval.count = frequency_sum(d, b, e);
    p.interval.boundary = boundary;
    p.interval.subset_index = subset;
    p.begin = b;
    p.end = e;
    return p;
  };

  std::vector<BoundaryPiece> out;
  if (kL == kR) {
    // The gap sits inside one interval J of the boundary histogram.
    std::size_t jb = first_right;
    while (jb > 0 && which[jb - 1] == kL) --jb;
    std::size_t je = last_left + 1;
    while (je < which.size() && which[je] == kL) ++je;
    jb += in.begin;
    je += in.begin;
    double lo = in.lower;
    double hi = in.upper;
    if (jb > in.begin) {
      lo = place_bound(bounds[kL], es[jb - 1].value, es[jb].value, in.left_grid);
      out.push_back(piece(in.lower, lo, in.begin, jb, false, in.left_subset));
    }
    if (je < in.end) {
      hi = place_bound(bounds[kL + 1], es[je - 1].value, es[je].value, in.right_grid);
    }
    out.push_back(piece(lo, hi, jb, je, true, in.left_subset));
    if (je < in.end) {
      out.push_back(piece(hi, in.upper, je, in.end, false, in.left_subset + 1));
    }
  } else if (kR == kL + 1) {
    double c = bounds[kR];
    if (!(max_left < c && c <= min_right)) c = max_left + (min_right - max_left) / 2;
    if (!(max_left < c && c <= min_right)) c = min_right;
    out.push_back(piece(in.lower, c, in.begin, in.split, true, in.left_subset));
    out.push_back(piece(c, in.upper, in.split, in.end, true, in.left_subset + 1));
  } else {
    // Empty intervals of the boundary histogram cover the gap.
    double lo = place_bound(bounds[kL + 1], max_left, min_right, in.left_grid);
    double hi = place_bound(bounds[kR], lo, min_right, in.right_grid);
    if (!(lo < hi)) {
      lo = bounds[kL + 1];
      hi = bounds[kR];
    }
    if (!(max_left < lo && lo < hi && hi <= min_right)) {
      throw Error(ErrorCode::PropagatedBuildError, "boundary: gap bounds out of order");
    }
    out.push_back(piece(in.lower, lo, in.begin, in.split, false, in.left_subset));
    out.push_back(piece(lo, hi, in.split, in.split, true, in.left_subset));
    out.push_back(piece(hi, in.upper, in.split, in.end, false, in.left_subset + 1));
  }
  return out;
}

namespace {

void fill_density(GlobalHistogram& h) {
  const double n = static_cast<double>(h.n);
  for (auto& iv : h.intervals) {
    iv.density = static_cast<double>(iv.count) / (n * (iv.upper - iv.lower));
  }
}

}  // namespace

GlobalHistogram wrap_standard(const DataSet& d, const StandardResult& r) {
  GlobalHistogram h;
  h.n = d.n();
  h.subset_count = 1;
  h.two_level_triggered = false;
  h.per_subset_granularity = {{r.chosen_G, r.model.E}};
  h.total_cost_per_subset = {r.cost.total};
  const std::vector<double> bounds = r.model.bounds();
  for (std::size_t k = 0; k < r.model.K(); ++k) {
    h.intervals.push_back({bounds[k], bounds[k + 1], r.model.intervals[k].count, 0.0,
                           false, 0});
  }
  fill_density(h);
  return h;
}

GlobalHistogram assemble(const DataSet& d, const SubsetPartition& partition,
                         const std::vector<StandardResult>& results,
                         const BuildOptions& opts) {
  const std::size_t S = partition.subsets.size();
  if (S == 0 || results.size() != S) {
    throw Error(ErrorCode::InvalidArguments, "assemble: one result per subset required");
  }
  GlobalHistogram h;
  h.n = d.n();
  h.subset_count = S;
  h.two_level_triggered = true;

  std::vector<BoundaryPiece> work;
  std::vector<Grid> grids;
  for (std::size_t s = 0; s < S; ++s) {
    const Subset& sub = partition.subsets[s];
    const StandardResult& r = results[s];
    h.per_subset_granularity.emplace_back(r.chosen_G, r.model.E);
    h.total_cost_per_subset.push_back(r.cost.total);
    grids.push_back(Grid::of(r.model));

    const std::vector<std::size_t> which = assign_intervals(sub.data, r.model);
    const std::vector<double> bounds = r.model.bounds();
    std::size_t e = 0;
    for (std::size_t k = 0; k < r.model.K(); ++k) {
      const std::size_t b = e;
      while (e < which.size() && which[e] == k) ++e;
      BoundaryPiece p;
      p.interval.lower = bounds[k];
      p.interval.upper = bounds[k + 1];
      p.interval.count = r.model.intervals[k].count;
      p.interval.subset_index = s;
      p.begin = sub.first + b;
      p.end = sub.first + e;
      work.push_back(p);
    }
  }

  for (std::size_t s = 0; s + 1 < S; ++s) {
    const std::size_t split = partition.subsets[s + 1].first;
    std::size_t li = 0;
    while (li < work.size() && !(work[li].begin < split && work[li].end == split)) ++li;
    if (li + 1 >= work.size() || work[li + 1].begin != split ||
        work[li + 1].end == split) {
      throw Error(ErrorCode::PropagatedBuildError,
                  "assemble: adjacent subsets do not meet at one interval pair");
    }
    BoundaryInput in;
    in.lower = work[li].interval.lower;
    in.upper = work[li + 1].interval.upper;
    in.begin = work[li].begin;
    in.split = split;
    in.end = work[li + 1].end;
    in.left_grid = grids[s];
    in.right_grid = grids[s + 1];
    in.left_subset = s;
    std::vector<BoundaryPiece> pieces = build_boundary(d, in, opts);
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(li),
               work.begin() + static_cast<std::ptrdiff_t>(li + 2));
    work.insert(work.begin() + static_cast<std::ptrdiff_t>(li), pieces.begin(),
                pieces.end());
  }

  h.intervals.reserve(work.size());
  for (const BoundaryPiece& p : work) h.intervals.push_back(p.interval);
  fill_density(h);
  return h;
}

namespace {

// Cuts a subset at zero into its negative, zero and positive runs.
std::vector<Subset> sign_parts(const Subset& s) {
  const auto& es = s.data.entries();
  std::vector<Subset> out;
  std::size_t begin = 0;
  auto sign = [](double v) { return v < 0.0 ? -1 : (v > 0.0 ? 1 : 0); };
  for (std::size_t i = 1; i <= es.size(); ++i) {
    if (i == es.size() || sign(es[i].value) != sign(es[begin].value)) {
      out.push_back({s.data.subrange(begin, i), true, SubsetOrigin::Split, s.first + begin});
      begin = i;
    }
  }
  return out;
}

}  // namespace

GlobalHistogram build_two_level(const DataSet& d, const BuildOptions& opts) {
  if (d.n() == 0) {
    throw Error(ErrorCode::EmptyInput, "build_two_level: empty dataset");
  }
  if (!is_pich(d, opts.e_max)) return wrap_standard(d, build_standard(d, opts));

  SubsetPartition p = merge_adjacent_pwch(first_level_partition(d, opts), opts.e_max);

  SubsetPartition final_p;
  final_p.mapping = p.mapping;
  for (const Subset& s : p.subsets) {
    if (s.pwch) {
      final_p.subsets.push_back(s);
      continue;
    }
    const bool one_sign = s.data.min_value() > 0.0 || s.data.max_value() < 0.0;
    std::vector<Subset> parts = one_sign ? std::vector<Subset>{s} : sign_parts(s);
    for (Subset& part : parts) {
      if (part.data.distinct_count() < 2 || !is_pich(part.data, opts.e_max)) {
        part.pwch = !is_pich(part.data, opts.e_max);
        final_p.subsets.push_back(std::move(part));
        continue;
      }
      auto [plan, pieces] = split_pich_subset(part.data, opts.e_max);
      std::size_t first = part.first;
      for (DataSet& piece : pieces) {
        Subset sub{std::move(piece), true, SubsetOrigin::Split, first};
        sub.pwch = !is_pich(sub.data, opts.e_max);
        first += sub.data.distinct_count();
        final_p.subsets.push_back(std::move(sub));
      }
    }
  }

  std::vector<StandardResult> results;
  results.reserve(final_p.subsets.size());
  for (const Subset& s : final_p.subsets) {
    try {
      results.push_back(build_standard(s.data, opts));
    } catch (const Error& e) {
      throw Error(ErrorCode::PropagatedBuildError, std::string("second level: ") + e.what());
    }
  }
  return assemble(d, final_p, results, opts);
}

}  // namespace genum
