#include "serialize.hpp"

#include "genum/error.hpp"
#include "io.hpp"

namespace genum::cli {

json to_json(const CostBreakdown& c) {
  return {{"num_intervals_prior", c.num_intervals_prior},
          {"granularity_prior", c.granularity_prior},
          {"boundary_prior", c.boundary_prior},
          {"multinomial_choice", c.multinomial_choice},
          {"multinomial_factorial", c.multinomial_factorial},
          {"bin_index", c.bin_index},
          {"total", c.total}};
}

json to_json(const LogMapping& m) {
  return {{"neg_shift", m.neg_shift}, {"pos_shift", m.pos_shift},
          {"neg_ref", m.neg_ref},     {"pos_ref", m.pos_ref},
          {"has_neg", m.has_neg},     {"has_zero", m.has_zero},
          {"has_pos", m.has_pos},     {"image_min", m.image_min},
          {"image_max", m.image_max}};
}

json to_json(const GlobalHistogram& h) {
  json intervals = json::array();
  for (const GlobalInterval& iv : h.intervals) {
    intervals.push_back({{"lower", iv.lower},
                         {"upper", iv.upper},
                         {"count", iv.count},
                         {"density", iv.density},
                         {"boundary", iv.boundary},
                         {"subset", iv.subset_index}});
  }
  json subsets = json::array();
  for (std::size_t s = 0; s < h.per_subset_granularity.size(); ++s) {
    subsets.push_back({{"G", h.per_subset_granularity[s].first},
                       {"E", h.per_subset_granularity[s].second},
                       {"cost", h.total_cost_per_subset.at(s)}});
  }
  return {{"n", h.n},
          {"K", h.K()},
          {"subset_count", h.subset_count},
          {"two_level_triggered", h.two_level_triggered},
          {"subsets", std::move(subsets)},
          {"intervals", std::move(intervals)}};
}

json to_json(const ConditioningReport& r, const DataSet& d) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"n", d.n()},
          {"distinct_count", d.distinct_count()},
          {"min", d.min_value()},
          {"max", d.max_value()},
          {"rng", r.rng},
          {"pr", opt(r.pr)},
          {"gr", opt(r.gr)},
          {"collisions",
           {{"count", r.collision_count},
            {"max_colliding_bin_count", r.max_colliding_bin_count},
            {"pich_max_colliding_bin_count", r.pich_max_colliding_bin_count}}},
          {"verdict_ich", r.verdict_ich},
          {"verdict_rich", r.verdict_rich},
          {"verdict_pich", r.verdict_pich},
          {"t_c", r.t_c},
          {"t_E", r.t_E},
          {"effective_E", r.effective_E},
          {"at_mantissa_limit", r.at_mantissa_limit}};
}

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidSpec, "generator spec: " + what);
}

template <class T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(std::string("field '") + key + "' has the wrong type");
  }
}

MixtureComponent component_from_json(const json& j) {
  if (!j.is_object()) invalid("component must be an object");
  MixtureComponent c;
  read_field(j, "weight", c.weight);
  read_field(j, "mu", c.mu);
  read_field(j, "sigma", c.sigma);
  return c;
}

}  // namespace

GeneratorSpec generator_spec_from_json(const json& j) {
  if (!j.is_object()) invalid("document must be an object");
  if (!j.contains("kind") || !j["kind"].is_string()) invalid("missing 'kind'");
  const auto kind = parse_generator_kind(j["kind"].get<std::string>());
  if (!kind) invalid("unknown kind '" + j["kind"].get<std::string>() + "'");
  if (!j.contains("n")) invalid("missing 'n'");
  if (!j["n"].is_number_unsigned()) invalid("'n' must be a positive integer");

  GeneratorSpec s;
  s.kind = *kind;
  read_field(j, "n", s.n);
  read_field(j, "seed", s.seed);
  read_field(j, "lower", s.lower);
  read_field(j, "upper", s.upper);
  read_field(j, "mu", s.mu);
  read_field(j, "sigma", s.sigma);
  read_field(j, "trials", s.trials);
  if (j.contains("components")) {
    if (!j["components"].is_array()) invalid("'components' must be an array");
    for (const json& c : j["components"]) s.components.push_back(component_from_json(c));
  }
  if (j.contains("outliers")) {
    const json& o = j["outliers"];
    if (!o.is_object()) invalid("'outliers' must be an object");
    OutlierSpec out;
    read_field(o, "count", out.count);
    if (o.contains("value")) {
      double v = 0.0;
      read_field(o, "value", v);
      out.value = v;
    }
    read_field(o, "mu", out.mu);
    read_field(o, "sigma", out.sigma);
    s.outliers = out;
  }
  validate(s);
  return s;
}

json to_json(const GeneratorSpec& s) {
  json j = {{"kind", to_string(s.kind)}, {"n", s.n}, {"seed", s.seed}};
  switch (s.kind) {
    case GeneratorKind::Uniform:
      j["lower"] = s.lower;
      j["upper"] = s.upper;
      break;
    case GeneratorKind::Gaussian:
      j["mu"] = s.mu;
      j["sigma"] = s.sigma;
      break;
    case GeneratorKind::GaussianMixture:
      j["components"] = json::array();
      for (const auto& c : s.components) {
        j["components"].push_back({{"weight", c.weight}, {"mu", c.mu}, {"sigma", c.sigma}});
      }
      break;
    case GeneratorKind::BinomialMixture:
      j["trials"] = s.trials;
      j["sigma"] = s.sigma;
      break;
  }
  if (s.outliers) {
    json o = {{"count", s.outliers->count}};
    if (s.outliers->value) {
      o["value"] = *s.outliers->value;
    } else {
      o["mu"] = s.outliers->mu;
      o["sigma"] = s.outliers->sigma;
    }
    j["outliers"] = std::move(o);
  }
  return j;
}

std::string plot_csv(const GlobalHistogram& h) {
  std::string out = "lower,upper,count,density\n";
  for (const GlobalInterval& iv : h.intervals) {
    out += format_double(iv.lower) + ',' + format_double(iv.upper) + ',' +
           std::to_string(iv.count) + ',' + format_double(iv.density) + '\n';
  }
  return out;
}

}  // namespace genum::cli
