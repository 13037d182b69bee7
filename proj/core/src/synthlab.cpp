#include "genum/synthlab.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "genum/criterion.hpp"
#include "genum/error.hpp"

namespace genum {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  std::uint64_t mixed = splitmix64(state);
  state = mixed ^ stream;
  return splitmix64(state);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(derive_seed(seed, stream)) {}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1p-53; }

double Rng::open_uniform() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1p-53;
}

double Rng::normal(double mu, double sigma) {
  const boost::math::normal_distribution<double> dist(mu, sigma);
  return boost::math::quantile(dist, open_uniform());
}

const char* to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Uniform: return "uniform";
    case GeneratorKind::Gaussian: return "gaussian";
    case GeneratorKind::GaussianMixture: return "gaussian_mixture";
    case GeneratorKind::BinomialMixture: return "binomial_mixture";
  }
  return "unknown";
}

std::optional<GeneratorKind> parse_generator_kind(const std::string& s) {
  if (s == "uniform") return GeneratorKind::Uniform;
  if (s == "gaussian") return GeneratorKind::Gaussian;
  if (s == "gaussian_mixture") return GeneratorKind::GaussianMixture;
  if (s == "binomial_mixture") return GeneratorKind::BinomialMixture;
  return std::nullopt;
}

std::vector<MixtureComponent> binomial_components(std::uint64_t trials, double sigma) {
  std::vector<MixtureComponent> out;
  out.reserve(trials + 1);
  const double scale = static_cast<double>(trials) * std::log(2.0);
  for (std::uint64_t i = 0; i <= trials; ++i) {
    out.push_back({std::exp(log_binomial(trials, i) - scale), static_cast<double>(i), sigma});
  }
  return out;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidSpec, "generator spec: " + what);
}

std::vector<MixtureComponent> components_of(const GeneratorSpec& spec) {
  if (spec.kind == GeneratorKind::BinomialMixture) {
    return binomial_components(spec.trials, spec.sigma);
  }
  return spec.components;
}

}  // namespace

void validate(const GeneratorSpec& spec) {
  require(spec.n >= 1, "n must be >= 1");
  switch (spec.kind) {
    case GeneratorKind::Uniform:
      require(std::isfinite(spec.lower) && std::isfinite(spec.upper) &&
                  spec.lower < spec.upper,
              "uniform bounds must satisfy lower < upper");
      break;
    case GeneratorKind::Gaussian:
      require(std::isfinite(spec.mu) && std::isfinite(spec.sigma) && spec.sigma > 0,
              "gaussian needs finite mu and sigma > 0");
      break;
    case GeneratorKind::GaussianMixture: {
      require(!spec.components.empty(), "mixture needs components");
      double total = 0.0;
      for (const auto& c : spec.components) {
        require(c.weight >= 0 && std::isfinite(c.mu) && std::isfinite(c.sigma) &&
                    c.sigma > 0,
                "mixture component needs weight >= 0, finite mu, sigma > 0");
        total += c.weight;
      }
      require(std::fabs(total - 1.0) <= 1e-12, "mixture weights must sum to 1");
      break;
    }
    case GeneratorKind::BinomialMixture:
      require(spec.trials >= 1 && spec.trials <= 1000, "trials must be in [1, 1000]");
      require(std::isfinite(spec.sigma) && spec.sigma > 0, "sigma must be > 0");
      break;
  }
  if (spec.outliers) {
    const OutlierSpec& o = *spec.outliers;
    if (o.value) {
      require(std::isfinite(*o.value), "outlier value must be finite");
    } else {
      require(std::isfinite(o.mu) && std::isfinite(o.sigma) && o.sigma > 0,
              "outlier distribution needs finite mu and sigma > 0");
    }
  }
}

std::vector<double> generate_values(const GeneratorSpec& spec) {
  validate(spec);
  Rng rng(spec.seed, 0);
  std::vector<double> out;
  out.reserve(spec.n + (spec.outliers ? spec.outliers->count : 0));

  switch (spec.kind) {
    case GeneratorKind::Uniform:
      for (std::uint64_t i = 0; i < spec.n; ++i) {
        out.push_back(spec.lower + (spec.upper - spec.lower) * rng.uniform());
      }
      break;
    case GeneratorKind::Gaussian:
      for (std::uint64_t i = 0; i < spec.n; ++i) out.push_back(rng.normal(spec.mu, spec.sigma));
      break;
    case GeneratorKind::GaussianMixture:
    case GeneratorKind::BinomialMixture: {
      const std::vector<MixtureComponent> comps = components_of(spec);
      std::vector<double> cumulative;
      double acc = 0.0;
      for (const auto& c : comps) cumulative.push_back(acc += c.weight);
      for (std::uint64_t i = 0; i < spec.n; ++i) {
        const double u = rng.uniform() * acc;
        std::size_t j = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        if (j >= comps.size()) j = comps.size() - 1;
        out.push_back(rng.normal(comps[j].mu, comps[j].sigma));
      }
      break;
    }
  }

  if (spec.outliers) {
    Rng orng(spec.seed, 1);
    const OutlierSpec& o = *spec.outliers;
    for (std::uint64_t i = 0; i < o.count; ++i) {
      out.push_back(o.value ? *o.value : orng.normal(o.mu, o.sigma));
    }
  }
  return out;
}

DataSet generate(const GeneratorSpec& spec) {
  const std::vector<double> v = generate_values(spec);
  return DataSet::from_values(v);
}

double expected_min_gap_uniform(std::uint64_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidN, "expected_min_gap_uniform: n must be >= 2");
  const double x = static_cast<double>(n);
  return 1.0 / (x * x - 1.0);
}

double ich_threshold_uniform(double E) { return std::sqrt(E); }

double ich_threshold_gaussian(double E) {
  const double target = std::sqrt(std::numbers::pi / 2) * std::sqrt(E);
  auto lhs = [](double n) { return n * std::sqrt(1.0 + 1.0 / std::log2(n)); };
  // lhs is increasing for n >= 2; bracket the root and bisect.
  double lo = 2.0;
  double hi = 4.0;
  while (lhs(hi) < target) hi *= 2;
  for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
    const double mid = lo + (hi - lo) / 2;
    (lhs(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

double birthday_threshold(double E) {
  return 0.5 + std::sqrt(0.25 + 2.0 * std::numbers::ln2 * E);
}

GranularApprox gaussian_granular_length_approx(std::uint64_t n) {
  if (n < 4) {
    throw Error(ErrorCode::InvalidN, "gaussian_granular_length_approx: n must be >= 4");
  }
  const double x = static_cast<double>(n);
  const double l = std::log2(x);
  GranularApprox g;
  g.rng = 2.0 * (l + 1.0) / std::sqrt(l);
  g.pr = std::numbers::pi * std::sqrt(l) / (x * x);
  g.gr = (2.0 / std::numbers::pi) * (1.0 + 1.0 / l) * x * x;
  return g;
}

}  // namespace genum
