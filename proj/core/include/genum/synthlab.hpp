#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "genum/dataset.hpp"

namespace genum {

/// SplitMix64 step; used to derive independent generator seeds.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/**
 * Portable random stream: std::mt19937_64 (fully specified by the standard)
 * seeded from SplitMix64 over (seed, stream). Doubles are built from the top
 * 53 bits, normals by inverse CDF, so streams match across platforms.
 */
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in (0, 1), never 0 or 1.
  double open_uniform();
  double normal(double mu, double sigma);

 private:
  std::mt19937_64 engine_;
};

enum class GeneratorKind { Uniform, Gaussian, GaussianMixture, BinomialMixture };

const char* to_string(GeneratorKind kind);
std::optional<GeneratorKind> parse_generator_kind(const std::string& s);

struct MixtureComponent {
  double weight = 1.0;
  double mu = 0.0;
  double sigma = 1.0;
};

/// Either `count` copies of a fixed value or `count` draws of N(mu, sigma).
struct OutlierSpec {
  std::uint64_t count = 1;
  std::optional<double> value;
  double mu = 0.0;
  double sigma = 1.0;
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Uniform;
  std::uint64_t n = 1;
  std::uint64_t seed = 0;
  /// Uniform bounds.
  double lower = 0.0;
  double upper = 1.0;
  /// Gaussian parameters; sigma is also the per-component sigma of the
  /// binomial mixture.
  double mu = 0.0;
  double sigma = 1.0;
  std::vector<MixtureComponent> components;
  /// Binomial mixture: components i = 0..trials with weight C(trials, i) / 2^trials
  /// and mean i.
  std::uint64_t trials = 20;
  std::optional<OutlierSpec> outliers;
};

/// Throws InvalidSpec when the spec breaks its invariants.
void validate(const GeneratorSpec& spec);

/// n base draws followed by the outliers, in generation order.
std::vector<double> generate_values(const GeneratorSpec& spec);

DataSet generate(const GeneratorSpec& spec);

/// Weights C(trials, i) 2^-trials, means i, common sigma.
std::vector<MixtureComponent> binomial_components(std::uint64_t trials, double sigma);

/// 1 / (n^2 - 1). Throws InvalidN for n < 2.
double expected_min_gap_uniform(std::uint64_t n);

double ich_threshold_uniform(double E);
/// Root of n sqrt(1 + 1/log2 n) = sqrt(pi/2) sqrt(E).
double ich_threshold_gaussian(double E);
/// 1/2 + sqrt(1/4 + 2 ln2 E).
double birthday_threshold(double E);

struct GranularApprox {
  double rng = 0.0;
  double pr = 0.0;
  double gr = 0.0;
};

/// Normal-approximation range, precision and granular length of a Gaussian
/// sample of size n, in units of sigma. Throws InvalidN for n < 4.
GranularApprox gaussian_granular_length_approx(std::uint64_t n);

}  // namespace genum
