#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "experiments.hpp"
#include "genum/conditioning.hpp"
#include "genum/error.hpp"
#include "io.hpp"
#include "serialize.hpp"

#ifndef GENUM_VERSION
#define GENUM_VERSION "0.0.0"
#endif

namespace genum::cli {

namespace fs = std::filesystem;

std::optional<std::string> check_histogram(const GlobalHistogram& h) {
  if (h.intervals.empty()) return "histogram has no interval";
  std::uint64_t total = 0;
  double mass = 0.0;
  for (std::size_t k = 0; k < h.intervals.size(); ++k) {
    const GlobalInterval& iv = h.intervals[k];
    if (!(iv.lower < iv.upper)) return "interval " + std::to_string(k) + " is empty";
    if (k > 0 && h.intervals[k - 1].upper != iv.lower) {
      return "intervals " + std::to_string(k - 1) + " and " + std::to_string(k) +
             " are not contiguous";
    }
    total += iv.count;
    mass += iv.density * (iv.upper - iv.lower);
  }
  if (total != h.n) return "interval counts do not sum to n";
  if (std::fabs(mass - 1.0) > 1e-9) return "densities do not integrate to 1";
  return std::nullopt;
}

namespace {

using clock = std::chrono::steady_clock;

struct BuildArgs {
  std::string input;
  std::string format = "values";
  std::string mode = "auto";
  bool early_stop = false;
  std::optional<std::uint64_t> force_E;
  std::uint64_t e_max = 1'000'000'000;
  std::string output;
  std::string plot;
};

struct AnalyzeArgs {
  std::string input;
  std::string format = "values";
  std::uint64_t e_max = 1'000'000'000;
  std::string output;
};

struct GenerateArgs {
  std::string spec;
  std::string output;
};

struct ExperimentArgs {
  std::string name;
  ExperimentOptions opts;
  std::string output_dir = ".";
};

void write_manifest(const fs::path& artifact, const std::string& command, json options,
                    const std::string& input_bytes, double elapsed) {
  const json m = {{"command", command},
                  {"options", std::move(options)},
                  {"input_digest", "sha256:" + sha256_hex(input_bytes)},
                  {"tool_version", GENUM_VERSION},
                  {"elapsed_seconds", elapsed}};
  fs::path p = artifact;
  p += ".manifest.json";
  write_file(p, m.dump(2) + '\n');
}

void emit(const std::string& output, const std::string& content) {
  if (output.empty() || output == "-") {
    std::cout << content;
  } else {
    write_file(output, content);
  }
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::EmptyInput: return kEmptyInput;
    case ErrorCode::ParseError:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::NonFiniteInput:
    case ErrorCode::InvalidSpec:
    case ErrorCode::InvalidArguments:
    case ErrorCode::InvalidN:
      return kInputError;
    default: return kInvariantViolation;
  }
}

int cmd_build(const BuildArgs& a) {
  const std::string bytes = read_file(a.input);
  const DataSet d = parse_dataset(bytes, parse_format(a.format));

  BuildOptions opts;
  opts.early_stop = a.early_stop;
  opts.force_E = a.force_E;
  opts.e_max = a.e_max;

  const auto t0 = clock::now();
  const bool pich = is_pich(d, opts.e_max);
  json standard_info = nullptr;
  GlobalHistogram h;
  if (a.mode == "standard" || (a.mode == "auto" && !pich)) {
    const StandardResult r = build_standard(d, opts);
    h = wrap_standard(d, r);
    standard_info = {{"E", r.model.E},
                     {"G", r.chosen_G},
                     {"at_mantissa_limit", r.at_mantissa_limit},
                     {"cost", to_json(r.cost)},
                     {"null_cost", r.null_cost},
                     {"level", level(r.cost.total, r.null_cost)}};
  } else {
    h = build_two_level(d, opts);
  }
  const double elapsed = std::chrono::duration<double>(clock::now() - t0).count();

  if (auto bad = check_histogram(h)) {
    std::cerr << "genum build: invariant violated: " << *bad << '\n';
    return kInvariantViolation;
  }

  json out = to_json(h);
  json prov = {{"mode", a.mode},
               {"pich", pich},
               {"early_stop", a.early_stop},
               {"force_E", a.force_E ? json(*a.force_E) : json(nullptr)},
               {"e_max", a.e_max}};
  if (h.two_level_triggered) prov["log_mapping"] = to_json(log_dataset_cr(d).second);
  out["provenance"] = std::move(prov);
  out["standard"] = std::move(standard_info);
  write_file(a.output, out.dump(2) + '\n');

  const json options = {{"input", a.input},   {"format", a.format},
                        {"mode", a.mode},     {"early_stop", a.early_stop},
                        {"force_E", a.force_E ? json(*a.force_E) : json(nullptr)},
                        {"e_max", a.e_max},   {"plot", a.plot}};
  write_manifest(a.output, "build", options, bytes, elapsed);
  if (!a.plot.empty()) {
    write_file(a.plot, plot_csv(h));
    write_manifest(a.plot, "build", options, bytes, elapsed);
  }
  return kOk;
}

int cmd_analyze(const AnalyzeArgs& a) {
  const std::string bytes = read_file(a.input);
  const DataSet d = parse_dataset(bytes, parse_format(a.format));
  const auto t0 = clock::now();
  const ConditioningReport r = analyze(d, a.e_max);
  const double elapsed = std::chrono::duration<double>(clock::now() - t0).count();
  emit(a.output, to_json(r, d).dump(2) + '\n');
  if (!a.output.empty() && a.output != "-") {
    write_manifest(a.output, "analyze",
                   {{"input", a.input}, {"format", a.format}, {"e_max", a.e_max}}, bytes,
                   elapsed);
  }
  return kOk;
}

int cmd_generate(const GenerateArgs& a) {
  const std::string bytes = read_file(a.spec);
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("spec is not JSON: ") + e.what());
  }
  const GeneratorSpec spec = generator_spec_from_json(j);
  const auto t0 = clock::now();
  const std::vector<double> values = generate_values(spec);
  std::string text;
  text.reserve(values.size() * 24);
  for (double v : values) {
    text += format_double(v);
    text += '\n';
  }
  const double elapsed = std::chrono::duration<double>(clock::now() - t0).count();
  write_file(a.output, text);
  write_manifest(a.output, "generate", {{"spec", a.spec}, {"resolved", to_json(spec)}}, bytes,
                 elapsed);
  return kOk;
}

int cmd_experiment(ExperimentArgs a) {
  const auto which = parse_experiment(a.name);
  if (!which) {
    std::cerr << "genum experiment: unknown experiment '" << a.name << "'\n";
    return kInputError;
  }
  a.opts.experiment = *which;
  const auto t0 = clock::now();
  const std::vector<ExperimentRow> rows = run_experiment(a.opts);
  const double elapsed = std::chrono::duration<double>(clock::now() - t0).count();

  fs::create_directories(a.output_dir);
  const fs::path out = fs::path(a.output_dir) / (a.name + ".csv");
  write_file(out, experiment_csv(*which, rows));

  const auto [lo, hi] = default_exponents(*which);
  const json options = {{"name", a.name},
                        {"reps", a.opts.reps},
                        {"seed", a.opts.seed},
                        {"min_exp", a.opts.min_exp.value_or(lo)},
                        {"max_exp", a.opts.max_exp.value_or(hi)},
                        {"step", a.opts.step},
                        {"n", a.opts.n ? json(*a.opts.n) : json(nullptr)},
                        {"early_stop", experiment_build_options(*which).early_stop}};
  write_manifest(out, "experiment", options, options.dump(), elapsed);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Regularized irregular histograms with outlier-robust two-level builds",
               "genum"};
  app.set_version_flag("--version", GENUM_VERSION);
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build a histogram and write it as JSON");
  b->add_option("input", build.input, "Input data file")->required();
  b->add_option("--format", build.format, "values or value-freq")
      ->check(CLI::IsMember({"values", "value-freq"}));
  b->add_option("--mode", build.mode, "auto, standard or two-level")
      ->check(CLI::IsMember({"auto", "standard", "two-level"}));
  b->add_flag("--early-stop", build.early_stop,
              "Stop the granularity loop after 3 non-improving steps past sqrt(n)");
  b->add_option("--force-E", build.force_E, "Use this many epsilon-bins")
      ->check(CLI::PositiveNumber);
  b->add_option("--e-max", build.e_max, "Upper bound on epsilon-bins")
      ->check(CLI::PositiveNumber);
  b->add_option("-o,--output", build.output, "Histogram JSON path")->required();
  b->add_option("--plot", build.plot, "Also write lower,upper,count,density CSV here");

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Report conditioning diagnostics as JSON");
  a->add_option("input", an.input, "Input data file")->required();
  a->add_option("--format", an.format, "values or value-freq")
      ->check(CLI::IsMember({"values", "value-freq"}));
  a->add_option("--e-max", an.e_max, "Upper bound on epsilon-bins")
      ->check(CLI::PositiveNumber);
  a->add_option("-o,--output", an.output, "Report path (stdout when omitted)");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write synthetic values from a JSON spec");
  g->add_option("spec", gen.spec, "Generator spec JSON")->required();
  g->add_option("-o,--output", gen.output, "Values file")->required();

  ExperimentArgs ex;
  auto* e = app.add_subcommand("experiment", "Rerun a synthetic experiment sweep");
  e->add_option("name", ex.name, "one-outlier, outlier-dist, heavy-tail or scalability")
      ->required();
  auto* reps = e->add_option("--reps", ex.opts.reps, "Repetitions per configuration");
  e->add_option("--seed", ex.opts.seed, "Base seed");
  e->add_option("--min-exp", ex.opts.min_exp, "First sweep exponent");
  e->add_option("--max-exp", ex.opts.max_exp, "Last sweep exponent");
  e->add_option("--step", ex.opts.step, "Exponent step")->check(CLI::PositiveNumber);
  e->add_option("--n", ex.opts.n, "Base sample size")->check(CLI::PositiveNumber);
  e->add_option("--threads", ex.opts.threads, "Worker threads (0: all cores)");
  e->add_option("-o,--output-dir", ex.output_dir, "Directory for the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (b->parsed()) return cmd_build(build);
    if (a->parsed()) return cmd_analyze(an);
    if (g->parsed()) return cmd_generate(gen);
    if (e->parsed()) {
      if (ex.name == "scalability" && reps->count() == 0) ex.opts.reps = 1;
      return cmd_experiment(ex);
    }
  } catch (const Error& err) {
    std::cerr << "genum: " << err.what() << '\n';
    return exit_code_for(err);
  } catch (const std::exception& err) {
    std::cerr << "genum: " << err.what() << '\n';
    return kInvariantViolation;
  }
  return kInputError;
}

}  // namespace genum::cli
