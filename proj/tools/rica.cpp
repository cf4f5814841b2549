// rica: command-line front end for the randomized ICA toolkit.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rica/audio.hpp"
#include "rica/evaluation.hpp"
#include "rica/source_bank.hpp"

namespace {

using namespace rica;

struct OptimizerFlags {
  Index m = 200;
  double gamma = 0.02;
  double sigma = 1.0;
  double kappa = 0.02;
  std::string kernel_reg = "variance";
  Index oracle_limit = kDefaultOracleLimit;
  double fd_step = 1e-4;
  double tol = 1e-5;
  int max_iters = 100;
  int restarts = 3;
  std::string init = "fastica";

  void add_to(CLI::App& app) {
    app.add_option("--m", m, "Random features per component")->check(CLI::PositiveNumber);
    app.add_option("--gamma", gamma, "Covariance regularizer")->check(CLI::PositiveNumber);
    app.add_option("--sigma", sigma, "Gaussian kernel bandwidth")->check(CLI::PositiveNumber);
    app.add_option("--kappa", kappa, "Kernel oracle regularizer")->check(CLI::PositiveNumber);
    app.add_option("--kernel-reg", kernel_reg, "Kernel oracle regularizer form")
        ->check(CLI::IsMember({"variance", "squared"}));
    app.add_option("--oracle-limit", oracle_limit, "Largest N accepted by the kernel oracles");
    app.add_option("--fd-step", fd_step, "Finite-difference step (radians)");
    app.add_option("--tol", tol, "Stop when a step improves the contrast by less");
    app.add_option("--max-iters", max_iters, "Descent steps per start");
    app.add_option("--restarts", restarts, "Independent starts");
    app.add_option("--init", init, "First start")->check(CLI::IsMember({"random", "fastica"}));
  }

  OptimizerConfig resolve(ContrastKind contrast, std::uint64_t seed) const {
    OptimizerConfig c;
    c.contrast = contrast;
    c.m = m;
    c.gamma = gamma;
    c.sigma = sigma;
    c.kappa = kappa;
    c.kernel_regularizer =
        kernel_reg == "squared" ? KernelRegularizer::Squared : KernelRegularizer::VariancePenalty;
    c.oracle_limit = oracle_limit;
    c.fd_step = fd_step;
    c.tol = tol;
    c.max_iters = max_iters;
    c.restarts = restarts;
    c.init = parse_init(init);
    c.seed = seed;
    c.validate();
    return c;
  }
};

std::string header_line(const std::string& command, const std::string& config) {
  return "rica " + std::string(kVersion) + " " + command + " " + config;
}

void announce(const std::string& header) { std::cout << "# " << header << '\n' << std::flush; }

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  return out;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) os << (i ? "," : "") << items[i];
  return os.str();
}

std::string join_methods(const std::vector<Method>& methods) {
  std::vector<std::string> names;
  for (Method m : methods) names.push_back(to_string(m));
  return join(names);
}

// --- bench / outliers ------------------------------------------------------

struct BenchFlags {
  std::string pairs = "cb";
  Index n = 1000;
  int reps = 10;
  std::string methods = "fastica,rgv";
  std::uint64_t seed = 0;
  double cond_min = 1.0;
  double cond_max = 2.0;
  unsigned threads = 1;
  bool timings = false;
  std::string out;
  std::string summary_out;
  OptimizerFlags opt;

  void add_to(CLI::App& app) {
    app.add_option("--pairs", pairs,
                   "Comma-separated source entries; 'a,b' is read as the pair ab, "
                   "'rand' draws a pair per replicate");
    app.add_option("--n", n, "Samples per trial")->check(CLI::Range(Index{2}, Index{1} << 30));
    app.add_option("--reps", reps, "Replicates per entry")->check(CLI::PositiveNumber);
    app.add_option("--methods", methods, "fastica,rcc,rgv,kcc,kgv");
    app.add_option("--seed", seed, "Master seed")->required();
    app.add_option("--cond-min", cond_min, "Smallest mixing condition number");
    app.add_option("--cond-max", cond_max, "Largest mixing condition number");
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");
    app.add_flag("--timings", timings, "Write measured runtimes instead of NA");
    app.add_option("--out", out, "Records CSV (default stdout)");
    app.add_option("--summary-out", summary_out, "Summary table CSV");
    opt.add_to(app);
  }

  BenchmarkConfig resolve() const {
    BenchmarkConfig c;
    // A list of single letters names one pair ("a,b" -> "ab"); anything else
    // is a list of entries.
    const auto items = split_csv(pairs);
    bool all_single = !items.empty();
    for (const auto& item : items) all_single = all_single && item.size() == 1;
    if (all_single) {
      std::string joined;
      for (const auto& item : items) joined += item;
      c.pairs = {joined};
    } else {
      c.pairs = items;
    }
    for (const auto& entry : c.pairs) resolve_labels(entry, 0);
    c.n = n;
    c.replicates = reps;
    c.methods = parse_methods(methods);
    c.seed = seed;
    c.optimizer = opt.resolve(ContrastKind::RGV, seed);
    c.cond_min = cond_min;
    c.cond_max = cond_max;
    c.threads = threads;
    return c;
  }
};

int run_bench(const BenchFlags& flags) {
  const BenchmarkConfig config = flags.resolve();
  const std::string header = header_line("bench", config.describe());
  if (!flags.out.empty()) announce(header);
  const auto records = run_benchmark(config);
  if (flags.out.empty()) {
    write_records_csv(std::cout, records, header, false, flags.timings);
  } else {
    auto out = open_output(flags.out);
    write_records_csv(out, records, header, false, flags.timings);
  }
  const SummaryTable table = summarize(records, config.pairs);
  std::cerr << format_summary(table);
  if (!flags.summary_out.empty()) {
    auto out = open_output(flags.summary_out);
    write_summary_csv(out, table, header);
  }
  return 0;
}

struct OutlierFlags {
  BenchFlags bench;
  std::string counts = "0,5,10,25";
  double magnitude = 5.0;

  void add_to(CLI::App& app) {
    bench.add_to(app);
    app.add_option("--counts", counts, "Outlier counts");
    app.add_option("--magnitude", magnitude, "Outlier magnitude");
  }
};

int run_outliers(const OutlierFlags& flags) {
  OutlierStudyConfig config;
  config.base = flags.bench.resolve();
  config.counts.clear();
  for (const auto& c : split_csv(flags.counts)) config.counts.push_back(std::stoll(c));
  config.magnitude = flags.magnitude;
  const std::string header =
      header_line("outliers", config.base.describe() + " counts=" + join(config.counts) +
                                  " magnitude=" + format_double(config.magnitude));
  if (!flags.bench.out.empty()) announce(header);
  const auto records = run_outlier_study(config);
  if (flags.bench.out.empty()) {
    write_records_csv(std::cout, records, header, true, flags.bench.timings);
  } else {
    auto out = open_output(flags.bench.out);
    write_records_csv(out, records, header, true, flags.bench.timings);
  }
  const auto rows = summarize_outliers(records);
  write_outlier_summary_csv(std::cerr, rows, {});
  if (!flags.bench.summary_out.empty()) {
    auto out = open_output(flags.bench.summary_out);
    write_outlier_summary_csv(out, rows, header);
  }
  return 0;
}

// --- unmix -----------------------------------------------------------------

struct UnmixFlags {
  std::string in;
  std::string contrast = "rgv";
  std::uint64_t seed = 0;
  std::string out_model;
  std::string out;
  OptimizerFlags opt;

  void add_to(CLI::App& app) {
    app.add_option("--in", in, "Mixtures CSV, one row per component")->required();
    app.add_option("--contrast", contrast, "rcc, rgv, kcc or kgv");
    app.add_option("--seed", seed, "Master seed")->required();
    app.add_option("--out-model", out_model, "Model JSON");
    app.add_option("--out", out, "Unmixed components CSV");
    opt.add_to(app);
  }
};

nlohmann::json matrix_json(const Matrix& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

int run_unmix(const UnmixFlags& flags) {
  const OptimizerConfig config = flags.opt.resolve(parse_contrast(flags.contrast), flags.seed);
  const std::string header = header_line("unmix", "in=" + flags.in + " " + config.describe());
  announce(header);
  const Dataset x = read_csv_file(flags.in);
  const UnmixingModel model = fit_unmixing(x, config);

  std::cout << "contrast " << to_string(model.contrast) << ' '
            << format_double(model.final_contrast) << " iterations " << model.iterations
            << " restart " << model.restart << " clamped " << model.clamp_events << " seconds "
            << format_double(model.wall_clock_seconds) << '\n';

  if (!flags.out_model.empty()) {
    nlohmann::json j;
    j["version"] = std::string(kVersion);
    j["config"] = {{"contrast", to_string(config.contrast)},
                   {"m", config.m},
                   {"gamma", config.gamma},
                   {"sigma", config.sigma},
                   {"kappa", config.kappa},
                   {"fd_step", config.fd_step},
                   {"tol", config.tol},
                   {"max_iters", config.max_iters},
                   {"restarts", config.restarts},
                   {"init", to_string(config.init)},
                   {"seed", config.seed},
                   {"describe", header}};
    j["whitening"] = {{"mean", std::vector<double>(model.whitening.mean.data(),
                                                   model.whitening.mean.data() +
                                                       model.whitening.mean.size())},
                      {"matrix", matrix_json(model.whitening.matrix)}};
    j["angles"] = std::vector<double>(model.rotation.angles.data(),
                                      model.rotation.angles.data() + model.rotation.angles.size());
    j["unmixing"] = matrix_json(model.unmixing());
    j["contrast"] = {{"name", to_string(model.contrast)},
                     {"final", model.final_contrast},
                     {"clamped", model.clamp_events}};
    j["iterations"] = model.iterations;
    j["evaluations"] = model.evaluations;
    j["wall_clock_seconds"] = model.wall_clock_seconds;
    auto out = open_output(flags.out_model);
    out << j.dump(2) << '\n';
  }
  if (!flags.out.empty()) {
    write_csv_file(flags.out, Dataset(model.apply(x.values())), header);
  }
  return 0;
}

// --- separate --------------------------------------------------------------

struct SeparateFlags {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string method = "rgv";
  bool premixed = false;
  std::uint64_t seed = 0;
  std::string report;
  OptimizerFlags opt;

  void add_to(CLI::App& app) {
    app.add_option("--inputs", inputs, "Two mono PCM16 WAV files")->required()->expected(2);
    app.add_option("--outputs", outputs, "Two WAV files for the separated signals")
        ->required()
        ->expected(2);
    app.add_option("--method", method, "fastica, rcc, rgv, kcc or kgv");
    app.add_flag("--premixed", premixed, "Inputs are recorded mixtures; skip self-mixing");
    app.add_option("--seed", seed, "Master seed")->required();
    app.add_option("--report", report, "Record CSV");
    opt.add_to(app);
  }
};

int run_separate(const SeparateFlags& flags) {
  SeparationConfig config;
  config.method = parse_method(flags.method);
  config.optimizer = flags.opt.resolve(ContrastKind::RGV, derive_seed(flags.seed, 1));
  config.mode = flags.premixed ? AudioMode::PreMixed : AudioMode::SelfMix;
  config.mixing_seed = derive_seed(flags.seed, 2);
  const std::string header =
      header_line("separate", "inputs=" + join(flags.inputs) + " method=" + flags.method +
                                  " mode=" + (flags.premixed ? "premixed" : "selfmix") + " " +
                                  config.optimizer.describe() + " master_seed=" +
                                  std::to_string(flags.seed));
  announce(header);
  const AudioClip a = read_wav_file(flags.inputs[0]);
  const AudioClip b = read_wav_file(flags.inputs[1]);
  const SeparationResult result = separate_audio(a, b, config);
  write_wav_file(flags.outputs[0], result.outputs[0]);
  write_wav_file(flags.outputs[1], result.outputs[1]);

  std::cout << "samples " << result.mixed.cols() << " runtime_s "
            << format_double(result.record.runtime_seconds);
  if (result.amari_known) std::cout << " amari_x100 " << format_double(100.0 * result.record.amari);
  std::cout << '\n';
  if (!flags.report.empty()) {
    auto out = open_output(flags.report);
    write_records_csv(out, {result.record}, header);
  }
  return 0;
}

// --- sweep -----------------------------------------------------------------

struct SweepFlags {
  std::string sources = "c,c";
  Index n = 2000;
  std::string contrast = "rgv";
  double grid = 1.0;
  std::string mixing = "random";
  std::uint64_t seed = 0;
  std::string out;
  OptimizerFlags opt;

  void add_to(CLI::App& app) {
    app.add_option("--sources", sources, "Two source labels, e.g. a,b");
    app.add_option("--n", n, "Samples")->check(CLI::Range(Index{2}, Index{1} << 30));
    app.add_option("--contrast", contrast, "rcc, rgv, kcc or kgv");
    app.add_option("--grid", grid, "Angle step in degrees")->check(CLI::PositiveNumber);
    app.add_option("--mixing", mixing, "random or identity")
        ->check(CLI::IsMember({"random", "identity"}));
    app.add_option("--seed", seed, "Master seed")->required();
    app.add_option("--out", out, "CSV (default stdout)");
    opt.add_to(app);
  }
};

int run_sweep(const SweepFlags& flags) {
  std::string letters;
  for (const auto& item : split_csv(flags.sources)) letters += item;
  if (letters.size() != 2) throw Error(ErrorCode::InvalidArgument, "sweep needs two sources");
  OptimizerConfig config = flags.opt.resolve(parse_contrast(flags.contrast), derive_seed(flags.seed, 4));
  config.oracle_limit = std::max(config.oracle_limit, is_oracle(config.contrast) ? Index{0} : flags.n);
  const std::string header =
      header_line("sweep", "sources=" + letters + " n=" + std::to_string(flags.n) + " grid=" +
                               format_double(flags.grid) + " mixing=" + flags.mixing + " " +
                               config.describe() + " master_seed=" + std::to_string(flags.seed));
  if (!flags.out.empty()) announce(header);

  Matrix s(2, flags.n);
  for (Index i = 0; i < 2; ++i) {
    s.row(i) = sample_source(find_source(letters[static_cast<std::size_t>(i)]), flags.n,
                             derive_seed(flags.seed, 1, static_cast<std::uint64_t>(i)))
                   .transpose();
  }
  Dataset x(std::move(s));
  if (flags.mixing == "random") x = mix(x, random_mixing_matrix(2, 1.0, 2.0, derive_seed(flags.seed, 2)));
  const Whitened white = whiten(x);
  const ContrastObjective objective(white.data, config);

  std::ostringstream csv;
  csv << "# " << header << '\n' << "angle_degrees,contrast_value\n";
  const auto steps = static_cast<int>(std::floor(90.0 / flags.grid + 1e-9));
  for (int k = 0; k <= steps; ++k) {
    const double deg = k * flags.grid;
    const double value = objective(Vector::Constant(1, deg * std::numbers::pi / 180.0));
    csv << format_double(deg) << ',' << format_double(value) << '\n';
  }
  if (flags.out.empty()) {
    std::cout << csv.str();
  } else {
    open_output(flags.out) << csv.str();
  }
  return 0;
}

// --- kernel-bound ----------------------------------------------------------

struct KernelBoundFlags {
  Index n = 1000;
  double sigma = 1.0;
  std::string m_list = "100,200,400,800,1600";
  int seeds = 10;
  std::uint64_t seed = 0;
  std::string out;

  void add_to(CLI::App& app) {
    app.add_option("--n", n, "Samples")->check(CLI::Range(Index{2}, kDefaultGramLimit));
    app.add_option("--sigma", sigma, "Kernel bandwidth")->check(CLI::PositiveNumber);
    app.add_option("--m-list", m_list, "Feature counts");
    app.add_option("--seeds", seeds, "Feature draws averaged per m")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Master seed")->required();
    app.add_option("--out", out, "CSV (default stdout)");
  }
};

int run_kernel_bound(const KernelBoundFlags& flags) {
  std::vector<Index> ms;
  for (const auto& item : split_csv(flags.m_list)) ms.push_back(std::stoll(item));
  const std::string header =
      header_line("kernel-bound", "n=" + std::to_string(flags.n) + " sigma=" +
                                      format_double(flags.sigma) + " m_list=" + join(ms) +
                                      " seeds=" + std::to_string(flags.seeds) +
                                      " data=normal(0,1) seed=" + std::to_string(flags.seed));
  if (!flags.out.empty()) announce(header);

  std::mt19937_64 rng(derive_seed(flags.seed, 1));
  std::normal_distribution<double> normal;
  Matrix x(1, flags.n);
  for (Index k = 0; k < flags.n; ++k) x(0, k) = normal(rng);
  const Dataset data(std::move(x));
  const KernelSpec kernel{KernelFamily::Gaussian, flags.sigma};

  std::ostringstream csv;
  csv << "# " << header << '\n' << "m,empirical_error_mean,analytic_bound\n";
  for (Index m : ms) {
    double sum = 0.0;
    for (int s = 0; s < flags.seeds; ++s) {
      sum += empirical_approx_error(kernel, data, m,
                                    derive_seed(flags.seed, 2, static_cast<std::uint64_t>(m),
                                                static_cast<std::uint64_t>(s)));
    }
    csv << m << ',' << format_double(sum / flags.seeds) << ','
        << format_double(approximation_error_bound(flags.n, m)) << '\n';
  }
  if (flags.out.empty()) {
    std::cout << csv.str();
  } else {
    open_output(flags.out) << csv.str();
  }
  return 0;
}

// --- scaling ---------------------------------------------------------------

struct ScalingFlags {
  std::string sizes = "1000,2000,4000,8000";
  std::string methods = "rgv";
  int reps = 5;
  std::uint64_t seed = 0;
  std::string out;
  OptimizerFlags opt;

  void add_to(CLI::App& app) {
    app.add_option("--sizes", sizes, "Sample sizes");
    app.add_option("--methods", methods, "Contrast methods to time");
    app.add_option("--reps", reps, "Timed repetitions per point (median kept)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Master seed")->required();
    app.add_option("--out", out, "CSV (default stdout)");
    opt.add_to(app);
  }
};

int run_scaling(const ScalingFlags& flags) {
  ScalingConfig config;
  for (const auto& item : split_csv(flags.sizes)) config.sizes.push_back(std::stoll(item));
  config.methods = parse_methods(flags.methods);
  config.repetitions = flags.reps;
  config.seed = flags.seed;
  config.optimizer = flags.opt.resolve(ContrastKind::RGV, flags.seed);
  const std::string header =
      header_line("scaling", "sizes=" + join(config.sizes) + " methods=" +
                                 join_methods(config.methods) + " reps=" +
                                 std::to_string(config.repetitions) + " " +
                                 config.optimizer.describe());
  if (!flags.out.empty()) announce(header);
  const ScalingResult result = run_scaling_study(config);
  if (flags.out.empty()) {
    write_scaling_csv(std::cout, result, header);
  } else {
    auto out = open_output(flags.out);
    write_scaling_csv(out, result, header);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized ICA toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  BenchFlags bench;
  bench.add_to(*app.add_subcommand("bench", "Accuracy benchmark over source pairs"));
  UnmixFlags unmix;
  unmix.add_to(*app.add_subcommand("unmix", "Estimate an unmixing matrix from a CSV of mixtures"));
  SeparateFlags separate;
  separate.add_to(*app.add_subcommand("separate", "Separate a pair of WAV signals"));
  SweepFlags sweep;
  sweep.add_to(*app.add_subcommand("sweep", "Contrast as a function of the rotation angle"));
  KernelBoundFlags bound;
  bound.add_to(*app.add_subcommand("kernel-bound", "Random-feature kernel error vs its bound"));
  bool list = false;
  app.add_subcommand("sources", "Source density catalog")
      ->add_flag("--list", list, "Print the catalog")
      ->required();
  OutlierFlags outliers;
  outliers.add_to(*app.add_subcommand("outliers", "Benchmark with injected outliers"));
  ScalingFlags scaling;
  scaling.add_to(*app.add_subcommand("scaling", "Contrast evaluation time vs sample size"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "bench") return run_bench(bench);
    if (name == "unmix") return run_unmix(unmix);
    if (name == "separate") return run_separate(separate);
    if (name == "sweep") return run_sweep(sweep);
    if (name == "kernel-bound") return run_kernel_bound(bound);
    if (name == "outliers") return run_outliers(outliers);
    if (name == "scaling") return run_scaling(scaling);
    if (name == "sources") {
      announce(header_line("sources", "list=1"));
      std::cout << format_catalog();
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
