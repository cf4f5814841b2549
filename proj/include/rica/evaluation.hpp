#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rica/amari.hpp"
#include "rica/data_model.hpp"
#include "rica/optimizer.hpp"

namespace rica {

enum class Method { FastIca, RCC, RGV, KCC, KGV };

std::string to_string(Method method);
/// "fastica", "rcc", "rgv", "kcc", "kgv" (any case).
Method parse_method(const std::string& name);
std::vector<Method> parse_methods(const std::string& csv);

struct ExperimentRecord {
  std::string source_labels;  // e.g. "cb"
  Index n = 0;
  Method method = Method::RGV;
  std::uint64_t seed = 0;     // trial seed; rerunning the trial with it reproduces the record
  double amari = 0.0;         // unscaled
  double runtime_seconds = 0.0;
  Index outliers = 0;
  double contrast = 0.0;      // final contrast for contrast methods, 0 for FastICA
};

inline constexpr const char* kRandomPair = "rand";

struct BenchmarkConfig {
  /// Each entry is a string of source labels ("cb") or "rand", which draws
  /// two labels uniformly with replacement per replicate.
  std::vector<std::string> pairs;
  Index n = 1000;
  int replicates = 10;
  std::vector<Method> methods{Method::FastIca, Method::RGV};
  std::uint64_t seed = 0;
  OptimizerConfig optimizer;  // its seed is replaced per trial
  double cond_min = 1.0;
  double cond_max = 2.0;
  unsigned threads = 1;  // 0 = hardware concurrency

  std::string describe() const;
};

/// Runs one (labels, replicate) trial for one method. `outliers` entries of
/// magnitude `outlier_magnitude` are injected after mixing.
ExperimentRecord run_trial(const std::string& labels, Index n, Method method,
                           std::uint64_t trial_seed, const BenchmarkConfig& config,
                           Index outliers = 0, double outlier_magnitude = 5.0);

/// Seed of replicate `rep` of pair entry `pair_index`.
std::uint64_t trial_seed(std::uint64_t master, std::size_t pair_index, int rep);

/// Labels used by a trial ("rand" entries resolved from the trial seed).
std::string resolve_labels(const std::string& entry, std::uint64_t trial_seed);

/// Records sorted by (source_labels, method, seed).
std::vector<ExperimentRecord> run_benchmark(const BenchmarkConfig& config);

struct OutlierStudyConfig {
  BenchmarkConfig base;
  std::vector<Index> counts{0, 5, 10, 25};
  double magnitude = 5.0;
};

/// Same trials as run_benchmark for every count; the outlier positions of a
/// trial are nested across counts.
std::vector<ExperimentRecord> run_outlier_study(const OutlierStudyConfig& config);

struct OutlierSummaryRow {
  Index outliers = 0;
  Method method = Method::RGV;
  double mean_amari = 0.0;
  int replicates = 0;
};
std::vector<OutlierSummaryRow> summarize_outliers(const std::vector<ExperimentRecord>& records);

struct ScalingConfig {
  std::vector<Index> sizes;
  std::vector<Method> methods;
  int repetitions = 5;
  std::uint64_t seed = 0;
  OptimizerConfig optimizer;
};

struct ScalingPoint {
  Method method = Method::RGV;
  Index n = 0;
  double median_seconds = 0.0;
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  std::map<Method, double> exponents;  // least-squares slope of log t on log N
};

/// Times one contrast evaluation (feature maps or Gram matrices included,
/// optimization excluded) per method and size; median of `repetitions`.
ScalingResult run_scaling_study(const ScalingConfig& config);

/// Least-squares slope of log(y) against log(x).
double fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Mean of amari per (labels, method).
std::map<std::pair<std::string, Method>, double> mean_amari(
    const std::vector<ExperimentRecord>& records);

// --- presentation (amari reported ×100 here only) ---------------------------

/// runtime_s is written as NA when `with_runtime` is false, which makes the
/// file a pure function of the configuration and seed.
void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records,
                       const std::string& header, bool with_outliers = false,
                       bool with_runtime = true);
void write_outlier_summary_csv(std::ostream& out, const std::vector<OutlierSummaryRow>& rows,
                               const std::string& header);
void write_scaling_csv(std::ostream& out, const ScalingResult& result, const std::string& header);

struct SummaryTable {
  std::vector<std::string> row_labels;  // one per pdf entry, then "mean"
  std::vector<Method> methods;
  std::vector<std::vector<double>> cells;  // mean amari ×100
};
/// One row per distinct source entry in record order of `pairs`, a "mean"
/// row over the non-rand rows, and the "rand" row last when present.
SummaryTable summarize(const std::vector<ExperimentRecord>& records,
                       const std::vector<std::string>& pairs);
std::string format_summary(const SummaryTable& table);
void write_summary_csv(std::ostream& out, const SummaryTable& table, const std::string& header);

}  // namespace rica
