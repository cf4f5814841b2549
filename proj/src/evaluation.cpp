#include "rica/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include "rica/fastica.hpp"
#include "rica/source_bank.hpp"

namespace rica {

std::string to_string(Method method) {
  switch (method) {
    case Method::FastIca: return "fastica";
    case Method::RCC: return "rcc";
    case Method::RGV: return "rgv";
    case Method::KCC: return "kcc";
    case Method::KGV: return "kgv";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "fastica") return Method::FastIca;
  if (lower == "rcc") return Method::RCC;
  if (lower == "rgv") return Method::RGV;
  if (lower == "kcc") return Method::KCC;
  if (lower == "kgv") return Method::KGV;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + name + "'");
}

std::vector<Method> parse_methods(const std::string& csv) {
  std::vector<Method> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(parse_method(item));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no methods given");
  return out;
}

namespace {

ContrastKind contrast_of(Method method) {
  switch (method) {
    case Method::RCC: return ContrastKind::RCC;
    case Method::RGV: return ContrastKind::RGV;
    case Method::KCC: return ContrastKind::KCC;
    case Method::KGV: return ContrastKind::KGV;
    case Method::FastIca: break;
  }
  throw Error(ErrorCode::InvalidArgument, "FastICA has no contrast");
}

enum Stream : std::uint64_t {
  kSourceStream = 1,
  kMixingStream = 2,
  kLabelStream = 3,
  kOptimizerStream = 4,
  kOutlierStream = 5,
  kFastIcaStream = 6,
};

std::string entry_of(const std::string& labels) {
  const auto colon = labels.find(':');
  return colon == std::string::npos ? labels : labels.substr(0, colon);
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

void sort_records(std::vector<ExperimentRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.outliers, a.source_labels, a.method, a.seed) <
           std::tie(b.outliers, b.source_labels, b.method, b.seed);
  });
}

}  // namespace

std::string BenchmarkConfig::describe() const {
  std::ostringstream os;
  os << "pairs=";
  for (std::size_t i = 0; i < pairs.size(); ++i) os << (i ? ";" : "") << pairs[i];
  os << " n=" << n << " reps=" << replicates << " methods=";
  for (std::size_t i = 0; i < methods.size(); ++i) os << (i ? "," : "") << to_string(methods[i]);
  os << " master_seed=" << seed << " cond=[" << format_double(cond_min) << ","
     << format_double(cond_max) << "] optimizer{" << optimizer.describe() << "}";
  return os.str();
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t pair_index, int rep) {
  return derive_seed(master, pair_index, static_cast<std::uint64_t>(rep));
}

std::string resolve_labels(const std::string& entry, std::uint64_t seed) {
  if (entry != kRandomPair) {
    for (char c : entry) find_source(c);
    if (entry.empty()) throw Error(ErrorCode::InvalidArgument, "empty source entry");
    return entry;
  }
  std::mt19937_64 rng(derive_seed(seed, kLabelStream));
  std::uniform_int_distribution<int> pick(0, static_cast<int>(catalog().size()) - 1);
  std::string labels = "rand:";
  labels += static_cast<char>('a' + pick(rng));
  labels += static_cast<char>('a' + pick(rng));
  return labels;
}

ExperimentRecord run_trial(const std::string& labels, Index n, Method method,
                           std::uint64_t seed, const BenchmarkConfig& config, Index outliers,
                           double outlier_magnitude) {
  const auto colon = labels.find(':');
  const std::string letters = colon == std::string::npos ? labels : labels.substr(colon + 1);
  const auto comps = static_cast<Index>(letters.size());

  Matrix s(comps, n);
  for (Index i = 0; i < comps; ++i) {
    s.row(i) = sample_source(find_source(letters[static_cast<std::size_t>(i)]), n,
                             derive_seed(seed, kSourceStream, static_cast<std::uint64_t>(i)))
                   .transpose();
  }
  const MixingSpec a =
      random_mixing_matrix(comps, config.cond_min, config.cond_max, derive_seed(seed, kMixingStream));
  Dataset x = mix(Dataset(std::move(s), labels), a);
  if (outliers > 0) {
    x = inject_outliers(x, outliers, outlier_magnitude, derive_seed(seed, kOutlierStream));
  }
  const Matrix truth = a.matrix.inverse();

  ExperimentRecord rec;
  rec.source_labels = labels;
  rec.n = n;
  rec.method = method;
  rec.seed = seed;
  rec.outliers = outliers;

  const auto start = std::chrono::steady_clock::now();
  Matrix w;
  if (method == Method::FastIca) {
    const Whitened white = whiten(x);
    const auto ica = fastica_baseline(white.data, derive_seed(seed, kFastIcaStream));
    w = ica.rotation * white.transform.matrix;
  } else {
    OptimizerConfig opt = config.optimizer;
    opt.contrast = contrast_of(method);
    opt.seed = derive_seed(seed, kOptimizerStream);
    const UnmixingModel model = fit_unmixing(x, opt);
    w = model.unmixing();
    rec.contrast = model.final_contrast;
  }
  rec.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rec.amari = amari_distance(w, truth);
  return rec;
}

namespace {

std::vector<ExperimentRecord> run_grid(const BenchmarkConfig& config,
                                       const std::vector<Index>& counts, double magnitude) {
  if (config.replicates < 1) throw Error(ErrorCode::InvalidArgument, "replicates must be >= 1");
  if (config.pairs.empty()) throw Error(ErrorCode::InvalidArgument, "no source pairs");
  struct Job {
    std::string labels;
    std::uint64_t seed;
    Method method;
    Index outliers;
  };
  std::vector<Job> jobs;
  for (Index count : counts) {
    for (std::size_t p = 0; p < config.pairs.size(); ++p) {
      for (int rep = 0; rep < config.replicates; ++rep) {
        const std::uint64_t seed = trial_seed(config.seed, p, rep);
        const std::string labels = resolve_labels(config.pairs[p], seed);
        for (Method m : config.methods) jobs.push_back({labels, seed, m, count});
      }
    }
  }
  std::vector<ExperimentRecord> records(jobs.size());
  parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    records[i] = run_trial(job.labels, config.n, job.method, job.seed, config, job.outliers,
                           magnitude);
  });
  sort_records(records);
  return records;
}

}  // namespace

std::vector<ExperimentRecord> run_benchmark(const BenchmarkConfig& config) {
  return run_grid(config, {0}, 0.0);
}

std::vector<ExperimentRecord> run_outlier_study(const OutlierStudyConfig& config) {
  if (config.counts.empty()) throw Error(ErrorCode::InvalidArgument, "no outlier counts");
  return run_grid(config.base, config.counts, config.magnitude);
}

std::vector<OutlierSummaryRow> summarize_outliers(const std::vector<ExperimentRecord>& records) {
  std::map<std::pair<Index, Method>, std::pair<double, int>> acc;
  for (const auto& r : records) {
    auto& slot = acc[{r.outliers, r.method}];
    slot.first += r.amari;
    slot.second += 1;
  }
  std::vector<OutlierSummaryRow> rows;
  for (const auto& [key, value] : acc) {
    rows.push_back({key.first, key.second, value.first / value.second, value.second});
  }
  return rows;
}

double fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "power-law fit needs >= 2 matched points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingResult run_scaling_study(const ScalingConfig& config) {
  if (config.repetitions < 1) throw Error(ErrorCode::InvalidArgument, "repetitions must be >= 1");
  ScalingResult result;
  for (Method method : config.methods) {
    if (method == Method::FastIca) {
      throw Error(ErrorCode::InvalidArgument, "scaling study times contrast methods only");
    }
    std::vector<double> xs, ys;
    for (Index n : config.sizes) {
      const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(n));
      Matrix s(2, n);
      s.row(0) = sample_source(find_source('c'), n, derive_seed(seed, kSourceStream, 0)).transpose();
      s.row(1) = sample_source(find_source('b'), n, derive_seed(seed, kSourceStream, 1)).transpose();
      const MixingSpec a = random_mixing_matrix(2, 1.0, 2.0, derive_seed(seed, kMixingStream));
      const Whitened white = whiten(mix(Dataset(std::move(s)), a));

      OptimizerConfig opt = config.optimizer;
      opt.contrast = contrast_of(method);
      opt.seed = derive_seed(seed, kOptimizerStream);
      opt.oracle_limit = std::max(opt.oracle_limit, n);
      const ContrastObjective objective(white.data, opt);
      const Vector angles = Vector::Constant(1, 0.3);

      std::vector<double> times;
      for (int rep = 0; rep < config.repetitions; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        volatile double sink = objective(angles);
        (void)sink;
        times.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      }
      std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
      const double median = times[times.size() / 2];
      result.points.push_back({method, n, median});
      xs.push_back(static_cast<double>(n));
      ys.push_back(median);
    }
    if (xs.size() >= 2) result.exponents[method] = fit_power_law(xs, ys);
  }
  return result;
}

std::map<std::pair<std::string, Method>, double> mean_amari(
    const std::vector<ExperimentRecord>& records) {
  std::map<std::pair<std::string, Method>, std::pair<double, int>> acc;
  for (const auto& r : records) {
    auto& slot = acc[{entry_of(r.source_labels), r.method}];
    slot.first += r.amari;
    slot.second += 1;
  }
  std::map<std::pair<std::string, Method>, double> out;
  for (const auto& [key, value] : acc) out[key] = value.first / value.second;
  return out;
}

namespace {

void write_header(std::ostream& out, const std::string& header) {
  if (header.empty()) return;
  std::istringstream lines(header);
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << '\n';
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records,
                       const std::string& header, bool with_outliers, bool with_runtime) {
  write_header(out, header);
  if (with_outliers) out << "outliers,";
  out << "source_labels,N,method,seed,amari_x100,runtime_s\n";
  for (const auto& r : records) {
    if (with_outliers) out << r.outliers << ',';
    out << r.source_labels << ',' << r.n << ',' << to_string(r.method) << ',' << r.seed << ','
        << format_double(100.0 * r.amari) << ','
        << (with_runtime ? fixed(r.runtime_seconds, 6) : std::string("NA")) << '\n';
  }
}

void write_outlier_summary_csv(std::ostream& out, const std::vector<OutlierSummaryRow>& rows,
                               const std::string& header) {
  write_header(out, header);
  out << "outliers,method,mean_amari_x100,replicates\n";
  for (const auto& r : rows) {
    out << r.outliers << ',' << to_string(r.method) << ',' << fixed(100.0 * r.mean_amari, 4) << ','
        << r.replicates << '\n';
  }
}

void write_scaling_csv(std::ostream& out, const ScalingResult& result, const std::string& header) {
  write_header(out, header);
  out << "method,N,median_seconds\n";
  for (const auto& p : result.points) {
    out << to_string(p.method) << ',' << p.n << ',' << format_double(p.median_seconds) << '\n';
  }
  for (const auto& [method, exponent] : result.exponents) {
    out << "# exponent " << to_string(method) << ' ' << fixed(exponent, 4) << '\n';
  }
}

SummaryTable summarize(const std::vector<ExperimentRecord>& records,
                       const std::vector<std::string>& pairs) {
  SummaryTable table;
  for (const auto& r : records) {
    if (std::find(table.methods.begin(), table.methods.end(), r.method) == table.methods.end()) {
      table.methods.push_back(r.method);
    }
  }
  std::sort(table.methods.begin(), table.methods.end());
  const auto means = mean_amari(records);

  std::vector<std::string> plain;
  bool has_rand = false;
  for (const auto& p : pairs) {
    if (p == kRandomPair) {
      has_rand = true;
    } else if (std::find(plain.begin(), plain.end(), p) == plain.end()) {
      plain.push_back(p);
    }
  }
  auto cell = [&](const std::string& entry, Method m) {
    const auto it = means.find({entry, m});
    return it == means.end() ? std::nan("") : 100.0 * it->second;
  };
  for (const auto& p : plain) {
    table.row_labels.push_back(p);
    std::vector<double> row;
    for (Method m : table.methods) row.push_back(cell(p, m));
    table.cells.push_back(std::move(row));
  }
  if (!plain.empty()) {
    table.row_labels.push_back("mean");
    std::vector<double> row;
    for (std::size_t c = 0; c < table.methods.size(); ++c) {
      double sum = 0.0;
      for (std::size_t r = 0; r < plain.size(); ++r) sum += table.cells[r][c];
      row.push_back(sum / static_cast<double>(plain.size()));
    }
    table.cells.push_back(std::move(row));
  }
  if (has_rand) {
    table.row_labels.push_back(kRandomPair);
    std::vector<double> row;
    for (Method m : table.methods) row.push_back(cell(kRandomPair, m));
    table.cells.push_back(std::move(row));
  }
  return table;
}

std::string format_summary(const SummaryTable& table) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "pdfs";
  for (Method m : table.methods) os << std::right << std::setw(10) << to_string(m);
  os << '\n';
  for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
    os << std::left << std::setw(8) << table.row_labels[r];
    for (double v : table.cells[r]) os << std::right << std::setw(10) << fixed(v, 2);
    os << '\n';
  }
  return os.str();
}

void write_summary_csv(std::ostream& out, const SummaryTable& table, const std::string& header) {
  write_header(out, header);
  out << "pdfs";
  for (Method m : table.methods) out << ',' << to_string(m);
  out << '\n';
  for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
    out << table.row_labels[r];
    for (double v : table.cells[r]) out << ',' << fixed(v, 4);
    out << '\n';
  }
}

}  // namespace rica
