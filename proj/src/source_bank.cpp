#include "rica/source_bank.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

namespace rica {

std::string to_string(SourceFamily family) {
  switch (family) {
    case SourceFamily::StudentT: return "student-t";
    case SourceFamily::DoubleExponential: return "double-exponential";
    case SourceFamily::Uniform: return "uniform";
    case SourceFamily::Exponential: return "exponential";
    case SourceFamily::GaussianMixture: return "gaussian-mixture";
  }
  return "unknown";
}

namespace {

SourceSpec simple(char label, SourceFamily family, std::string description, double dof = 0.0) {
  SourceSpec s;
  s.label = label;
  s.family = family;
  s.dof = dof;
  s.description = std::move(description);
  return s;
}

SourceSpec mixture(char label, std::vector<double> w, std::vector<double> mu,
                   std::vector<double> sd, std::string description, bool near_gaussian = false) {
  SourceSpec s;
  s.label = label;
  s.family = SourceFamily::GaussianMixture;
  s.mixture = {std::move(w), std::move(mu), std::move(sd)};
  s.description = std::move(description);
  s.near_gaussian = near_gaussian;
  return s;
}

std::vector<SourceSpec> build_catalog() {
  using F = SourceFamily;
  const std::vector<double> four{-3.0, -1.0, 1.0, 3.0};
  return {
      simple('a', F::StudentT, "Student-t, 3 dof", 3.0),
      simple('b', F::DoubleExponential, "double exponential"),
      simple('c', F::Uniform, "uniform"),
      simple('d', F::StudentT, "Student-t, 5 dof", 5.0),
      simple('e', F::Exponential, "exponential"),
      mixture('f', {0.5, 0.5}, {0.0, 0.0}, {1.0, 0.25}, "symmetric 2-Gaussian scale mixture"),
      mixture('g', {0.5, 0.5}, {-1.5, 1.5}, {0.5, 0.5}, "symmetric 2-Gaussian, multimodal"),
      mixture('h', {0.5, 0.5}, {-1.0, 1.0}, {0.75, 0.75}, "symmetric 2-Gaussian, transitional"),
      mixture('i', {0.5, 0.5}, {-0.5, 0.5}, {1.0, 1.0}, "symmetric 2-Gaussian, unimodal", true),
      mixture('j', {0.3, 0.7}, {-2.0, 1.0}, {0.5, 0.5}, "asymmetric 2-Gaussian, multimodal"),
      mixture('k', {0.3, 0.7}, {-1.2, 0.6}, {0.7, 0.7}, "asymmetric 2-Gaussian, transitional"),
      mixture('l', {0.2, 0.8}, {-1.5, 0.3}, {1.0, 1.0}, "asymmetric 2-Gaussian, unimodal", true),
      mixture('m', {1, 1, 1, 1}, four, {0.4, 0.4, 0.4, 0.4}, "symmetric 4-Gaussian, multimodal"),
      mixture('n', {1, 1, 1, 1}, four, {0.8, 0.8, 0.8, 0.8}, "symmetric 4-Gaussian, transitional"),
      mixture('o', {1, 2, 2, 1}, four, {1.2, 1.2, 1.2, 1.2}, "symmetric 4-Gaussian, unimodal"),
      mixture('p', {1, 2, 3, 4}, four, {0.4, 0.4, 0.4, 0.4}, "asymmetric 4-Gaussian, multimodal"),
      mixture('q', {1, 2, 3, 4}, four, {0.8, 0.8, 0.8, 0.8}, "asymmetric 4-Gaussian, transitional"),
      mixture('r', {1, 2, 3, 4}, four, {1.2, 1.2, 1.2, 1.2}, "asymmetric 4-Gaussian, unimodal"),
  };
}

double weight_sum(const GaussianMixtureParams& p) {
  return std::accumulate(p.weights.begin(), p.weights.end(), 0.0);
}

}  // namespace

double SourceSpec::mean() const {
  switch (family) {
    case SourceFamily::StudentT:
    case SourceFamily::DoubleExponential:
    case SourceFamily::Uniform: return 0.0;
    case SourceFamily::Exponential: return 1.0;
    case SourceFamily::GaussianMixture: {
      const double total = weight_sum(mixture);
      double m = 0.0;
      for (std::size_t k = 0; k < mixture.weights.size(); ++k) {
        m += mixture.weights[k] / total * mixture.means[k];
      }
      return m;
    }
  }
  return 0.0;
}

double SourceSpec::variance() const {
  switch (family) {
    case SourceFamily::StudentT: return dof / (dof - 2.0);
    case SourceFamily::DoubleExponential: return 2.0;
    case SourceFamily::Uniform: return 1.0 / 3.0;
    case SourceFamily::Exponential: return 1.0;
    case SourceFamily::GaussianMixture: {
      const double total = weight_sum(mixture);
      const double m = mean();
      double second = 0.0;
      for (std::size_t k = 0; k < mixture.weights.size(); ++k) {
        const double mu = mixture.means[k];
        const double sd = mixture.sds[k];
        second += mixture.weights[k] / total * (sd * sd + mu * mu);
      }
      return second - m * m;
    }
  }
  return 1.0;
}

const std::vector<SourceSpec>& catalog() {
  static const std::vector<SourceSpec> specs = build_catalog();
  return specs;
}

const SourceSpec& find_source(char label) {
  if (label < 'a' || label > 'r') {
    throw Error(ErrorCode::InvalidArgument, std::string("unknown source label '") + label + "'");
  }
  return catalog()[static_cast<std::size_t>(label - 'a')];
}

Vector sample_source(const SourceSpec& spec, Index n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  std::mt19937_64 rng(seed);
  Vector out(n);
  switch (spec.family) {
    case SourceFamily::StudentT: {
      std::student_t_distribution<double> dist(spec.dof);
      for (Index k = 0; k < n; ++k) out(k) = dist(rng);
      break;
    }
    case SourceFamily::DoubleExponential: {
      std::exponential_distribution<double> mag(1.0);
      std::bernoulli_distribution sign(0.5);
      for (Index k = 0; k < n; ++k) {
        const double e = mag(rng);
        out(k) = sign(rng) ? e : -e;
      }
      break;
    }
    case SourceFamily::Uniform: {
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      for (Index k = 0; k < n; ++k) out(k) = dist(rng);
      break;
    }
    case SourceFamily::Exponential: {
      std::exponential_distribution<double> dist(1.0);
      for (Index k = 0; k < n; ++k) out(k) = dist(rng);
      break;
    }
    case SourceFamily::GaussianMixture: {
      const auto& p = spec.mixture;
      std::discrete_distribution<std::size_t> component(p.weights.begin(), p.weights.end());
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Index k = 0; k < n; ++k) {
        const std::size_t c = component(rng);
        out(k) = p.means[c] + p.sds[c] * normal(rng);
      }
      break;
    }
  }
  return (out.array() - spec.mean()) / std::sqrt(spec.variance());
}

std::string format_catalog() {
  std::ostringstream os;
  os << std::left << std::setw(7) << "label" << std::setw(20) << "family"
     << std::setw(42) << "description"
     << "parameters\n";
  for (const auto& s : catalog()) {
    std::ostringstream params;
    switch (s.family) {
      case SourceFamily::StudentT: params << "dof=" << s.dof; break;
      case SourceFamily::GaussianMixture: {
        const auto& p = s.mixture;
        for (std::size_t k = 0; k < p.weights.size(); ++k) {
          if (k) params << ' ';
          params << '(' << p.weights[k] << ',' << p.means[k] << ',' << p.sds[k] << ')';
        }
        if (s.near_gaussian) params << " near-Gaussian";
        break;
      }
      default: params << '-'; break;
    }
    os << std::left << std::setw(7) << s.label << std::setw(20) << to_string(s.family)
       << std::setw(42) << s.description << params.str() << '\n';
  }
  return os.str();
}

}  // namespace rica
