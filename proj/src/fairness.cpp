#include "qoegap/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qoegap {

void SlaParams::validate() const {
  if (!(std::isfinite(a) && a > 0.0)) throw InputError("SLA stringency a must be positive and finite");
  if (!(std::isfinite(h0) && h0 > 0.0)) throw InputError("SLA threshold h0 must be positive and finite");
}

namespace {

// logistic(x) = 1 / (1 + e^{-x}) without overflow.
double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// ln w(h) = -softplus(a (h - h0)).
double log_weight(double h, const SlaParams& sla) {
  const double x = sla.a * (h - sla.h0);
  return x > 0.0 ? -(x + std::log1p(std::exp(-x))) : -std::log1p(std::exp(x));
}

std::vector<double> masses(const DistanceHistogram& hist) {
  std::vector<double> m(hist.counts.size());
  for (std::size_t h = 0; h < m.size(); ++h) m[h] = static_cast<double>(hist.counts[h]);
  return m;
}

void require_exact(const DistanceHistogram& hist, const char* who) {
  if (hist.mode != HistogramMode::kExact) {
    throw InputError(std::string(who) + ": requires an exact histogram (use imbalance_index_sampled)");
  }
  if (hist.pair_count < 2) throw InputError(std::string(who) + ": need M >= 2 pairs");
}

// Per-class probability times M, p_h M = w_h M / W, with weights rescaled by
// the largest class weight so that a single class gives exactly 1.
struct ClassRatios {
  std::vector<double> ratio;  // p_h * M, zero for empty classes
};

ClassRatios class_ratios(std::span<const double> mass, double M, const SlaParams& sla) {
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t h = 1; h < mass.size(); ++h) {
    if (mass[h] > 0.0) max_log = std::max(max_log, log_weight(static_cast<double>(h), sla));
  }
  std::vector<double> scaled(mass.size(), 0.0);
  double total = 0.0;
  for (std::size_t h = 1; h < mass.size(); ++h) {
    if (mass[h] <= 0.0) continue;
    scaled[h] = std::exp(log_weight(static_cast<double>(h), sla) - max_log);
    total += mass[h] * scaled[h];
  }
  ClassRatios out;
  out.ratio.assign(mass.size(), 0.0);
  for (std::size_t h = 1; h < mass.size(); ++h) {
    if (mass[h] > 0.0) out.ratio[h] = scaled[h] * M / total;
  }
  return out;
}

}  // namespace

double satisfaction_weight(double h, const SlaParams& sla) { return logistic(-sla.a * (h - sla.h0)); }

double dissatisfaction(double h, const SlaParams& sla) { return logistic(sla.a * (h - sla.h0)); }

FairnessReport fairness_from_classes(std::span<const double> mass, double M, const SlaParams& sla) {
  sla.validate();
  if (!(M >= 2.0)) throw InputError("imbalance index: need M >= 2 pairs");
  const ClassRatios cr = class_ratios(mass, M, sla);

  double kl = 0.0;
  double weight = 0.0;
  double tail = 0.0;
  for (std::size_t h = 1; h < mass.size(); ++h) {
    if (mass[h] <= 0.0) continue;
    const double r = cr.ratio[h];
    // p_h ln(p_h M) per pair, 0 ln 0 = 0.
    if (r > 0.0) kl += mass[h] * (r / M) * std::log(r);
    weight += mass[h] * satisfaction_weight(static_cast<double>(h), sla);
    tail += mass[h] * dissatisfaction(static_cast<double>(h), sla);
  }
  // KL is non-negative; clamp rounding noise at the uniform point.
  kl = std::max(kl, 0.0);
  const double log_m = std::log(M);

  FairnessReport rep;
  rep.I = std::min(kl / log_m, 1.0);
  rep.entropy = log_m - kl;
  rep.W = weight;
  rep.J = tail / M;
  rep.M = static_cast<std::uint64_t>(std::llround(M));
  return rep;
}

FairnessReport imbalance_index(const DistanceHistogram& hist, const SlaParams& sla) {
  require_exact(hist, "imbalance_index");
  const auto m = masses(hist);
  return fairness_from_classes(m, static_cast<double>(hist.pair_count), sla);
}

FairnessReport imbalance_index_sampled(const Graph& g, const SlaParams& sla, const SampledFairnessOptions& opts) {
  sla.validate();
  if (opts.sampling.samples == 0) throw InputError("imbalance_index_sampled: need m >= 1");
  if (!(opts.alpha >= 0.0)) throw InputError("imbalance_index_sampled: alpha must be non-negative");
  const std::uint64_t M = pair_count(g.node_count());

  FairnessReport rep;
  if (opts.sampling.samples >= M) {
    rep = imbalance_index(distance_histogram_exact(g), sla);
  } else {
    const DistanceHistogram hist = distance_histogram_sampled(g, opts.sampling);
    const std::size_t classes =
        std::max<std::size_t>(static_cast<std::size_t>(hist.eccentricity_floor), hist.counts.size() - 1);
    const double denom = static_cast<double>(hist.total) + opts.alpha * static_cast<double>(classes);
    std::vector<double> mass(classes + 1, 0.0);
    for (std::size_t h = 1; h <= classes; ++h) {
      mass[h] = (static_cast<double>(hist.at(static_cast<Hop>(h))) + opts.alpha) / denom * static_cast<double>(M);
    }
    rep = fairness_from_classes(mass, static_cast<double>(M), sla);
  }
  rep.mode = FairnessMode::kSampled;
  rep.samples = opts.sampling.samples;
  rep.alpha = opts.alpha;
  rep.seed = opts.sampling.seed;
  return rep;
}

double average_tail_J(const DistanceHistogram& hist, const SlaParams& sla) {
  require_exact(hist, "average_tail_J");
  sla.validate();
  double tail = 0.0;
  for (std::size_t h = 1; h < hist.counts.size(); ++h) {
    tail += static_cast<double>(hist.counts[h]) * dissatisfaction(static_cast<double>(h), sla);
  }
  return tail / static_cast<double>(hist.pair_count);
}

Divergences divergences_vs_uniform(const DistanceHistogram& hist, const SlaParams& sla) {
  require_exact(hist, "divergences_vs_uniform");
  sla.validate();
  const auto mass = masses(hist);
  const double M = static_cast<double>(hist.pair_count);
  const ClassRatios cr = class_ratios(mass, M, sla);
  Divergences d;
  double abs_dev = 0.0;
  for (std::size_t h = 1; h < mass.size(); ++h) {
    if (mass[h] <= 0.0) continue;
    const double r = cr.ratio[h];
    if (r > 0.0) d.kl += mass[h] * (r / M) * std::log(r);
    // chi^2 = sum_k (p_k - 1/M)^2 M = sum_h N_h (p_h M - 1)^2 / M
    d.chi2 += mass[h] * (r - 1.0) * (r - 1.0) / M;
    abs_dev += mass[h] * std::abs(r - 1.0);
  }
  d.kl = std::max(d.kl, 0.0);
  d.tv = abs_dev / (2.0 * M);
  return d;
}

}  // namespace qoegap
