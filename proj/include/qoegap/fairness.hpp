#pragma once

#include <cstdint>
#include <span>

#include "qoegap/distances.hpp"
#include "qoegap/graph.hpp"

namespace qoegap {

// Logistic SLA: evaluation stringency a (per hop) and hop threshold h0.
struct SlaParams {
  double a = 1.0;
  double h0 = 1.0;

  // Throws InputError unless a > 0 and h0 > 0 (both finite).
  void validate() const;
};

// w(h) = 1 / (1 + exp(a (h - h0))), evaluated without overflow.
double satisfaction_weight(double h, const SlaParams& sla);
// 1 - w(h), computed directly rather than by subtraction.
double dissatisfaction(double h, const SlaParams& sla);

enum class FairnessMode { kExact, kSampled };

struct FairnessReport {
  double I = 0.0;        // D_KL(p || u) / ln M
  double entropy = 0.0;  // H(p) in nats
  double W = 0.0;        // total weight sum_k w_k
  double J = 0.0;        // mean dissatisfaction under the uniform pair law
  std::uint64_t M = 0;
  FairnessMode mode = FairnessMode::kExact;
  std::uint64_t samples = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

// Imbalance index from an exact histogram. Weights depend on a pair only
// through its hop distance, so the sums over pairs collapse onto distance
// classes. Throws InputError for a sampled histogram or M < 2.
FairnessReport imbalance_index(const DistanceHistogram& hist, const SlaParams& sla);

struct SampledFairnessOptions {
  SamplingOptions sampling;
  double alpha = 0.5;  // Dirichlet smoothing per distance class
};

// Estimate from m uniformly sampled pairs. Class frequencies are smoothed
// over classes 1..K where K is the largest eccentricity observed during
// sampling, i.e. every class known to be non-empty. Falls back to the exact
// computation when m >= M.
FairnessReport imbalance_index_sampled(const Graph& g, const SlaParams& sla, const SampledFairnessOptions& opts);

// J = (1/M) sum_h N_h (1 - w(h)).
double average_tail_J(const DistanceHistogram& hist, const SlaParams& sla);

struct Divergences {
  double kl = 0.0;
  double chi2 = 0.0;
  double tv = 0.0;
};

// D_KL(p||u), chi^2(p||u) and D_TV(p, u) over distance classes.
Divergences divergences_vs_uniform(const DistanceHistogram& hist, const SlaParams& sla);

// Collapsed evaluation over class masses: mass[h] pairs at distance h (may be
// fractional for smoothed estimates), M total pairs.
FairnessReport fairness_from_classes(std::span<const double> mass, double M, const SlaParams& sla);

}  // namespace qoegap
