#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qoegap/distances.hpp"
#include "qoegap/fairness.hpp"

namespace qoegap {

// Constants of the exponential spectral bound. C and c are fitted; C_deg is
// the configured constant of the edge-addition condition.
struct BoundConstants {
  double C = 1.0;
  double c = 1.0;
  double C_deg = 0.5;
  std::string provenance = "default";

  void validate() const;
};

enum class Regime { kServiceLimited, kStructureLimited, kBalanced };

const char* to_string(Regime r);

// Service-limited when a < c*lambda2, structure-limited when a > c*lambda2,
// balanced when the two are within 1% of the larger.
Regime classify_regime(double a, double c_lambda2);

struct BoundReport {
  double H = 0.0;      // h0 - r_star
  double gamma = 0.0;  // min(a, c lambda2)
  std::optional<double> bound_I;  // absent when not applicable
  bool applicable = false;        // h0 >= r_star
  Regime regime = Regime::kBalanced;
};

// I <= C (1 + aH) / ln M * exp(-min(a, c lambda2) H) with H = h0 - r_star.
BoundReport spectral_upper_bound(double lambda2, double r_star, const SlaParams& sla, double M,
                                 const BoundConstants& k);

// The same bound without the (1 + aH) pre-factor, as used by reverse design.
double prefactor_free_bound(double lambda2, double r_star, const SlaParams& sla, double M, const BoundConstants& k);

struct JBoundTerms {
  double below = 0.0;   // C e^{-aH}
  double middle = 0.0;  // C aH e^{-min(a, c lambda2) H}
  double above = 0.0;   // C a / (a + c lambda2) e^{-c lambda2 H}
  double total() const noexcept { return below + middle + above; }
};

JBoundTerms j_exponential_bound_terms(double lambda2, double r_star, const SlaParams& sla, const BoundConstants& k);
double j_exponential_bound(double lambda2, double r_star, const SlaParams& sla, const BoundConstants& k);

struct Observation {
  double I = 0.0;
  double lambda2 = 0.0;
  double r_star = 0.0;
  double a = 0.0;
  double h0 = 0.0;
  double M = 0.0;
  std::string family;
};

struct FitOptions {
  double c_min = 1e-3;
  double c_max = 10.0;
  std::size_t grid_points = 200;
  double C_deg = 0.5;
  // Families used for fitting; empty means every observation.
  std::vector<std::string> fit_families;
};

// Grid search over log-spaced c. For each c, C(c) is the smallest constant
// with no breach on the fit set; the chosen c minimizes the median log-slack.
// Observations with h0 < r_star or I <= 0 are skipped. Throws InputError if
// nothing remains to fit.
BoundConstants fit_constants(std::span<const Observation> observations, const FitOptions& opts = {});

bool in_fit_set(const Observation& o, const FitOptions& opts);

struct TailEnvelopeReport {
  std::vector<double> slack;  // C e^{-c lambda2 [r - r_star]_+} - tau_r
  std::size_t breaches = 0;
};

TailEnvelopeReport tail_envelope_check(const TailProfile& profile, double lambda2, const BoundConstants& k);

struct Certificate {
  double bound = 0.0;   // upper bound on I; +inf if no finite certificate
  Hop radius = 0;       // minimizing r
  double j_bound = 0.0; // tau_r + e^{-a(h0 - r)} at the minimizer
  bool valid = false;   // j_bound <= 1/2, factor-2 form used
  bool general_form = false;  // j_bound in (1/2, 1): J/(1-J) form used
};

// Spectral-free certificate minimized over integer r in [0, floor(h0)].
Certificate data_driven_certificate(const TailProfile& profile, const SlaParams& sla, double M);

struct DecayRate {
  double gamma = 0.0;
  Regime regime = Regime::kBalanced;
};

DecayRate decay_rate(double a, double lambda2, double c);

struct PhaseCell {
  double a = 0.0;
  double lambda2 = 0.0;
  double c_lambda2 = 0.0;
  double gamma = 0.0;
  Regime regime = Regime::kBalanced;
};

std::vector<PhaseCell> phase_diagram(std::span<const double> a_grid, std::span<const double> lambda2_grid, double c);

// count points spaced evenly in log between lo and hi inclusive.
std::vector<double> logspace(double lo, double hi, std::size_t count);

// Smallest h0 for which the pre-factor-free bound reaches I_target; r_star
// when the logarithmic increment is not positive.
double reverse_design_h0(double I_target, double lambda2, double r_star, double a, double M, const BoundConstants& k);

// Spectral gap for which the pre-factor-free bound reaches I_target in the
// structure-limited regime; 0 when no increase is needed. Requires h0 > r_star.
double reverse_design_lambda2(double I_target, double h0, double r_star, double M, const BoundConstants& k);

}  // namespace qoegap
