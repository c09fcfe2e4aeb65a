#include "qoegap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qoegap {

void BoundConstants::validate() const {
  if (!(C > 0.0 && c > 0.0 && C_deg > 0.0) || !std::isfinite(C) || !std::isfinite(c) || !std::isfinite(C_deg)) {
    throw InputError("bound constants C, c, C_deg must be positive and finite");
  }
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::kServiceLimited:
      return "service-limited";
    case Regime::kStructureLimited:
      return "structure-limited";
    case Regime::kBalanced:
      return "balanced";
  }
  return "unknown";
}

Regime classify_regime(double a, double c_lambda2) {
  if (std::abs(a - c_lambda2) <= 0.01 * std::max(a, c_lambda2)) return Regime::kBalanced;
  return a < c_lambda2 ? Regime::kServiceLimited : Regime::kStructureLimited;
}

namespace {

void require_pairs(double M) {
  if (!(M >= 2.0)) throw InputError("bound: need M >= 2 pairs");
}

double log_slack_median(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double hi = v[mid];
  const double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

}  // namespace

BoundReport spectral_upper_bound(double lambda2, double r_star, const SlaParams& sla, double M,
                                 const BoundConstants& k) {
  require_pairs(M);
  sla.validate();
  k.validate();
  BoundReport rep;
  rep.H = sla.h0 - r_star;
  const DecayRate dr = decay_rate(sla.a, lambda2, k.c);
  rep.gamma = dr.gamma;
  rep.regime = dr.regime;
  rep.applicable = rep.H >= 0.0;
  if (rep.applicable) {
    rep.bound_I = k.C * (1.0 + sla.a * rep.H) / std::log(M) * std::exp(-rep.gamma * rep.H);
  }
  return rep;
}

double prefactor_free_bound(double lambda2, double r_star, const SlaParams& sla, double M, const BoundConstants& k) {
  require_pairs(M);
  const double H = sla.h0 - r_star;
  const double gamma = std::min(sla.a, k.c * lambda2);
  return k.C / std::log(M) * std::exp(-gamma * H);
}

JBoundTerms j_exponential_bound_terms(double lambda2, double r_star, const SlaParams& sla, const BoundConstants& k) {
  sla.validate();
  k.validate();
  const double H = sla.h0 - r_star;
  if (H < 0.0) throw InputError("j_exponential_bound: requires h0 >= r_star");
  const double cl = k.c * lambda2;
  JBoundTerms t;
  t.below = k.C * std::exp(-sla.a * H);
  t.middle = k.C * sla.a * H * std::exp(-std::min(sla.a, cl) * H);
  t.above = k.C * sla.a / (sla.a + cl) * std::exp(-cl * H);
  return t;
}

double j_exponential_bound(double lambda2, double r_star, const SlaParams& sla, const BoundConstants& k) {
  return j_exponential_bound_terms(lambda2, r_star, sla, k).total();
}

bool in_fit_set(const Observation& o, const FitOptions& opts) {
  if (!(o.I > 0.0) || o.h0 < o.r_star || !(o.M >= 2.0)) return false;
  if (opts.fit_families.empty()) return true;
  return std::find(opts.fit_families.begin(), opts.fit_families.end(), o.family) != opts.fit_families.end();
}

BoundConstants fit_constants(std::span<const Observation> observations, const FitOptions& opts) {
  std::vector<const Observation*> fit;
  for (const auto& o : observations) {
    if (in_fit_set(o, opts)) fit.push_back(&o);
  }
  if (fit.empty()) throw InputError("fit_constants: empty fit set");
  if (opts.grid_points < 1 || !(opts.c_min > 0.0) || !(opts.c_max >= opts.c_min)) {
    throw InputError("fit_constants: invalid c grid");
  }

  const auto grid = logspace(opts.c_min, opts.c_max, opts.grid_points);
  std::vector<double> log_ratio(fit.size());
  std::vector<double> slack(fit.size());
  double best_c = grid.front();
  double best_C = 0.0;
  double best_median = std::numeric_limits<double>::infinity();
  for (double c : grid) {
    double max_log_ratio = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fit.size(); ++i) {
      const Observation& o = *fit[i];
      const double H = o.h0 - o.r_star;
      const double gamma = std::min(o.a, c * o.lambda2);
      // ln(I ln M / ((1 + aH) e^{-gamma H}))
      log_ratio[i] = std::log(o.I) + std::log(std::log(o.M)) - std::log1p(o.a * H) + gamma * H;
      max_log_ratio = std::max(max_log_ratio, log_ratio[i]);
    }
    for (std::size_t i = 0; i < fit.size(); ++i) slack[i] = max_log_ratio - log_ratio[i];
    const double median = log_slack_median(slack);
    if (median < best_median) {
      best_median = median;
      best_c = c;
      best_C = std::exp(max_log_ratio);
    }
  }

  BoundConstants k;
  // Rounding margin so bounds recomputed from C never land below the data.
  k.C = best_C * (1.0 + 1e-12);
  k.c = best_c;
  k.C_deg = opts.C_deg;
  std::ostringstream prov;
  prov << "fit on " << fit.size() << " observations";
  if (!opts.fit_families.empty()) {
    prov << " from families {";
    for (std::size_t i = 0; i < opts.fit_families.size(); ++i) prov << (i ? "," : "") << opts.fit_families[i];
    prov << "}";
  }
  prov << "; c grid logspace[" << opts.c_min << "," << opts.c_max << "] x " << opts.grid_points
       << "; median log-slack " << best_median;
  k.provenance = prov.str();
  return k;
}

TailEnvelopeReport tail_envelope_check(const TailProfile& profile, double lambda2, const BoundConstants& k) {
  k.validate();
  TailEnvelopeReport rep;
  rep.slack.resize(profile.tau.size());
  for (std::size_t r = 0; r < profile.tau.size(); ++r) {
    const double excess = std::max(0.0, static_cast<double>(r) - static_cast<double>(profile.r_star));
    rep.slack[r] = k.C * std::exp(-k.c * lambda2 * excess) - profile.tau[r];
    if (rep.slack[r] < 0.0) ++rep.breaches;
  }
  return rep;
}

Certificate data_driven_certificate(const TailProfile& profile, const SlaParams& sla, double M) {
  sla.validate();
  require_pairs(M);
  if (sla.h0 < 1.0) throw InputError("data_driven_certificate: requires h0 >= 1");

  Certificate cert;
  cert.j_bound = std::numeric_limits<double>::infinity();
  const auto r_max = static_cast<Hop>(std::floor(sla.h0));
  for (Hop r = 0; r <= r_max; ++r) {
    const double j = profile.at(r) + std::exp(-sla.a * (sla.h0 - r));
    if (j < cert.j_bound) {
      cert.j_bound = j;
      cert.radius = r;
    }
  }
  const double log_m = std::log(M);
  if (cert.j_bound <= 0.5) {
    cert.valid = true;
    cert.bound = 2.0 * cert.j_bound / log_m;
  } else if (cert.j_bound < 1.0) {
    cert.general_form = true;
    cert.bound = cert.j_bound / (1.0 - cert.j_bound) / log_m;
  } else {
    cert.bound = std::numeric_limits<double>::infinity();
  }
  return cert;
}

DecayRate decay_rate(double a, double lambda2, double c) {
  if (!(a > 0.0) || !(lambda2 > 0.0) || !(c > 0.0)) throw InputError("decay_rate: inputs must be positive");
  const double cl = c * lambda2;
  return {std::min(a, cl), classify_regime(a, cl)};
}

std::vector<PhaseCell> phase_diagram(std::span<const double> a_grid, std::span<const double> lambda2_grid, double c) {
  if (a_grid.empty() || lambda2_grid.empty()) throw InputError("phase_diagram: grids must be non-empty");
  std::vector<PhaseCell> cells;
  cells.reserve(a_grid.size() * lambda2_grid.size());
  for (double l2 : lambda2_grid) {
    for (double a : a_grid) {
      const DecayRate dr = decay_rate(a, l2, c);
      cells.push_back({a, l2, c * l2, dr.gamma, dr.regime});
    }
  }
  return cells;
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw InputError("logspace: need 0 < lo <= hi and count >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double l0 = std::log(lo);
  const double step = (std::log(hi) - l0) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::exp(l0 + step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {

void require_target(double I_target) {
  if (!(I_target > 0.0 && I_target < 1.0)) throw InputError("reverse design: target I must lie in (0, 1)");
}

}  // namespace

double reverse_design_h0(double I_target, double lambda2, double r_star, double a, double M, const BoundConstants& k) {
  require_target(I_target);
  require_pairs(M);
  k.validate();
  const double gamma = decay_rate(a, lambda2, k.c).gamma;
  const double increment = (std::log(k.C / I_target) - std::log(std::log(M))) / gamma;
  return r_star + std::max(0.0, increment);
}

double reverse_design_lambda2(double I_target, double h0, double r_star, double M, const BoundConstants& k) {
  require_target(I_target);
  require_pairs(M);
  k.validate();
  if (!(h0 > r_star)) throw InputError("reverse_design_lambda2: requires h0 > r_star");
  const double need = (std::log(k.C / I_target) - std::log(std::log(M))) / (k.c * (h0 - r_star));
  return std::max(0.0, need);
}

}  // namespace qoegap
