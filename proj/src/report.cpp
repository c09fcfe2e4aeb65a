#include "qoegap/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace qoegap {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const json& config, std::vector<std::string> header)
    : out_(out), columns_(header.size()) {
  out_ << "# config: " << config.dump() << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

CsvWriter& CsvWriter::field(const std::string& s) {
  if (current_ > 0) out_ << ',';
  if (s.find_first_of(",\"\n") != std::string::npos) {
    out_ << '"';
    for (char ch : s) {
      if (ch == '"') out_ << '"';
      out_ << ch;
    }
    out_ << '"';
  } else {
    out_ << s;
  }
  ++current_;
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_number(v)); }
CsvWriter& CsvWriter::field(std::uint64_t v) { return field(std::to_string(v)); }
CsvWriter& CsvWriter::field(std::int64_t v) { return field(std::to_string(v)); }
CsvWriter& CsvWriter::field(bool v) { return field(v ? "1" : "0"); }
CsvWriter& CsvWriter::empty() { return field(std::string()); }

void CsvWriter::end_row() {
  if (current_ != columns_) {
    throw std::logic_error("CsvWriter: row has " + std::to_string(current_) + " fields, header has " +
                           std::to_string(columns_));
  }
  out_ << '\n';
  current_ = 0;
}

json to_json(const SlaParams& sla) { return {{"a", sla.a}, {"h0", sla.h0}}; }

json to_json(const BoundConstants& k) {
  return {{"C", k.C}, {"c", k.c}, {"C_deg", k.C_deg}, {"provenance", k.provenance}};
}

json to_json(const FairnessReport& f) {
  json j = {{"I", f.I}, {"entropy", f.entropy}, {"W", f.W}, {"J", f.J}, {"M", f.M},
            {"mode", f.mode == FairnessMode::kExact ? "exact" : "sampled"}};
  if (f.mode == FairnessMode::kSampled) {
    j["samples"] = f.samples;
    j["alpha"] = f.alpha;
    j["seed"] = f.seed;
  }
  return j;
}

json to_json(const Certificate& c) {
  json j = {{"radius", c.radius}, {"j_bound", c.j_bound}, {"valid", c.valid}, {"general_form", c.general_form}};
  // JSON has no infinity; an absent certificate is null.
  j["bound_I"] = std::isfinite(c.bound) ? json(c.bound) : json(nullptr);
  return j;
}

BoundConstants constants_from_json(const json& j) {
  BoundConstants k;
  if (!j.is_object()) throw InputError("constants: expected a JSON object");
  k.C = j.value("C", k.C);
  k.c = j.value("c", k.c);
  k.C_deg = j.value("C_deg", k.C_deg);
  k.provenance = j.value("provenance", std::string("user supplied"));
  k.validate();
  return k;
}

json analysis_json(const AnalysisResult& r, const json& config) {
  json out;
  out["graph"] = {{"id", r.graph_id}, {"n", r.n}, {"m", r.m}, {"model", r.model}, {"seed", r.seed},
                  {"raw_n", r.raw_n}, {"raw_m", r.raw_m}};

  json spectral = {{"lambda2", r.spectral.lambda2},
                   {"residual", r.spectral.residual},
                   {"iterations", r.spectral.iterations},
                   {"delta_max", r.spectral.delta_max},
                   {"delta_min", r.spectral.delta_min},
                   {"beta", r.spectral.beta.value()},
                   {"fiedler", r.spectral.fiedler}};
  spectral["r_star"] = r.r_star ? json(*r.r_star) : json(nullptr);
  if (r.profile) {
    spectral["diameter"] = r.profile->r_max();
    spectral["tau"] = r.profile->tau;
  }
  out["spectral"] = spectral;

  json fairness = to_json(r.fairness);
  if (r.divergences) {
    fairness["kl"] = r.divergences->kl;
    fairness["chi2"] = r.divergences->chi2;
    fairness["tv"] = r.divergences->tv;
  }
  out["fairness"] = fairness;

  json bounds = {{"constants", to_json(r.constants)}};
  if (r.bound) {
    bounds["H"] = r.bound->H;
    bounds["gamma"] = r.bound->gamma;
    bounds["applicable"] = r.bound->applicable;
    bounds["regime"] = to_string(r.bound->regime);
    bounds["bound_I"] = r.bound->bound_I ? json(*r.bound->bound_I) : json(nullptr);
  }
  if (r.j_bound) bounds["j_bound"] = *r.j_bound;
  if (r.certificate) bounds["certificate"] = to_json(*r.certificate);
  out["bounds"] = bounds;
  out["config"] = config;
  return out;
}

json envelope_summary_json(const EnvelopeResult& r) {
  json tails = json::array();
  for (const auto& t : r.tails) {
    tails.push_back({{"graph_id", t.graph_id}, {"model", t.model}, {"fit_set", t.fit_set}, {"breaches", t.breaches}});
  }
  return {{"constants", to_json(r.constants)},
          {"fit_points", r.fit_points},
          {"fit_breaches", r.fit_breaches},
          {"fit_breach_rate", r.fit_breach_rate()},
          {"held_out_points", r.held_points},
          {"held_out_breaches", r.held_breaches},
          {"held_out_breach_rate", r.held_breach_rate()},
          {"tail_envelope", tails}};
}

void write_envelope_csv(std::ostream& out, std::span<const EnvelopeRow> rows, const json& config) {
  CsvWriter w(out, config,
              {"graph_id", "model", "n", "lambda2", "r_star", "a", "h0", "H", "gamma", "x", "I", "ln_I", "bound_I",
               "breach"});
  for (const auto& r : rows) {
    w.field(r.graph_id).field(r.model).field(std::uint64_t{r.n}).field(r.lambda2).field(r.r_star).field(r.a);
    w.field(r.h0).field(r.H).field(r.gamma).field(r.x).field(r.I).field(r.ln_I).field(r.bound_I).field(r.breach);
    w.end_row();
  }
}

void write_phase_csv(std::ostream& out, std::span<const PhaseCell> cells, const json& config) {
  CsvWriter w(out, config, {"a", "lambda2", "c_lambda2", "gamma", "regime"});
  for (const auto& c : cells) {
    w.field(c.a).field(c.lambda2).field(c.c_lambda2).field(c.gamma).field(to_string(c.regime));
    w.end_row();
  }
}

void write_certify_csv(std::ostream& out, std::span<const CertifyRow> rows, const json& config) {
  CsvWriter w(out, config,
              {"graph_id", "model", "n", "M", "I", "J", "certificate", "radius", "j_bound", "valid", "general_form",
               "dominates"});
  for (const auto& r : rows) {
    w.field(r.graph_id).field(r.model).field(std::uint64_t{r.n}).field(r.M).field(r.I).field(r.J);
    w.field(r.certificate.bound).field(r.certificate.radius).field(r.certificate.j_bound);
    w.field(r.certificate.valid).field(r.certificate.general_form).field(r.dominates);
    w.end_row();
  }
}

void write_trajectory_csv(std::ostream& out, std::span<const InterventionRecord> records, const json& config) {
  CsvWriter w(out, config, {"step", "strategy", "i", "j", "lambda2", "I", "score", "condition"});
  for (const auto& r : records) {
    w.field(std::uint64_t{r.step}).field(to_string(r.strategy));
    if (r.edge) {
      w.field(std::uint64_t{r.edge->first}).field(std::uint64_t{r.edge->second});
    } else {
      w.empty().empty();
    }
    w.field(r.lambda2_after).field(r.I_after);
    if (r.fiedler_score) {
      w.field(*r.fiedler_score);
    } else {
      w.empty();
    }
    if (r.condition_holds) {
      w.field(*r.condition_holds);
    } else {
      w.empty();
    }
    w.end_row();
  }
}

void write_reverse_h0_csv(std::ostream& out, const ReverseResult& r, const json& config) {
  CsvWriter w(out, config,
              {"graph_id", "lambda2", "r_star", "target_I", "h0_theory", "h0_empirical", "I_at_empirical", "ordered"});
  for (const auto& row : r.rows) {
    w.field(r.graph_id).field(r.lambda2).field(r.r_star).field(row.target).field(row.h0_theory);
    if (row.h0_empirical) {
      w.field(*row.h0_empirical).field(row.I_at_empirical);
    } else {
      w.empty().empty();
    }
    w.field(row.ordered);
    w.end_row();
  }
}

}  // namespace qoegap
