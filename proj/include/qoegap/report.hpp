#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qoegap/experiments.hpp"

namespace qoegap {

using nlohmann::json;

// "%.17g"; non-finite values print as inf, -inf or nan.
std::string format_number(double v);

// Writes a '#'-prefixed config line, the header, then rows. Fields
// containing commas or quotes are quoted.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const json& config, std::vector<std::string> header);

  CsvWriter& field(const std::string& s);
  CsvWriter& field(const char* s) { return field(std::string(s)); }
  CsvWriter& field(double v);
  CsvWriter& field(std::uint64_t v);
  CsvWriter& field(std::int64_t v);
  CsvWriter& field(int v) { return field(static_cast<std::int64_t>(v)); }
  CsvWriter& field(bool v);
  CsvWriter& empty();
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t current_ = 0;
};

json to_json(const SlaParams& sla);
json to_json(const BoundConstants& k);
json to_json(const FairnessReport& f);
json to_json(const Certificate& c);

// Reads {"C": .., "c": .., "C_deg": .., "provenance": ..}; missing keys keep
// their defaults.
BoundConstants constants_from_json(const json& j);

// Top level {graph, spectral, fairness, bounds, config}.
json analysis_json(const AnalysisResult& r, const json& config);

json envelope_summary_json(const EnvelopeResult& r);

void write_envelope_csv(std::ostream& out, std::span<const EnvelopeRow> rows, const json& config);
void write_phase_csv(std::ostream& out, std::span<const PhaseCell> cells, const json& config);
void write_certify_csv(std::ostream& out, std::span<const CertifyRow> rows, const json& config);
void write_trajectory_csv(std::ostream& out, std::span<const InterventionRecord> records, const json& config);
void write_reverse_h0_csv(std::ostream& out, const ReverseResult& r, const json& config);

}  // namespace qoegap
