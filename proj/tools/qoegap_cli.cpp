// qoegap: analysis and experiment driver. Every subcommand writes plot-ready
// CSV/JSON into the output directory plus a manifest describing the files.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qoegap/experiments.hpp"
#include "qoegap/report.hpp"

namespace fs = std::filesystem;
using namespace qoegap;

namespace {

struct Common {
  std::vector<std::string> graphs;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string constants_file;
  double tol = 1e-8;
};

struct ManifestEntry {
  std::string file;
  std::string kind;
  std::string x;
  std::string y;
  std::string title;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class Output {
 public:
  Output(const std::string& dir, json config) : dir_(dir), config_(std::move(config)) {
    fs::create_directories(dir_);
    config_["config_hash"] = hex(fnv1a(config_.dump()));
  }

  const json& config() const { return config_; }

  std::ofstream open(const std::string& name) {
    std::ofstream f(dir_ / name);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    return f;
  }

  void write_json(const std::string& name, const json& j) {
    auto f = open(name);
    f << j.dump(2) << '\n';
    if (!f) throw std::runtime_error("write failed: " + name);
  }

  void add(ManifestEntry e) { entries_.push_back(std::move(e)); }

  void finish() {
    json files = json::array();
    for (const auto& e : entries_) {
      files.push_back({{"file", e.file}, {"kind", e.kind}, {"x", e.x}, {"y", e.y}, {"title", e.title}});
    }
    write_json("manifest.json", {{"config", config_}, {"files", files}});
    std::cout << "wrote " << entries_.size() << " file(s) to " << dir_.string() << '\n';
  }

 private:
  fs::path dir_;
  json config_;
  std::vector<ManifestEntry> entries_;
};

std::string default_out() {
  const char* env = std::getenv("QOEGAP_OUT");
  return env && *env ? env : "qoegap_out";
}

GraphSpec resolve_spec(const std::string& text, const Common& c) {
  GraphSpec s = parse_graph_spec(text);
  // --seed fills in generator seeds the spec left implicit.
  if (c.seed && text.find("seed=") == std::string::npos) s.seed = *c.seed;
  return s;
}

std::vector<GraphSpec> resolve_specs(const Common& c, std::vector<GraphSpec> fallback) {
  if (c.graphs.empty()) return fallback;
  std::vector<GraphSpec> out;
  for (const auto& g : c.graphs) out.push_back(resolve_spec(g, c));
  return out;
}

BoundConstants load_constants(const Common& c, std::optional<double> C, std::optional<double> small_c,
                              std::optional<double> C_deg) {
  BoundConstants k;
  if (!c.constants_file.empty()) {
    std::ifstream f(c.constants_file);
    if (!f) throw InputError("cannot open constants file " + c.constants_file);
    json j = json::parse(f);
    // Accept either a bare constants object or an envelope summary.
    if (j.contains("constants")) j = j["constants"];
    k = constants_from_json(j);
  }
  if (C) k.C = *C;
  if (small_c) k.c = *small_c;
  if (C_deg) k.C_deg = *C_deg;
  if (C || small_c || C_deg) k.provenance = "command line";
  k.validate();
  return k;
}

SolverOptions solver(const Common& c) {
  SolverOptions o;
  o.tol = c.tol;
  return o;
}

json specs_json(const std::vector<GraphSpec>& specs) {
  json a = json::array();
  for (const auto& s : specs) a.push_back(s.to_string());
  return a;
}

std::string safe_name(std::string s) {
  for (char& ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-') ch = '_';
  }
  return s;
}

void add_common(CLI::App* app, Common& c, bool graphs_required) {
  auto* g = app->add_option("--graph", c.graphs, "graph spec (er:n=,p=,seed= | ws:n=,k=,rewire= | ba:n=,m= | path:n= | "
                                                  "complete:n= | file:path=,format=) or edge-list file; repeatable");
  if (graphs_required) g->required();
  app->add_option("--seed", c.seed, "seed for generators whose spec omits seed=, and for sampling/baselines");
  app->add_option("--out", c.out, "output directory (default $QOEGAP_OUT or ./qoegap_out)");
  app->add_option("--constants", c.constants_file, "JSON file with C, c, C_deg (an envelope summary also works)");
  app->add_option("--tol", c.tol, "eigensolver residual tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QoE imbalance toolkit: spectral gap, imbalance index, bounds and interventions"};
  app.require_subcommand(1);

  Common common;
  double a = 2.0, h0 = 6.0;
  std::uint64_t samples = 200000;
  std::uint64_t pair_budget = 5'000'000;
  std::optional<double> C_opt, c_opt, cdeg_opt;
  std::vector<double> a_grid{0.5, 1, 2, 4};
  std::vector<double> h0_offsets{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<std::string> fit_families{"er", "ws", "path"};
  double lam_min = 1e-3, lam_max = 2.0, a_min = 1e-2, a_max = 10.0;
  std::size_t points = 50;
  std::size_t steps = 20;
  std::vector<std::string> strategies{"fiedler", "random", "min_degree", "betweenness"};
  std::vector<double> targets{0.05, 0.03, 0.02};
  double h0_step = 0.25, lambda2_target = 0.025;
  std::size_t lambda2_steps = 200;

  auto add_constants = [&](CLI::App* s) {
    s->add_option("--C", C_opt, "override the bound constant C")->check(CLI::PositiveNumber);
    s->add_option("--c", c_opt, "override the spectral scaling constant c")->check(CLI::PositiveNumber);
    s->add_option("--c-deg", cdeg_opt, "edge-addition condition constant C_deg")->check(CLI::PositiveNumber);
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "lambda2, Fiedler vector, r*, tail profile, I, J and bounds");
  add_common(analyze_cmd, common, true);
  add_constants(analyze_cmd);
  analyze_cmd->add_option("--a", a, "SLA stringency")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--h0", h0, "SLA hop threshold");
  analyze_cmd->add_option("--samples", samples, "sampled pairs when M exceeds the exact budget");
  analyze_cmd->add_option("--pair-budget", pair_budget, "largest M evaluated exactly");

  auto* envelope_cmd = app.add_subcommand("envelope", "sweep (graph, a, h0), fit (C, c), report breaches");
  add_common(envelope_cmd, common, false);
  envelope_cmd->add_option("--a", a_grid, "a grid")->delimiter(',');
  envelope_cmd->add_option("--h0-offsets", h0_offsets, "h0 - r* grid")->delimiter(',');
  envelope_cmd->add_option("--fit-families", fit_families, "models used for fitting")->delimiter(',');

  auto* phase_cmd = app.add_subcommand("phase-diagram", "decay rate min(a, c lambda2) over a log grid");
  add_common(phase_cmd, common, false);
  add_constants(phase_cmd);
  phase_cmd->add_option("--a-min", a_min)->check(CLI::PositiveNumber);
  phase_cmd->add_option("--a-max", a_max)->check(CLI::PositiveNumber);
  phase_cmd->add_option("--lambda2-min", lam_min)->check(CLI::PositiveNumber);
  phase_cmd->add_option("--lambda2-max", lam_max)->check(CLI::PositiveNumber);
  phase_cmd->add_option("--points", points, "grid points per axis")->check(CLI::Range(2, 2000));

  auto* certify_cmd = app.add_subcommand("certify", "exact I against the data-driven certificate");
  add_common(certify_cmd, common, false);
  certify_cmd->add_option("--a", a, "SLA stringency")->check(CLI::PositiveNumber);
  certify_cmd->add_option("--h0", h0, "SLA hop threshold");

  auto* intervene_cmd = app.add_subcommand("intervene", "edge-addition trajectories per strategy");
  add_common(intervene_cmd, common, false);
  add_constants(intervene_cmd);
  intervene_cmd->add_option("--a", a, "SLA stringency")->check(CLI::PositiveNumber);
  intervene_cmd->add_option("--h0", h0, "SLA hop threshold");
  intervene_cmd->add_option("--steps", steps, "edges to add");
  intervene_cmd->add_option("--strategies", strategies, "fiedler,random,min_degree,betweenness")->delimiter(',');

  auto* reverse_cmd = app.add_subcommand("reverse", "threshold and spectral-gap requirements for target I");
  add_common(reverse_cmd, common, false);
  add_constants(reverse_cmd);
  reverse_cmd->add_option("--a", a, "SLA stringency")->check(CLI::PositiveNumber);
  reverse_cmd->add_option("--targets", targets, "target I values")->delimiter(',');
  reverse_cmd->add_option("--h0-step", h0_step, "empirical scan step")->check(CLI::PositiveNumber);
  reverse_cmd->add_option("--lambda2-target", lambda2_target, "target I for the spectral-gap run");
  reverse_cmd->add_option("--lambda2-steps", lambda2_steps, "edge budget for the spectral-gap run");

  CLI11_PARSE(app, argc, argv);
  if (common.out.empty()) common.out = default_out();

  try {
    if (analyze_cmd->parsed()) {
      AnalyzeConfig cfg;
      cfg.sla = {a, h0};
      cfg.solver = solver(common);
      cfg.constants = load_constants(common, C_opt, c_opt, cdeg_opt);
      cfg.exact_pair_budget = pair_budget;
      cfg.sampled.sampling.samples = samples;
      if (common.seed) cfg.sampled.sampling.seed = *common.seed;
      const auto specs = resolve_specs(common, {});
      json config{{"subcommand", "analyze"}, {"graphs", specs_json(specs)}, {"sla", to_json(cfg.sla)},
                  {"constants", to_json(cfg.constants)}, {"tol", common.tol}, {"samples", samples},
                  {"sampling_seed", cfg.sampled.sampling.seed}, {"pair_budget", pair_budget}};
      Output out(common.out, config);
      std::vector<std::string> failed;
      for (std::size_t i = 0; i < specs.size(); ++i) {
        const std::string name = "analyze_" + std::to_string(i) + "_" + safe_name(specs[i].to_string()) + ".json";
        try {
          const auto r = analyze(materialize(specs[i]), cfg);
          out.write_json(name, analysis_json(r, out.config()));
          out.add({name, "json", "", "", "analysis of " + r.graph_id});
          std::cout << r.graph_id << ": n=" << r.n << " lambda2=" << format_number(r.spectral.lambda2)
                    << " I=" << format_number(r.fairness.I) << '\n';
        } catch (const std::exception& e) {
          std::cerr << "error: " << specs[i].to_string() << ": " << e.what() << '\n';
          failed.push_back(specs[i].to_string());
        }
      }
      out.finish();
      if (!failed.empty()) {
        std::cerr << "failed graphs:";
        for (const auto& f : failed) std::cerr << ' ' << f;
        std::cerr << '\n';
        return 1;
      }
    } else if (envelope_cmd->parsed()) {
      EnvelopeConfig cfg;
      cfg.a_grid = a_grid;
      cfg.h0_offsets = h0_offsets;
      cfg.fit.fit_families = fit_families;
      cfg.solver = solver(common);
      const auto specs = resolve_specs(common, default_envelope_specs());
      json config{{"subcommand", "envelope"}, {"graphs", specs_json(specs)}, {"a_grid", a_grid},
                  {"h0_offsets", h0_offsets}, {"fit_families", fit_families}, {"tol", common.tol},
                  {"c_grid", {{"min", cfg.fit.c_min}, {"max", cfg.fit.c_max}, {"points", cfg.fit.grid_points}}}};
      Output out(common.out, config);
      const auto cases = materialize_all(specs);
      const auto r = run_envelope(cases, cfg);
      {
        auto f = out.open("envelope.csv");
        write_envelope_csv(f, r.rows, out.config());
      }
      out.add({"envelope.csv", "csv", "x", "ln_I", "measured ln I against gamma (h0 - r*)"});
      json summary = envelope_summary_json(r);
      summary["config"] = out.config();
      out.write_json("constants.json", summary);
      out.add({"constants.json", "json", "", "", "fitted constants and breach rates"});
      std::cout << "C=" << format_number(r.constants.C) << " c=" << format_number(r.constants.c) << '\n'
                << "fit-set breach rate " << 100.0 * r.fit_breach_rate() << "% (" << r.fit_breaches << "/"
                << r.fit_points << ")\n"
                << "held-out breach rate " << 100.0 * r.held_breach_rate() << "% (" << r.held_breaches << "/"
                << r.held_points << ")\n";
      out.finish();
    } else if (phase_cmd->parsed()) {
      const auto k = load_constants(common, C_opt, c_opt, cdeg_opt);
      const auto ag = logspace(a_min, a_max, points);
      const auto lg = logspace(lam_min, lam_max, points);
      json config{{"subcommand", "phase-diagram"}, {"constants", to_json(k)},
                  {"a", {{"min", a_min}, {"max", a_max}}}, {"lambda2", {{"min", lam_min}, {"max", lam_max}}},
                  {"points", points}};
      Output out(common.out, config);
      const auto cells = phase_diagram(ag, lg, k.c);
      {
        auto f = out.open("phase.csv");
        write_phase_csv(f, cells, out.config());
      }
      out.add({"phase.csv", "csv", "a", "lambda2", "decay rate gamma = min(a, c lambda2) and regime"});
      out.finish();
    } else if (certify_cmd->parsed()) {
      const SlaParams sla{a, h0};
      const auto specs = resolve_specs(common, default_certify_specs());
      json config{{"subcommand", "certify"}, {"graphs", specs_json(specs)}, {"sla", to_json(sla)}};
      Output out(common.out, config);
      const auto rows = run_certify(materialize_all(specs), sla);
      {
        auto f = out.open("certify.csv");
        write_certify_csv(f, rows, out.config());
      }
      out.add({"certify.csv", "csv", "model", "I", "exact I and certificate per model"});
      for (const auto& r : rows) {
        std::cout << r.graph_id << ": I=" << format_number(r.I) << " certificate=" << format_number(r.certificate.bound)
                  << (r.certificate.valid ? "" : " (validity condition fails)") << '\n';
      }
      out.finish();
    } else if (intervene_cmd->parsed()) {
      const auto specs = resolve_specs(common, {ba_spec(300, 2, common.seed.value_or(1))});
      if (specs.size() != 1) throw InputError("intervene takes exactly one --graph");
      InterventionOptions opts;
      opts.steps = steps;
      opts.sla = {a, h0};
      opts.solver = solver(common);
      opts.seed = common.seed.value_or(1);
      opts.C_deg = load_constants(common, C_opt, c_opt, cdeg_opt).C_deg;
      std::vector<Strategy> strat;
      json names = json::array();
      for (const auto& s : strategies) {
        strat.push_back(parse_strategy(s));
        names.push_back(s);
      }
      json config{{"subcommand", "intervene"}, {"graphs", specs_json(specs)}, {"sla", to_json(opts.sla)},
                  {"steps", steps}, {"strategies", names}, {"seed", opts.seed}, {"C_deg", opts.C_deg},
                  {"tol", common.tol}};
      Output out(common.out, config);
      const auto runs = run_intervene(materialize(specs[0]), strat, opts);
      for (const auto& run : runs) {
        const std::string name = std::string("trajectory_") + to_string(run.strategy) + ".csv";
        {
          auto f = out.open(name);
          write_trajectory_csv(f, run.records, out.config());
        }
        out.add({name, "csv", "step", "lambda2,I", std::string("trajectory under ") + to_string(run.strategy)});
        std::cout << to_string(run.strategy) << ": lambda2 " << format_number(run.records.front().lambda2_after)
                  << " -> " << format_number(run.records.back().lambda2_after) << ", I "
                  << format_number(run.records.front().I_after) << " -> "
                  << format_number(run.records.back().I_after) << '\n';
      }
      out.finish();
    } else if (reverse_cmd->parsed()) {
      const auto specs = resolve_specs(common, {ws_spec(300, 4, 0.05, common.seed.value_or(1))});
      if (specs.size() != 1) throw InputError("reverse takes exactly one --graph");
      ReverseConfig cfg;
      cfg.a = a;
      cfg.targets = targets;
      cfg.h0_step = h0_step;
      cfg.constants = load_constants(common, C_opt, c_opt, cdeg_opt);
      cfg.C_deg = cfg.constants.C_deg;
      cfg.solver = solver(common);
      cfg.lambda2_target = lambda2_target;
      cfg.lambda2_max_steps = lambda2_steps;
      json config{{"subcommand", "reverse"}, {"graphs", specs_json(specs)}, {"a", a}, {"targets", targets},
                  {"h0_step", h0_step}, {"constants", to_json(cfg.constants)}, {"lambda2_target", lambda2_target},
                  {"lambda2_steps", lambda2_steps}, {"tol", common.tol}};
      Output out(common.out, config);
      const auto r = run_reverse(materialize(specs[0]), cfg, true);
      {
        auto f = out.open("reverse_h0.csv");
        write_reverse_h0_csv(f, r, out.config());
      }
      out.add({"reverse_h0.csv", "csv", "target_I", "h0_theory,h0_empirical", "threshold requirement per target"});
      json summary{{"graph_id", r.graph_id}, {"lambda2", r.lambda2}, {"r_star", r.r_star}, {"M", r.M},
                   {"config", out.config()}};
      if (r.lambda2_run) {
        const auto& lr = *r.lambda2_run;
        summary["lambda2_run"] = {{"target", lr.target},
                                  {"h0", lr.h0},
                                  {"lambda2_initial", lr.lambda2_initial},
                                  {"I_initial", lr.I_initial},
                                  {"requirement", lr.requirement},
                                  {"crossing_lambda2", lr.crossing_lambda2 ? json(*lr.crossing_lambda2) : json()},
                                  {"steps", lr.steps}};
        auto f = out.open("reverse_lambda2.csv");
        write_trajectory_csv(f, lr.trajectory, out.config());
        out.add({"reverse_lambda2.csv", "csv", "lambda2", "I", "measured I while adding Fiedler edges"});
      }
      out.write_json("reverse.json", summary);
      out.add({"reverse.json", "json", "", "", "requirements and crossing point"});
      for (const auto& row : r.rows) {
        std::cout << "I_tar=" << format_number(row.target) << " h0_theory=" << format_number(row.h0_theory)
                  << " h0_empirical=" << (row.h0_empirical ? format_number(*row.h0_empirical) : "none") << '\n';
      }
      out.finish();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
