#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "qoegap/distances.hpp"
#include "qoegap/generators.hpp"
#include "qoegap/io.hpp"
#include "qoegap/report.hpp"

using namespace qoegap;

TEST_SUITE("generators") {
  TEST_CASE("path") {
    CHECK(path_graph(5).edges() == std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  }

  TEST_CASE("BA edge arithmetic and connectivity") {
    const Graph g = barabasi_albert(10, 2, 1);
    CHECK(g.edge_count() == 3 + 7 * 2);
    CHECK(is_connected(g));
    for (std::uint64_t seed = 1; seed < 6; ++seed) CHECK(barabasi_albert(200, 3, seed).edge_count() == 6 + 196 * 3);
  }

  TEST_CASE("WS without rewiring is the ring lattice") {
    const Graph g = watts_strogatz(30, 6, 0.0, 1);
    for (NodeId v = 0; v < 30; ++v) CHECK(g.degree(v) == 6);
    CHECK(g.has_edge(0, 29));
    CHECK(g.has_edge(0, 27));
    CHECK_FALSE(g.has_edge(0, 4));
  }

  TEST_CASE("WS rewiring keeps the edge count") {
    for (std::uint64_t seed = 1; seed < 5; ++seed) CHECK(watts_strogatz(100, 4, 0.3, seed).edge_count() == 200);
  }

  TEST_CASE("seeded determinism") {
    for (const char* text : {"er:n=120,p=0.05,seed=3", "ws:n=120,k=4,rewire=0.2,seed=3", "ba:n=120,m=2,seed=3"}) {
      const auto spec = parse_graph_spec(text);
      CHECK(generate(spec) == generate(spec));
      auto other = spec;
      other.seed = 4;
      CHECK_FALSE(generate(spec) == generate(other));
    }
  }

  TEST_CASE("ER edge count concentrates") {
    double total = 0;
    for (std::uint64_t seed = 0; seed < 64; ++seed) total += static_cast<double>(erdos_renyi(200, 0.05, seed).edge_count());
    const double expected = 0.05 * 19900;
    CHECK(std::abs(total / 64 - expected) <= 0.05 * expected);
  }

  TEST_CASE("BA max degree grows with n") {
    double prev = 0;
    for (std::size_t n : {100u, 400u, 1600u}) {
      double sum = 0;
      for (std::uint64_t seed = 1; seed <= 8; ++seed) sum += static_cast<double>(degree_stats(barabasi_albert(n, 2, seed)).max_degree);
      CHECK(sum / 8 > prev);
      prev = sum / 8;
    }
  }

  TEST_CASE("spec parsing and validation") {
    auto s = parse_graph_spec("er:n=200,p=0.05,seed=3");
    CHECK(s.model == Model::kEr);
    CHECK(s.n == 200);
    CHECK(s.p == 0.05);
    CHECK(s.seed == 3);
    CHECK(parse_graph_spec(s.to_string()).to_string() == s.to_string());
    s = parse_graph_spec("file:path=x.txt,format=caida");
    CHECK(s.format == FileFormat::kCaida);
    CHECK(parse_graph_spec("graph.txt").model == Model::kFile);
    CHECK_THROWS_AS(parse_graph_spec("er:n=10,p=1.5"), InputError);
    CHECK_THROWS_AS(parse_graph_spec("ws:n=10,k=3"), InputError);
    CHECK_THROWS_AS(parse_graph_spec("ws:n=6,k=6"), InputError);
    CHECK_THROWS_AS(parse_graph_spec("ba:n=5,m=5"), InputError);
    CHECK_THROWS_AS(parse_graph_spec("ba:n=5,m=0"), InputError);
    CHECK_THROWS_AS(parse_graph_spec("er:n=10,q=2"), InputError);
    CHECK_THROWS_AS(parse_graph_spec("hex:n=10"), InputError);
    CHECK_THROWS_AS(parse_graph_spec("er:n=ten"), InputError);
  }
}

TEST_SUITE("io") {
  TEST_CASE("edge list format") {
    CHECK(edge_list_string(path_graph(3)) == "0 1\n1 2\n");
    std::istringstream in("# header\n\n0 1\n  2 1 \n");
    const Graph g = read_edge_list(in);
    CHECK(g == path_graph(3));
  }

  TEST_CASE("edge list round trip") {
    for (const char* text : {"er:n=80,p=0.05,seed=1", "ws:n=80,k=4,rewire=0.2,seed=2", "ba:n=80,m=3,seed=3"}) {
      const Graph g = generate(parse_graph_spec(text));
      std::istringstream in(edge_list_string(g));
      CHECK(read_edge_list(in) == g);
    }
    // Trailing isolated nodes survive through the nodes header.
    const auto iso = oracle::from_edges(5, {{0, 1}});
    std::istringstream in(edge_list_string(iso));
    CHECK(read_edge_list(in) == iso);
  }

  TEST_CASE("edge list errors carry line numbers") {
    std::istringstream in("0 1\n1 x\n");
    try {
      read_edge_list(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    std::istringstream three("0 1 2\n");
    CHECK_THROWS_AS(read_edge_list(three), ParseError);
  }

  TEST_CASE("CAIDA parsing") {
    std::istringstream in("1|2|-1\n2|3|0\n# comment\n");
    const auto g = parse_caida_as_rel(in);
    CHECK(g.graph.node_count() == 3);
    CHECK(g.graph.edge_count() == 2);

    std::istringstream dup("1|2|-1\n2|1|0\n");
    CHECK(parse_caida_as_rel(dup).graph.edge_count() == 1);

    std::istringstream order("9000|17|0\n17|3|-1|bgp\n");
    const auto o = parse_caida_as_rel(order);
    CHECK(o.as_numbers == std::vector<std::uint64_t>{3, 17, 9000});
    CHECK(o.graph.has_edge(0, 1));
    CHECK(o.graph.has_edge(1, 2));

    std::istringstream bad("1|2|-1\n1|2\n");
    try {
      parse_caida_as_rel(bad);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    std::istringstream badtype("1|2|5\n");
    CHECK_THROWS_AS(parse_caida_as_rel(badtype), ParseError);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(parse_caida_as_rel(empty), InputError);
  }

  TEST_CASE("CAIDA re-serialization is idempotent") {
    std::istringstream in("701|1239|0\n3356|701|-1\n174|3356|-1\n1239|174|0\n701|174|0\n");
    const auto g = parse_caida_as_rel(in);
    std::ostringstream out;
    write_caida_as_rel(out, g);
    std::istringstream back(out.str());
    const auto g2 = parse_caida_as_rel(back);
    CHECK(g2.graph == g.graph);
    CHECK(g2.as_numbers == g.as_numbers);
  }
}

TEST_SUITE("report") {
  TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_number(0.1)) == 0.1);
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  }

  TEST_CASE("K4 analysis JSON has I = 0 and round-trips") {
    AnalyzeConfig cfg;
    const auto r = analyze(materialize(complete_spec(4)), cfg);
    const json j = analysis_json(r, {{"subcommand", "analyze"}});
    for (const char* key : {"graph", "spectral", "fairness", "bounds", "config"}) CHECK(j.contains(key));
    CHECK(j["fairness"]["I"].get<double>() == 0.0);
    CHECK(j["graph"]["n"] == 4);
    const json back = json::parse(j.dump());
    CHECK(back["spectral"]["lambda2"].get<double>() == r.spectral.lambda2);
    CHECK(back["fairness"]["J"].get<double>() == r.fairness.J);
  }

  TEST_CASE("CSV headers") {
    std::ostringstream env;
    write_envelope_csv(env, {}, json::object());
    std::istringstream lines(env.str());
    std::string config, header;
    std::getline(lines, config);
    std::getline(lines, header);
    CHECK(config.rfind("# config: ", 0) == 0);
    CHECK(header == "graph_id,model,n,lambda2,r_star,a,h0,H,gamma,x,I,ln_I,bound_I,breach");

    std::ostringstream ph;
    write_phase_csv(ph, {}, json::object());
    CHECK(ph.str().find("\na,lambda2,c_lambda2,gamma,regime\n") != std::string::npos);

    std::ostringstream tr;
    InterventionRecord rec;
    write_trajectory_csv(tr, std::span(&rec, 1), json::object());
    CHECK(tr.str().find("\nstep,strategy,i,j,lambda2,I,score,condition\n0,fiedler,,,0,0,,\n") != std::string::npos);
  }

  TEST_CASE("constants JSON") {
    const BoundConstants k{0.25, 1.5, 0.4, "fit"};
    const auto back = constants_from_json(json::parse(to_json(k).dump()));
    CHECK(back.C == k.C);
    CHECK(back.c == k.c);
    CHECK(back.C_deg == k.C_deg);
    CHECK(back.provenance == "fit");
    CHECK_THROWS_AS(constants_from_json(json{{"C", -1.0}}), InputError);
  }
}
