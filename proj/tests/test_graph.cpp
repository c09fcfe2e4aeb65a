#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qoegap/cheeger.hpp"
#include "qoegap/distances.hpp"
#include "qoegap/generators.hpp"
#include "qoegap/spectral.hpp"

using namespace qoegap;

TEST_SUITE("graph") {
  TEST_CASE("build drops self loops and duplicates") {
    const std::vector<Edge> e{{0, 1}, {1, 0}, {2, 2}, {1, 2}, {0, 1}};
    const auto r = build_graph(3, e);
    CHECK(r.graph.edge_count() == 2);
    CHECK(r.dropped_self_loops == 1);
    CHECK(r.dropped_duplicates == 2);
    CHECK(r.graph.has_edge(1, 0));
    CHECK_FALSE(r.graph.has_edge(0, 2));
    CHECK(r.graph.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  }

  TEST_CASE("out of range id is an input error") {
    const std::vector<Edge> e{{0, 3}};
    CHECK_THROWS_AS(build_graph(3, e), InputError);
  }

  TEST_CASE("with_edge copies") {
    const Graph p = path_graph(4);
    const Graph c = p.with_edge(0, 3);
    CHECK(p.edge_count() == 3);
    CHECK(c.edge_count() == 4);
    CHECK(c == oracle::cycle(4));
    CHECK_THROWS_AS(p.with_edge(0, 1), InputError);
    CHECK_THROWS_AS(p.with_edge(2, 2), InputError);
  }

  TEST_CASE("largest component keeps id order and breaks ties by smallest id") {
    // Components {0,3}, {1,4}, {2,5,6}.
    const auto g = oracle::from_edges(7, {{0, 3}, {1, 4}, {2, 5}, {5, 6}});
    const auto lcc = largest_connected_component(g);
    CHECK(lcc.graph.node_count() == 3);
    CHECK(lcc.new_to_old == std::vector<NodeId>{2, 5, 6});
    CHECK(lcc.old_to_new[0] == kNoNode);

    const auto tie = oracle::from_edges(4, {{1, 3}, {0, 2}});
    CHECK(largest_connected_component(tie).new_to_old == std::vector<NodeId>{0, 2});
  }

  TEST_CASE("degree stats") {
    auto ds = degree_stats(complete_graph(4));
    CHECK(ds.max_degree == 3);
    CHECK(ds.min_degree == 3);
    CHECK(ds.beta == Ratio{1, 1});
    ds = degree_stats(oracle::star(5));
    CHECK(ds.max_degree == 4);
    CHECK(ds.min_degree == 1);
    CHECK(ds.beta == Ratio{4, 1});
    ds = degree_stats(path_graph(4));
    CHECK(ds.beta == Ratio{2, 1});
  }

  TEST_CASE("bfs layering property") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const Graph g = oracle::random_connected(rng, 30, 0.05);
      for (NodeId s = 0; s < g.node_count(); s += 7) {
        const auto d = bfs_distances(g, s);
        for (const auto& [u, v] : g.edges()) CHECK(std::abs(d[u] - d[v]) <= 1);
      }
    }
  }
}

TEST_SUITE("distances") {
  TEST_CASE("exact histogram of P4") {
    const auto h = distance_histogram_exact(path_graph(4));
    CHECK(h.counts == std::vector<std::uint64_t>{0, 3, 2, 1});
    CHECK(h.total == 6);
    CHECK(h.pair_count == 6);
  }

  TEST_CASE("disconnected graph is rejected") {
    const auto g = oracle::from_edges(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(distance_histogram_exact(g), InputError);
  }

  TEST_CASE("tail profile matches pair counting and the ball identity") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      const Graph g = oracle::random_connected(rng, 5 + trial % 40, 0.04);
      const auto hist = distance_histogram_exact(g);
      const auto prof = tail_profile(g, hist);  // throws if the two tallies disagree
      const auto ref = oracle::tail_pairs(g);
      CHECK(prof.tail_pairs == ref);
      for (std::size_t r = 1; r < prof.tau.size(); ++r) CHECK(prof.tau[r] <= prof.tau[r - 1]);
      CHECK(prof.at(prof.r_max() + 1) == 0.0);
    }
  }

  TEST_CASE("r_star agrees with the distance-matrix oracle") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
      const Graph g = oracle::random_connected(rng, 4 + trial, 0.03);
      const Hop rs = r_star_mixing_radius(g);
      CHECK(rs == oracle::r_star(g));
      CHECK(rs <= hop_diameter(g));
    }
    CHECK(r_star_mixing_radius(complete_graph(5)) == 1);
  }

  TEST_CASE("sampled frequencies concentrate on exact fractions") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
      const Graph g = oracle::random_connected(rng, 20 + 6 * trial, 0.05);
      const auto exact = distance_histogram_exact(g);
      SamplingOptions opts;
      opts.samples = 64 * exact.pair_count;
      opts.seed = 100 + trial;
      const auto s = distance_histogram_sampled(g, opts);
      CHECK(s.mode == HistogramMode::kSampled);
      CHECK(s.total == opts.samples);
      const double m = static_cast<double>(opts.samples);
      for (Hop h = 1; h <= exact.max_distance(); ++h) {
        const double p = static_cast<double>(exact.at(h)) / static_cast<double>(exact.pair_count);
        const double sd = std::sqrt(m * p * (1 - p));
        CHECK(std::abs(static_cast<double>(s.at(h)) - m * p) <= 5 * sd + 1e-9);
      }
      CHECK(s.eccentricity_floor <= exact.max_distance());
    }
  }

  TEST_CASE("sampling is deterministic per seed") {
    const Graph g = erdos_renyi(60, 0.1, 4);
    const Graph lcc = largest_connected_component(g).graph;
    SamplingOptions opts;
    opts.samples = 500;
    opts.seed = 9;
    CHECK(distance_histogram_sampled(lcc, opts).counts == distance_histogram_sampled(lcc, opts).counts);
  }

  TEST_CASE("bfs row cache respects a tiny budget") {
    const Graph g = path_graph(50);
    BfsRowCache cache(g, 1);
    CHECK(cache.distance(0, 49) == 49);
    CHECK(cache.distance(10, 12) == 2);
    CHECK(cache.distance(0, 3) == 3);
    CHECK(cache.bfs_runs() == 3);
  }
}

TEST_SUITE("cheeger") {
  TEST_CASE("hand examples") {
    CHECK(cheeger_bruteforce(path_graph(2)) == Ratio{1, 1});
    CHECK(cheeger_bruteforce(oracle::cycle(4)) == Ratio{1, 2});
    CHECK(cheeger_bruteforce(path_graph(3)) == Ratio{1, 1});
  }

  TEST_CASE("refuses large graphs") { CHECK_THROWS_AS(cheeger_bruteforce(path_graph(15)), InputError); }

  TEST_CASE("sandwich on random small graphs") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
      const Graph g = oracle::random_connected(rng, 3 + trial % 10, 0.25);
      const double phi = cheeger_bruteforce(g).value();
      const double l2 = dense_spectrum(g)[1];
      CHECK(l2 / 2 <= phi + 1e-12);
      CHECK(phi <= std::sqrt(2 * l2) + 1e-12);
    }
  }
}
