#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qoegap/distances.hpp"
#include "qoegap/fairness.hpp"
#include "qoegap/generators.hpp"

using namespace qoegap;

namespace {

// Divergence chain checks; rounding allowance only.
void check_chains(const DistanceHistogram& hist, const SlaParams& sla) {
  const auto rep = imbalance_index(hist, sla);
  const auto d = divergences_vs_uniform(hist, sla);
  const double M = static_cast<double>(hist.pair_count);
  const double tol = 1e-12;
  CHECK(rep.I >= 0.0);
  CHECK(rep.I <= 1.0);
  CHECK(std::abs(rep.I - (1.0 - rep.entropy / std::log(M))) <= tol);
  CHECK(std::abs(rep.I * std::log(M) - d.kl) <= 1e-10);
  CHECK(std::abs(rep.J - (1.0 - rep.W / M)) <= tol);
  CHECK(std::abs(rep.J - average_tail_J(hist, sla)) <= tol);
  CHECK(d.kl <= std::log1p(d.chi2) + tol);
  CHECK(std::log1p(d.chi2) <= d.chi2 + tol);
  if (rep.J < 1.0) {
    const double ratio = rep.J / (1.0 - rep.J);
    CHECK(d.kl <= ratio + tol);
    CHECK(d.chi2 <= ratio * (1 + 1e-12) + tol);
    CHECK(d.tv <= ratio + tol);
  }
}

}  // namespace

TEST_SUITE("fairness") {
  TEST_CASE("satisfaction weight") {
    CHECK(satisfaction_weight(3.0, {1.0, 3.0}) == 0.5);
    CHECK(satisfaction_weight(5.0, {1.0, 3.0}) == doctest::Approx(1.0 / (1.0 + std::exp(2.0))).epsilon(1e-15));
    CHECK(std::abs(satisfaction_weight(5.0, {1.0, 3.0}) - 0.119203) < 1e-6);
    const double far = satisfaction_weight(1000.0, {2.0, 3.0});
    CHECK(far == 0.0);
    CHECK_FALSE(std::isnan(far));
    CHECK(dissatisfaction(-1000.0, {2.0, 3.0}) == 0.0);
    CHECK(satisfaction_weight(-1000.0, {2.0, 3.0}) == 1.0);
  }

  TEST_CASE("single pair is rejected") {
    CHECK_THROWS_AS(imbalance_index(distance_histogram_exact(complete_graph(2)), {1.0, 2.0}), InputError);
  }

  TEST_CASE("weight is strictly decreasing") {
    const SlaParams sla{1.3, 4.0};
    for (double h = 0; h < 10; h += 0.5) CHECK(satisfaction_weight(h + 0.5, sla) < satisfaction_weight(h, sla));
  }

  TEST_CASE("invalid SLA") {
    CHECK_THROWS_AS(SlaParams({0.0, 1.0}).validate(), InputError);
    CHECK_THROWS_AS(SlaParams({1.0, -1.0}).validate(), InputError);
    CHECK_THROWS_AS(SlaParams({NAN, 1.0}).validate(), InputError);
  }

  TEST_CASE("complete graph gives exactly zero") {
    for (std::size_t n : {3u, 4u, 9u, 30u}) {
      const auto hist = distance_histogram_exact(complete_graph(n));
      for (double a : {0.3, 1.0, 8.0}) {
        const auto rep = imbalance_index(hist, {a, 2.0});
        CHECK(rep.I == 0.0);
        const auto d = divergences_vs_uniform(hist, {a, 2.0});
        CHECK(d.kl == 0.0);
        CHECK(d.chi2 == 0.0);
        CHECK(d.tv == 0.0);
      }
    }
    const auto hist = distance_histogram_exact(complete_graph(6));
    CHECK(average_tail_J(hist, {1.0, 2.0}) == doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-14));
  }

  TEST_CASE("P4 against the pair-level oracle") {
    const Graph g = path_graph(4);
    const auto hist = distance_histogram_exact(g);
    const SlaParams sla{1.0, 2.0};
    const auto rep = imbalance_index(hist, sla);
    const auto ref = oracle::pair_level(g, 1.0, 2.0);
    CHECK(std::abs(rep.I - ref.I) <= 1e-12);
    const auto d = divergences_vs_uniform(hist, sla);
    CHECK(std::abs(d.kl - ref.kl) <= 1e-12);
    CHECK(std::abs(d.chi2 - ref.chi2) <= 1e-12);
    CHECK(std::abs(d.tv - ref.tv) <= 1e-12);
    auto one_minus_w = [&](double h) { return 1.0 - 1.0 / (1.0 + std::exp(h - 2.0)); };
    const double J = (3 * one_minus_w(1) + 2 * one_minus_w(2) + one_minus_w(3)) / 6;
    CHECK(std::abs(rep.J - J) <= 1e-12);
  }

  TEST_CASE("histogram collapse equals pair-level evaluation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ua(0.1, 4.0);
    std::uniform_real_distribution<double> uh(0.5, 8.0);
    for (int trial = 0; trial < 60; ++trial) {
      const Graph g = oracle::random_connected(rng, 3 + trial, 0.05);
      const auto hist = distance_histogram_exact(g);
      const double a = ua(rng);
      const double h0 = uh(rng);
      const auto ref = oracle::pair_level(g, a, h0);
      CHECK(std::abs(imbalance_index(hist, {a, h0}).I - ref.I) <= 1e-10);
      CHECK(std::abs(average_tail_J(hist, {a, h0}) - ref.J) <= 1e-12);
      check_chains(hist, {a, h0});
    }
  }

  TEST_CASE("near-constant weights are near uniform") {
    const auto hist = distance_histogram_exact(oracle::star(10));
    CHECK(imbalance_index(hist, {1e-9, 2.0}).I <= 1e-9);
  }

  TEST_CASE("two classes with a steep SLA approach TV one half") {
    // One pair at distance 1, one at distance 2 (P3 has 2 and 1; take fractional masses).
    const std::vector<double> mass{0.0, 1.0, 1.0};
    const auto rep = fairness_from_classes(mass, 2.0, {60.0, 1.5});
    CHECK(rep.I == doctest::Approx(1.0).epsilon(1e-9));
    DistanceHistogram h;
    h.counts = {0, 1, 1};
    h.total = 2;
    h.pair_count = 2;
    CHECK(divergences_vs_uniform(h, {60.0, 1.5}).tv == doctest::Approx(0.5).epsilon(1e-9));
  }

  TEST_CASE("saturation far beyond the diameter") {
    const Graph g = largest_connected_component(watts_strogatz(120, 4, 0.1, 2)).graph;
    const auto hist = distance_histogram_exact(g);
    for (double a : {0.5, 1.0, 2.0, 4.0}) {
      const double h0 = hist.max_distance() + 40.0 / a;
      CHECK(imbalance_index(hist, {a, h0}).I < 1e-6);
    }
  }

  TEST_CASE("logistic pointwise bound") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ua(1e-3, 20.0);
    std::uniform_real_distribution<double> uh(0.0, 50.0);
    for (int i = 0; i < 10000; ++i) {
      const SlaParams sla{ua(rng), uh(rng) + 1e-9};
      const double r = uh(rng);
      const double s = satisfaction_weight(r, sla);
      CHECK(s * dissatisfaction(r, sla) <= std::exp(-sla.a * std::abs(r - sla.h0)));
    }
  }

  TEST_CASE("sampled estimator") {
    const Graph g = largest_connected_component(erdos_renyi(40, 0.15, 1)).graph;
    const SlaParams sla{1.0, 2.0};
    const double exact = imbalance_index(distance_histogram_exact(g), sla).I;

    SampledFairnessOptions opts;
    opts.sampling.samples = pair_count(g.node_count());
    auto rep = imbalance_index_sampled(g, sla, opts);
    CHECK(rep.I == exact);
    CHECK(rep.mode == FairnessMode::kSampled);

    opts.sampling.samples = 300;
    opts.sampling.seed = 4;
    rep = imbalance_index_sampled(g, sla, opts);
    CHECK(rep.samples == 300);
    CHECK(rep.alpha == 0.5);
    CHECK(rep.I == imbalance_index_sampled(g, sla, opts).I);

    opts.sampling.samples = 50;
    CHECK(imbalance_index_sampled(complete_graph(30), sla, opts).I == 0.0);

    opts.sampling.samples = 0;
    CHECK_THROWS_AS(imbalance_index_sampled(g, sla, opts), InputError);
  }

  TEST_CASE("sampled histogram is refused by the exact path") {
    SamplingOptions opts;
    opts.samples = 10;
    const auto h = distance_histogram_sampled(path_graph(10), opts);
    CHECK_THROWS_AS(imbalance_index(h, {1.0, 2.0}), InputError);
  }
}
