#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qoegap/bounds.hpp"
#include "qoegap/generators.hpp"
#include "qoegap/spectral.hpp"

using namespace qoegap;

namespace {

BoundConstants unit_constants() { return {1.0, 1.0, 0.5, "test"}; }

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("spectral upper bound examples") {
    const BoundConstants k = unit_constants();
    auto rep = spectral_upper_bound(0.3, 4.0, {2.0, 4.0}, 100.0, k);
    REQUIRE(rep.bound_I);
    CHECK(*rep.bound_I == doctest::Approx(1.0 / std::log(100.0)).epsilon(1e-15));
    CHECK(rep.applicable);

    // a=2, c lambda2 = 0.5, H = 4, M = e^10
    rep = spectral_upper_bound(0.5, 1.0, {2.0, 5.0}, std::exp(10.0), k);
    CHECK(*rep.bound_I == doctest::Approx(0.9 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(std::abs(*rep.bound_I - 0.12180) < 1e-5);
    CHECK(rep.gamma == 0.5);
    CHECK(rep.regime == Regime::kStructureLimited);

    rep = spectral_upper_bound(0.5, 6.0, {2.0, 5.0}, 100.0, k);
    CHECK_FALSE(rep.applicable);
    CHECK_FALSE(rep.bound_I);

    CHECK_THROWS_AS(spectral_upper_bound(0.5, 1.0, {2.0, 5.0}, 1.0, k), InputError);
  }

  TEST_CASE("J bound examples and continuity") {
    const BoundConstants k = unit_constants();
    // H = 0
    const double a = 1.5, l2 = 0.7;
    CHECK(j_exponential_bound(l2, 3.0, {a, 3.0}, k) == doctest::Approx(1.0 + a / (a + l2)).epsilon(1e-15));

    // a = 1, c lambda2 = 2, H = 3
    const auto t = j_exponential_bound_terms(2.0, 0.0, {1.0, 3.0}, k);
    CHECK(t.below >= 0);
    CHECK(t.middle >= 0);
    CHECK(t.above >= 0);
    CHECK(t.total() == doctest::Approx(4 * std::exp(-3.0) + std::exp(-6.0) / 3).epsilon(1e-14));
    CHECK(std::abs(t.total() - 0.19998) < 1e-5);

    // Crossing a = c lambda2.
    const double at = j_exponential_bound(0.8, 1.0, {0.8, 5.0}, k);
    CHECK(std::isfinite(at));
    CHECK(std::abs(j_exponential_bound(0.8, 1.0, {0.8 + 1e-9, 5.0}, k) - at) < 1e-7);
    CHECK(std::abs(j_exponential_bound(0.8, 1.0, {0.8 - 1e-9, 5.0}, k) - at) < 1e-7);
  }

  TEST_CASE("decay rate and regimes") {
    auto d = decay_rate(0.1, 1.0, 1.0);
    CHECK(d.gamma == 0.1);
    CHECK(d.regime == Regime::kServiceLimited);
    d = decay_rate(5.0, 0.2, 1.0);
    CHECK(d.gamma == 0.2);
    CHECK(d.regime == Regime::kStructureLimited);
    d = decay_rate(0.7, 0.7, 1.0);
    CHECK(d.gamma == 0.7);
    CHECK(d.regime == Regime::kBalanced);
    CHECK(classify_regime(1.0, 1.005) == Regime::kBalanced);
    CHECK(classify_regime(1.0, 1.02) == Regime::kServiceLimited);
    CHECK_THROWS_AS(decay_rate(0.0, 1.0, 1.0), InputError);
  }

  TEST_CASE("phase diagram geometry") {
    const std::vector<double> a{0.1, 10.0};
    const std::vector<double> l2{0.1, 10.0};
    const auto cells = phase_diagram(a, l2, 1.0);
    REQUIRE(cells.size() == 4);
    int service = 0, structure = 0, balanced = 0;
    for (const auto& c : cells) {
      service += c.regime == Regime::kServiceLimited;
      structure += c.regime == Regime::kStructureLimited;
      balanced += c.regime == Regime::kBalanced;
    }
    CHECK(service == 1);
    CHECK(structure == 1);
    CHECK(balanced == 2);

    const auto ag = logspace(0.01, 1.0, 7);
    const std::vector<double> high{200.0};
    for (const auto& c : phase_diagram(ag, high, 1.0)) CHECK(c.gamma == c.a);

    const auto grid_a = logspace(0.01, 10, 15);
    const auto grid_l = logspace(1e-3, 2, 15);
    const auto all = phase_diagram(grid_a, grid_l, 0.8);
    for (std::size_t i = 0; i < grid_l.size(); ++i) {
      for (std::size_t j = 0; j < grid_a.size(); ++j) {
        const auto& c = all[i * grid_a.size() + j];
        if (j > 0) CHECK(c.gamma >= all[i * grid_a.size() + j - 1].gamma);
        if (i > 0) CHECK(c.gamma >= all[(i - 1) * grid_a.size() + j].gamma);
      }
    }
  }

  TEST_CASE("logspace endpoints") {
    const auto g = logspace(1e-3, 10, 200);
    CHECK(g.size() == 200);
    CHECK(g.front() == 1e-3);
    CHECK(g.back() == 10);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  }

  TEST_CASE("fit: single observation on the bound") {
    FitOptions opts;
    opts.c_min = opts.c_max = 0.5;
    opts.grid_points = 1;
    const Observation o{0.02, 0.4, 2.0, 1.0, 5.0, 1000.0, "er"};
    const auto k = fit_constants(std::span(&o, 1), opts);
    const double H = 3.0;
    const double ratio = 0.02 * std::log(1000.0) / ((1 + H) * std::exp(-0.2 * H));
    CHECK(k.C == doctest::Approx(ratio).epsilon(1e-11));
    CHECK(k.c == 0.5);
    CHECK(k.C_deg == 0.5);
  }

  TEST_CASE("fit: synthetic ground truth") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0, 1);
    const double C0 = 0.8, c0 = 0.35;
    std::vector<Observation> obs;
    for (int i = 0; i < 300; ++i) {
      Observation o;
      o.lambda2 = 0.05 + 0.9 * u(rng);
      o.a = 0.5 + 3.5 * u(rng);
      o.r_star = 2 + std::floor(5 * u(rng));
      o.h0 = o.r_star + 0.5 + 8 * u(rng);
      o.M = 5000 + 20000 * u(rng);
      o.family = "er";
      const double H = o.h0 - o.r_star;
      const double B = C0 * (1 + o.a * H) / std::log(o.M) * std::exp(-std::min(o.a, c0 * o.lambda2) * H);
      o.I = B * std::exp(-0.3 * u(rng));  // negative noise
      obs.push_back(o);
    }
    // An observation exactly on the bound pins C at C0 for c = c0.
    obs[0].I = C0 * (1 + obs[0].a * (obs[0].h0 - obs[0].r_star)) / std::log(obs[0].M) *
               std::exp(-std::min(obs[0].a, c0 * obs[0].lambda2) * (obs[0].h0 - obs[0].r_star));
    const auto k = fit_constants(obs);
    const auto grid = logspace(1e-3, 10, 200);
    const double step = std::log(grid[1] / grid[0]);
    CHECK(std::abs(std::log(k.c / c0)) <= 2 * step);
    CHECK(k.C <= C0 * 1.1);
    for (const auto& o : obs) {
      CHECK(o.I <= *spectral_upper_bound(o.lambda2, o.r_star, {o.a, o.h0}, o.M, k).bound_I);
    }
  }

  TEST_CASE("fit: filtering") {
    std::vector<Observation> obs{{0.0, 0.3, 2, 1, 4, 500, "er"}, {0.01, 0.3, 2, 1, 4, 500, "ba"}};
    FitOptions opts;
    opts.fit_families = {"er", "ws"};
    CHECK_FALSE(in_fit_set(obs[0], opts));
    CHECK_FALSE(in_fit_set(obs[1], opts));
    CHECK_THROWS_AS(fit_constants(obs, opts), InputError);
    obs.push_back({0.01, 0.3, 2, 1, 4, 500, "ws"});
    CHECK_NOTHROW(fit_constants(obs, opts));
  }

  TEST_CASE("tail envelope") {
    const auto hist = distance_histogram_exact(complete_graph(7));
    const auto prof = tail_profile(complete_graph(7), hist);
    const auto rep = tail_envelope_check(prof, 7.0 / 6.0, unit_constants());
    CHECK(rep.breaches == 0);
    // tau_0 = 1 meets C = 1 exactly; beyond r = 0 the tails vanish.
    CHECK(rep.slack[0] == 0.0);
    for (std::size_t r = 1; r < rep.slack.size(); ++r) CHECK(rep.slack[r] > 0);

    const Graph p = path_graph(30);
    const auto pp = tail_profile(p, distance_histogram_exact(p));
    const auto pr = tail_envelope_check(pp, 0.01, {1.5, 1.0, 0.5, "t"});
    for (Hop r = 0; r <= pp.r_star; ++r) CHECK(pr.slack[r] >= 0.5 - 1e-15);
  }

  TEST_CASE("certificate") {
    const Graph k = complete_graph(12);
    const auto prof = tail_profile(k, distance_histogram_exact(k));
    const double M = 66;
    const SlaParams sla{2.0, 3.5};
    const auto cert = data_driven_certificate(prof, sla, M);
    // tau_0 = 1 and tau_r = 0 for r >= 1, so r = 1 gives e^{-5}.
    CHECK(cert.radius == 1);
    CHECK(cert.valid);
    CHECK(cert.bound == doctest::Approx(2 / std::log(M) * std::exp(-5.0)).epsilon(1e-14));
    // The fixed r = 1 term from the closed form.
    CHECK(prof.at(1) + std::exp(-2.0 * (3.5 - 1)) == doctest::Approx(std::exp(-5.0)).epsilon(1e-15));

    TailProfile ones;
    ones.tau = std::vector<double>(20, 1.0);
    ones.pair_count = 100;
    const auto bad = data_driven_certificate(ones, {1.0, 6.0}, 100);
    CHECK_FALSE(bad.valid);
    CHECK_FALSE(bad.general_form);
    CHECK(std::isinf(bad.bound));

    CHECK_THROWS_AS(data_driven_certificate(prof, {1.0, 0.5}, M), InputError);
  }

  TEST_CASE("certificate dominates exact I on random graphs") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 40; ++trial) {
      const Graph g = oracle::random_connected(rng, 20 + 4 * trial, 0.04);
      const auto hist = distance_histogram_exact(g);
      const auto prof = tail_profile(g, hist);
      for (double a : {0.5, 2.0}) {
        for (double h0 : {2.0, 4.0, 6.0, 9.0}) {
          const auto cert = data_driven_certificate(prof, {a, h0}, static_cast<double>(hist.pair_count));
          if (cert.valid || cert.general_form) CHECK(cert.bound >= imbalance_index(hist, {a, h0}).I);
        }
      }
    }
  }

  TEST_CASE("reverse design") {
    const BoundConstants k{0.7, 0.9, 0.5, "t"};
    const double M = 20000, l2 = 0.3, rs = 4, a = 2;
    for (double target : {0.05, 0.01, 0.002}) {
      const double h0 = reverse_design_h0(target, l2, rs, a, M, k);
      if (h0 > rs) {
        CHECK(std::abs(prefactor_free_bound(l2, rs, {a, h0}, M, k) - target) <= 1e-12);
      }
    }
    const double at_cap = k.C / std::log(M);
    CHECK(reverse_design_h0(at_cap, l2, rs, a, M, k) == doctest::Approx(rs).epsilon(1e-12));
    const double h1 = reverse_design_h0(0.004, l2, rs, a, M, k);
    const double h2 = reverse_design_h0(0.002, l2, rs, a, M, k);
    CHECK(h2 - h1 == doctest::Approx(std::log(2.0) / std::min(a, k.c * l2)).epsilon(1e-12));

    const double r1 = reverse_design_lambda2(0.002, rs + 3, rs, M, k);
    const double r2 = reverse_design_lambda2(0.002, rs + 6, rs, M, k);
    CHECK(r2 == doctest::Approx(r1 / 2).epsilon(1e-12));
    CHECK(reverse_design_lambda2(at_cap, rs + 2, rs, M, k) == doctest::Approx(0.0).scale(1e-12));
    CHECK_THROWS_AS(reverse_design_lambda2(0.01, rs, rs, M, k), InputError);
    CHECK_THROWS_AS(reverse_design_h0(0.0, l2, rs, a, M, k), InputError);
    CHECK_THROWS_AS(reverse_design_h0(1.0, l2, rs, a, M, k), InputError);
  }

  TEST_CASE("chain: spectral bound absorbs the J-implied bound") {
    // J_bound <= C (2 + aH) e^{-gamma H} <= 2C (1 + aH) e^{-gamma H}, so the
    // factor-2 KL bound from J is dominated by the spectral bound with 4C.
    const BoundConstants k{1.0, 0.8, 0.5, "t"};
    const BoundConstants k4{4.0, 0.8, 0.5, "t"};
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0, 1);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
      const double a = 0.1 + 4 * u(rng), l2 = 0.01 + u(rng), rs = 3, H = 12 * u(rng), M = 1e4;
      const double jb = j_exponential_bound(l2, rs, {a, rs + H}, k);
      if (jb > 0.5) continue;
      ++checked;
      const double implied = 2 * jb / std::log(M);
      CHECK(*spectral_upper_bound(l2, rs, {a, rs + H}, M, k4).bound_I >= implied * (1 - 1e-12));
    }
    CHECK(checked > 100);
  }

  TEST_CASE("expander trend") {
    double prev = 1.0;
    for (std::size_t n : {100u, 200u, 400u, 800u}) {
      const Graph g = oracle::three_out(n, 5);
      const double h0 = std::ceil(2 * std::log(static_cast<double>(n)));
      const double I = imbalance_index(distance_histogram_exact(g), {1.0, h0}).I;
      CHECK(I <= prev);
      prev = I;
    }
  }
}
