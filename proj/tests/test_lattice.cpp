#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <set>

#include "rwi/lattice.hpp"
#include "rwi/parallel.hpp"
#include "rwi/rng.hpp"

using namespace rwi;

TEST_CASE("characteristic exponent: limits and symmetry") {
  WalkSpec spec = WalkSpec::nearest_neighbor(2, 1.0);
  double zero[3] = {0, 0, 0};
  CHECK(characteristic_exponent(spec, zero) == doctest::Approx(0.0).epsilon(1e-15));

  Rng rng(7, 0);
  for (int i = 0; i < 20; ++i) {
    double theta[3] = {(2 * rng.uniform01() - 1) * M_PI, (2 * rng.uniform01() - 1) * M_PI, 0};
    double neg[3] = {-theta[0], -theta[1], 0};
    CHECK(characteristic_exponent(spec, theta) ==
          doctest::Approx(characteristic_exponent(spec, neg)).epsilon(1e-14));
    CHECK(characteristic_exponent(spec, theta) >= 0.0);
  }

  WalkSpec d1 = WalkSpec::nearest_neighbor(1, 1.0);
  double pi_point[3] = {M_PI, 0, 0};
  CHECK(characteristic_exponent(d1, pi_point) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("walk spec validation") {
  CHECK_THROWS_AS(WalkSpec::nearest_neighbor(1, 0.0).validate(), std::invalid_argument);

  WalkSpec bad = WalkSpec::nearest_neighbor(1, 1.0);
  bad.kernel[0].second = 0.7;  // breaks symmetry and normalization
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  WalkSpec origin = WalkSpec::nearest_neighbor(1, 1.0);
  origin.kernel.emplace_back(Site{0}, 0.1);
  CHECK_THROWS_AS(origin.validate(), std::invalid_argument);
}

TEST_CASE("green closed form in one dimension") {
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
  const auto t0 = std::chrono::steady_clock::now();
  const double u0 = green(spec, Site{0});
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double exact = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(u0 - exact) / exact < 1e-8);
  CHECK(elapsed < 1.0);

  // ratio u(1)/u(0) = 2 - sqrt(3) from the resolvent recurrence
  const double u1 = green(spec, Site{1});
  CHECK(u1 / u0 == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("green table symmetry and resolvent identity") {
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
  std::vector<Site> window;
  for (int x = 0; x <= 6; ++x) window.push_back(Site{x});
  GreenTable table(spec, window);
  for (int x = 1; x <= 6; ++x)
    CHECK(table.u(Site{x}) == doctest::Approx(table.u(Site{-x})).epsilon(1e-12));
  CHECK(resolvent_residual(table) < 1e-9);

  WalkSpec d2 = WalkSpec::nearest_neighbor(2, 0.5);
  std::vector<Site> w2;
  for (int x = -4; x <= 4; ++x)
    for (int y = -4; y <= 4; ++y) w2.push_back(Site{x, y});
  GreenTable t2(d2, w2);
  CHECK(resolvent_residual(t2) < 1e-9);
  CHECK(t2.u0() > t2.u(Site{1, 0}));
}

TEST_CASE("green in d=2 matches a Monte Carlo occupation-time estimate") {
  WalkSpec spec = WalkSpec::nearest_neighbor(2, 0.5);
  const Site target{1, 0};
  const double u_quad = green(spec, target);

  const std::size_t paths = 1000000;
  std::vector<double> cdf;
  std::vector<Site> jumps;
  double run = 0.0;
  for (const auto& [e, p] : spec.kernel) {
    run += p;
    cdf.push_back(run);
    jumps.push_back(e);
  }
  cdf.back() = 1.0;
  const double total_rate = 1.0 + spec.kappa;
  const double kill = spec.kappa / total_rate;

  auto acc = par::mc_mean(
      paths,
      [&](std::size_t i) {
        Rng rng(424242, i);
        Site pos{0, 0};
        double occupied = 0.0;
        for (;;) {
          const double hold = rng.exponential(total_rate);
          if (pos == target) occupied += hold;
          if (rng.bernoulli(kill)) return occupied;
          pos = pos + jumps[rng.discrete_cdf(cdf)];
        }
      },
      true);
  CHECK(std::abs(acc.z(u_quad)) < 4.0);
}

TEST_CASE("quadrature failure surfaces as QuadratureError") {
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
  QuadOptions opts;
  opts.max_points[0] = 16;  // far below what the window needs
  std::vector<Site> window{Site{30}};
  CHECK_THROWS_AS(GreenTable(spec, window, opts), QuadratureError);
}

TEST_CASE("equilibrium: single site and two-point closed form") {
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
  std::vector<Site> K{Site{0}};
  GreenTable table = GreenTable::for_sites(spec, K);
  EquilibriumData eq = equilibrium(table, K);
  CHECK(eq.capacity == doctest::Approx(1.0 / table.u0()).epsilon(1e-12));
  CHECK(eq.weights[0] == doctest::Approx(1.0 / table.u0()).epsilon(1e-12));

  double prev_cap = eq.capacity;
  for (int dist : {1, 2, 4, 8}) {
    std::vector<Site> K2{Site{0}, Site{dist}};
    GreenTable t2 = GreenTable::for_sites(spec, K2);
    EquilibriumData e2 = equilibrium(t2, K2);
    const double closed = 2.0 / (t2.u0() + t2.u(Site{dist}));
    CHECK(e2.capacity == doctest::Approx(closed).epsilon(1e-10));
    CHECK(e2.weights[0] == doctest::Approx(1.0 / (t2.u0() + t2.u(Site{dist}))).epsilon(1e-10));
    CHECK(e2.capacity > prev_cap);  // monotone toward 2/u0
    prev_cap = e2.capacity;
    CHECK(e2.capacity < 2.0 / t2.u0());
  }
}

TEST_CASE("equilibrium residual stays tiny for |K| = 16") {
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
  std::vector<Site> K;
  for (int x = 0; x < 16; ++x) K.push_back(Site{x});
  GreenTable table = GreenTable::for_sites(spec, K);
  EquilibriumData eq = equilibrium(table, K);
  CHECK(equilibrium_residual(table, eq) < 1e-10);
  for (double w : eq.weights) CHECK(w >= 0.0);
}

TEST_CASE("hitting probability bound off K, with a Monte Carlo spot check") {
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
  std::vector<Site> K{Site{0}, Site{2}};
  std::vector<Site> extra;
  for (int x = -20; x <= 20; ++x) extra.push_back(Site{x});
  GreenTable table = GreenTable::for_sites(spec, K, extra);
  EquilibriumData eq = equilibrium(table, K);

  Rng rng(99, 0);
  std::set<Site> kset(K.begin(), K.end());
  for (int i = 0; i < 50; ++i) {
    Site y{static_cast<int>(rng.next() % 33) - 16};
    if (kset.count(y)) continue;
    CHECK(hitting_probability(table, eq, y) <= 1.0 + 1e-10);
  }

  // brute-force hitting probability from y = 5
  const Site start{5};
  const double predicted = hitting_probability(table, eq, start);
  std::vector<double> cdf{0.5, 1.0};
  std::vector<Site> jumps{Site{1}, Site{-1}};
  auto acc = par::mc_mean(
      200000,
      [&](std::size_t i) {
        Rng walk_rng(1234, i);
        Site pos = start;
        for (;;) {
          if (kset.count(pos)) return 1.0;
          if (walk_rng.bernoulli(spec.kappa / (1.0 + spec.kappa))) return 0.0;
          pos = pos + jumps[walk_rng.discrete_cdf(cdf)];
        }
      },
      true);
  CHECK(std::abs(acc.z(predicted)) < 4.0);
}

TEST_CASE("degenerate K triggers the singular-system error") {
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
  std::vector<Site> K{Site{0}, Site{0}};
  GreenTable table = GreenTable::for_sites(spec, K);
  CHECK_THROWS_AS(equilibrium(table, K), SingularSystemError);
}

TEST_CASE("table serialization carries the full window") {
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
  GreenTable table(spec, {Site{0}, Site{1}});
  const std::string csv = table.to_csv();
  CHECK(csv.find("x1,u") != std::string::npos);
  auto j = table.to_json();
  CHECK(j["d"] == 1);
  CHECK(j["u0"].get<double>() == doctest::Approx(table.u0()));
  CHECK(j["entries"].size() == 3);  // -1, 0, 1
  CHECK_THROWS_AS(table.u(Site{5}), std::out_of_range);
}
