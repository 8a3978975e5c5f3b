#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "rwi/errors.hpp"
#include "rwi/parallel.hpp"
#include "rwi/soup.hpp"

using namespace rwi;

namespace {

struct Env {
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
  std::vector<Site> K{Site{0}, Site{2}};
  GreenTable table = GreenTable::for_sites(spec, K, std::vector<Site>{Site{1}, Site{3}});
  EquilibriumData eq = equilibrium(table, K);
  std::set<Site> kset{K.begin(), K.end()};
};

const Env& env() {
  static const Env e;
  return e;
}

}  // namespace

TEST_CASE("forward walk: lifetime and occupation match the potential") {
  const auto& e = env();
  const std::size_t runs = 100000;

  auto acc = par::mc_mean_vec(
      runs, 2,
      [&](std::size_t i, std::vector<double>& vals) {
        Rng rng(311, i);
        Segment seg = forward_walk(e.spec, Site{0}, rng);
        double life = 0.0, occ1 = 0.0;
        for (const auto& [s, h] : seg) {
          life += h;
          if (s == Site{1}) occ1 += h;
        }
        vals[0] = life;
        vals[1] = occ1;
      },
      true);

  CHECK(std::abs(acc.acc[0].z(1.0 / e.spec.kappa)) < 4.0);
  CHECK(std::abs(acc.acc[1].z(e.table.u(Site{1}))) < 4.0);
}

TEST_CASE("forward walk: heavy killing leaves a single holding interval") {
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 50.0);
  std::size_t single = 0;
  const std::size_t runs = 20000;
  for (std::size_t i = 0; i < runs; ++i) {
    Rng rng(17, i);
    if (forward_walk(spec, Site{0}, rng).size() == 1) ++single;
  }
  const double p = 50.0 / 51.0;
  const double z = (static_cast<double>(single) / runs - p) /
                   std::sqrt(p * (1 - p) / static_cast<double>(runs));
  CHECK(std::abs(z) < 4.0);
}

TEST_CASE("backward walk avoids K and accepts at the equilibrium rate") {
  const auto& e = env();
  const std::size_t attempts = 40000;
  std::size_t accepted = 0;
  std::size_t empty_accepted = 0;
  for (std::size_t i = 0; i < attempts; ++i) {
    Rng rng(421, i);
    Segment seg;
    if (backward_walk_attempt(e.spec, e.kset, Site{0}, rng, seg)) {
      ++accepted;
      if (seg.empty()) ++empty_accepted;
      for (const auto& [s, h] : seg) {
        CHECK(!e.kset.count(s));
        CHECK(h > 0.0);
      }
    }
  }
  const double target = e.eq.weights[0] / (1.0 + e.spec.kappa);
  const double phat = static_cast<double>(accepted) / attempts;
  const double z = (phat - target) / std::sqrt(target * (1 - target) / attempts);
  CHECK(std::abs(z) < 4.0);

  // killed-at-first-event share among accepted draws
  const double empty_target = (e.spec.kappa / (1.0 + e.spec.kappa)) / target;
  const double phat_empty = static_cast<double>(empty_accepted) / accepted;
  const double z_empty = (phat_empty - empty_target) /
                         std::sqrt(empty_target * (1 - empty_target) / accepted);
  CHECK(std::abs(z_empty) < 4.0);
}

TEST_CASE("backward walk raises when the budget is exhausted") {
  const auto& e = env();
  Rng rng(5, 5);
  CHECK_THROWS_AS(backward_walk(e.spec, e.kset, Site{0}, rng, 0), RejectionBudgetError);
}

TEST_CASE("soup at zero intensity is empty") {
  const auto& e = env();
  Soup soup = sample_soup(e.spec, e.eq, 0.0, 1, 0);
  CHECK(soup.poisson_count == 0);
  CHECK(soup.trajectories.empty());
  auto field = local_time_field(soup, e.K);
  for (const auto& [s, v] : field) CHECK(v == 0.0);
}

TEST_CASE("soup invariants: backward segments avoid K, count is recorded") {
  const auto& e = env();
  for (int s = 0; s < 50; ++s) {
    Soup soup = sample_soup(e.spec, e.eq, 1.5, 777, soup_stream_base(s));
    CHECK(soup.poisson_count == static_cast<long long>(soup.trajectories.size()));
    for (const auto& tr : soup.trajectories) {
      CHECK(e.kset.count(tr.entrance));
      CHECK(!tr.forward.empty());
      CHECK(tr.forward.front().first == tr.entrance);
      for (const auto& [site, h] : tr.backward) {
        CHECK(!e.kset.count(site));
        CHECK(h > 0.0);
      }
    }
  }
}

TEST_CASE("soup moments: mean, second and cross moments, Poisson count") {
  const auto& e = env();
  const double alpha = 1.0;
  const std::size_t samples = 50000;
  auto acc = par::mc_mean_vec(
      samples, 4,
      [&](std::size_t i, std::vector<double>& vals) {
        Soup soup = sample_soup(e.spec, e.eq, alpha, 2024, soup_stream_base(i),
                                SoupOptions{200000, false});
        double l0 = 0.0, l2 = 0.0;
        for (const auto& tr : soup.trajectories) {
          l0 += tr.occupation(Site{0});
          l2 += tr.occupation(Site{2});
        }
        vals[0] = l0;
        vals[1] = l0 * l0;
        vals[2] = l0 * l2;
        vals[3] = static_cast<double>(soup.poisson_count);
      },
      true);

  const double u0 = e.table.u0();
  const double u2 = e.table.u(Site{2});
  CHECK(std::abs(acc.acc[0].z(alpha)) < 4.0);
  CHECK(std::abs(acc.acc[1].z(alpha * alpha + 2.0 * alpha * u0)) < 4.0);
  CHECK(std::abs(acc.acc[2].z(alpha * alpha + 2.0 * alpha * u2)) < 4.0);
  CHECK(std::abs(acc.acc[3].z(alpha * e.eq.capacity)) < 4.0);
}

TEST_CASE("local time field: bookkeeping") {
  const auto& e = env();
  Soup soup = sample_soup(e.spec, e.eq, 2.0, 99, 0);

  // additivity under merging two soups
  Soup a = sample_soup(e.spec, e.eq, 1.0, 5, soup_stream_base(1));
  Soup b = sample_soup(e.spec, e.eq, 1.0, 5, soup_stream_base(2));
  Soup merged = a;
  merged.trajectories.insert(merged.trajectories.end(), b.trajectories.begin(),
                             b.trajectories.end());
  auto fa = local_time_field(a, e.K);
  auto fb = local_time_field(b, e.K);
  auto fm = local_time_field(merged, e.K);
  for (const auto& s : e.K)
    CHECK(fm[s] == doctest::Approx(fa[s] + fb[s]).epsilon(1e-15));

  // a single-trajectory soup reproduces that trajectory's own occupation
  if (!soup.trajectories.empty()) {
    Soup single = soup;
    single.trajectories.resize(1);
    auto fs = local_time_field(single, e.K);
    for (const auto& s : e.K)
      CHECK(fs[s] == doctest::Approx(single.trajectories[0].occupation(s)).epsilon(1e-15));
  }
}

TEST_CASE("soup serialization is reproducible for a fixed seed") {
  const auto& e = env();
  Soup a = sample_soup(e.spec, e.eq, 1.0, 31415, 0, SoupOptions{200000, true});
  Soup b = sample_soup(e.spec, e.eq, 1.0, 31415, 0, SoupOptions{200000, false});
  CHECK(a.to_json(1) == b.to_json(1));
}

TEST_CASE("exponential moment check") {
  const auto& e = env();
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
  std::vector<Site> K{Site{0}};
  GreenTable table = GreenTable::for_sites(spec, K);
  EquilibriumData eq = equilibrium(table, K);

  // delta = 0 and alpha = 0 are exact
  ExpMomentReport zero_delta = exp_moment_check(spec, table, eq, Site{0}, 1.0, 0.0, 200, 1);
  CHECK(zero_delta.empirical == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(zero_delta.target == doctest::Approx(1.0).epsilon(1e-15));
  ExpMomentReport zero_alpha = exp_moment_check(spec, table, eq, Site{0}, 0.0, 0.3, 200, 1);
  CHECK(zero_alpha.empirical == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(zero_alpha.target == doctest::Approx(1.0).epsilon(1e-15));

  const double delta = 0.5 / table.u0();
  ExpMomentReport rep = exp_moment_check(spec, table, eq, Site{0}, 1.0, delta, 30000, 4);
  CHECK(rep.pass);
  CHECK(rep.target == doctest::Approx(std::exp(delta / (1.0 - delta * table.u0()))));

  CHECK_THROWS_AS(exp_moment_check(spec, table, eq, Site{0}, 1.0, 2.0, 10, 1),
                  DivergenceError);
  (void)e;
}
