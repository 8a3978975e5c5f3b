#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rwi/errors.hpp"
#include "rwi/moments.hpp"
#include "rwi/parallel.hpp"
#include "rwi/rational.hpp"

using namespace rwi;
using namespace rwi::mom;

namespace {

struct Env {
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
  std::vector<Site> K{Site{0}, Site{2}};
  GreenTable table = GreenTable::for_sites(
      spec, std::vector<Site>{Site{0}, Site{1}, Site{2}, Site{3}});
};

const Env& env() {
  static const Env e;
  return e;
}

}  // namespace

TEST_CASE("quasi moments of repeated points") {
  const auto& e = env();
  const double u0 = e.table.u0();
  CHECK(quasi_moment({Site{0}}, e.table) == doctest::Approx(1.0));
  CHECK(quasi_moment({Site{0}, Site{0}}, e.table) == doctest::Approx(2.0 * u0));
  CHECK(quasi_moment({Site{0}, Site{0}, Site{0}}, e.table) ==
        doctest::Approx(6.0 * u0 * u0));
  CHECK_THROWS_AS(quasi_moment(std::vector<Site>(9, Site{0}), e.table), DegreeBoundError);
}

TEST_CASE("soup moments via set partitions") {
  const auto& e = env();
  const double u0 = e.table.u0();
  const double alpha = 0.8;
  CHECK(soup_moment({Site{0}}, alpha, e.table) == doctest::Approx(alpha));
  CHECK(soup_moment({Site{0}, Site{0}}, alpha, e.table) ==
        doctest::Approx(alpha * alpha + 2.0 * alpha * u0));
  CHECK(soup_moment({Site{0}, Site{0}, Site{0}}, alpha, e.table) ==
        doctest::Approx(alpha * alpha * alpha + 6.0 * alpha * alpha * u0 +
                        6.0 * alpha * u0 * u0));
  const double uxy = e.table.u(Site{2});
  CHECK(soup_moment({Site{0}, Site{2}}, alpha, e.table) ==
        doctest::Approx(alpha * alpha + 2.0 * alpha * uxy));
}

TEST_CASE("soup moment alpha-grading matches block counts") {
  const auto& e = env();
  const std::vector<Site> pts{Site{0}, Site{0}, Site{2}, Site{2}, Site{0}};
  // coefficients of alpha^j assembled directly from the partition sum
  std::vector<double> coeff(pts.size() + 1, 0.0);
  for (const auto& part : set_partitions(static_cast<int>(pts.size()))) {
    double prod = 1.0;
    for (const auto& block : part) {
      std::vector<Site> blockpts;
      for (int i : block) blockpts.push_back(pts[i]);
      prod *= quasi_moment(blockpts, e.table);
    }
    coeff[part.size()] += prod;
  }
  for (double alpha : {0.3, 1.0, 1.7}) {
    double poly = 0.0;
    for (std::size_t j = 1; j < coeff.size(); ++j) poly += coeff[j] * std::pow(alpha, j);
    CHECK(soup_moment(pts, alpha, e.table) == doctest::Approx(poly).epsilon(1e-12));
  }
}

TEST_CASE("gaussian moments by pairing sums") {
  const auto& e = env();
  const double u0 = e.table.u0();
  const double uxy = e.table.u(Site{2});
  CHECK(gaussian_moment({}, e.table) == doctest::Approx(1.0));
  CHECK(gaussian_moment({Site{0}}, e.table) == doctest::Approx(0.0));
  CHECK(gaussian_moment({Site{0}, Site{0}}, e.table) == doctest::Approx(u0));
  CHECK(gaussian_moment(std::vector<Site>(4, Site{0}), e.table) ==
        doctest::Approx(3.0 * u0 * u0));
  CHECK(gaussian_moment({Site{0}, Site{0}, Site{2}, Site{2}}, e.table) ==
        doctest::Approx(u0 * u0 + 2.0 * uxy * uxy));
  CHECK_THROWS_AS(gaussian_moment(std::vector<Site>(11, Site{0}), e.table),
                  DegreeBoundError);
}

TEST_CASE("expectation: linearity and the squared observable") {
  const auto& e = env();
  const double u0 = e.table.u0();
  ObservableSpace space{{Site{0}}};
  const double alpha = 1.0;  // soup intensity alpha^2 = 1

  CHECK(expectation(space.constant(1.0), space, alpha * alpha, e.table) ==
        doctest::Approx(1.0));

  PolyD half_g2_plus_l = plain_lhs(space, 0, 1);
  CHECK(expectation(half_g2_plus_l, space, alpha * alpha, e.table) ==
        doctest::Approx(0.5 * u0 + alpha * alpha).epsilon(1e-12));

  PolyD squared = plain_lhs(space, 0, 2);
  const double expected =
      0.75 * u0 * u0 + 3.0 * alpha * alpha * u0 + std::pow(alpha, 4);
  CHECK(expectation(squared, space, alpha * alpha, e.table) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("renorm observables have mean alpha^n") {
  const auto& e = env();
  ObservableSpace space{{Site{0}}};
  for (double alpha : {0.5, 1.0, 1.3}) {
    for (int n = 1; n <= 4; ++n) {
      PolyD obs = renorm_observable(space, 0, n, e.table.u0());
      CHECK(expectation(obs, space, alpha, e.table) ==
            doctest::Approx(std::pow(alpha, n)).epsilon(1e-11));
    }
  }
}

TEST_CASE("wick/centered sides have the expected means") {
  const auto& e = env();
  ObservableSpace space{{Site{0}}};
  const double u0 = e.table.u0();
  const double alpha = 1.25;

  PolyD lhs1 = build_lhs(space, 0, 1, u0);
  CHECK(expectation(lhs1, space, alpha * alpha, e.table) ==
        doctest::Approx(alpha * alpha).epsilon(1e-12));
  PolyD rhs1 = build_rhs(space, 0, 1, alpha, u0);
  CHECK(expectation(rhs1, space, 0.0, e.table) ==
        doctest::Approx(alpha * alpha).epsilon(1e-12));

  PolyD lhs2 = build_lhs(space, 0, 2, u0);
  CHECK(expectation(lhs2, space, alpha * alpha, e.table) ==
        doctest::Approx(std::pow(alpha, 4)).epsilon(1e-11));
  PolyD rhs2 = build_rhs(space, 0, 2, alpha, u0);
  CHECK(expectation(rhs2, space, 0.0, e.table) ==
        doctest::Approx(std::pow(alpha, 4)).epsilon(1e-11));
}

TEST_CASE("plain right side matches the shifted-normal closed form") {
  const auto& e = env();
  ObservableSpace space{{Site{0}}};
  const double u0 = e.table.u0();
  const double alpha = 0.9;
  // E[(X + alpha)^{2p}] with X ~ N(0, u0/2)
  auto closed = [&](int p) {
    double acc = 0.0;
    for (int j = 0; 2 * j <= 2 * p; ++j) {
      double dfact = 1.0;
      for (int t = 2 * j - 1; t > 1; t -= 2) dfact *= t;
      acc += rat_to_double(Rat(binomial(2 * p, 2 * j))) * std::pow(alpha, 2 * (p - j)) *
             dfact * std::pow(0.5 * u0, j);
    }
    return acc;
  };
  for (int p = 1; p <= 3; ++p) {
    PolyD obs = plain_rhs(space, 0, p, alpha);
    CHECK(expectation(obs, space, 0.0, e.table) == doctest::Approx(closed(p)).epsilon(1e-12));
  }
}

TEST_CASE("isomorphism, exact mode") {
  const auto& e = env();
  auto rows1 = iso_verify_exact(1, e.K, 1.0, 4, e.table, 1e-9);
  for (const auto& row : rows1) {
    CAPTURE(row.family);
    CHECK(row.pass);
  }
  auto rows2 = iso_verify_exact(2, e.K, 1.0, 2, e.table, 1e-9);
  for (const auto& row : rows2) CHECK(row.pass);

  // alpha = 0 degenerate case
  for (const auto& row : iso_verify_exact(1, e.K, 0.0, 2, e.table, 1e-9)) CHECK(row.pass);
  for (const auto& row : iso_verify_exact(2, e.K, 0.0, 1, e.table, 1e-9)) CHECK(row.pass);
}

TEST_CASE("isomorphism, Monte Carlo mode") {
  const auto& e = env();
  auto rows = iso_verify_mc(1, e.K, 1.0, 2, 30000, 1357, e.table, true);
  CHECK(!rows.empty());
  for (const auto& row : rows) {
    CAPTURE(row.family);
    CAPTURE(row.orders);
    CHECK(row.pass);
  }
  auto rows3 = iso_verify_mc(3, e.K, 0.8, 1, 20000, 2468, e.table, true);
  for (const auto& row : rows3) CHECK(row.pass);
}

TEST_CASE("joint-moment crosscheck: frozen discrepancy pattern") {
  const auto& e = env();
  const double alpha = 0.75;
  const double uxy = e.table.u(Site{2});

  CrosscheckRow one = rilt_moment_crosscheck({1}, {Site{0}}, alpha, e.table);
  CHECK(one.expansion == doctest::Approx(alpha).epsilon(1e-12));
  CHECK(one.direct == doctest::Approx(alpha).epsilon(1e-12));
  CHECK(one.reconciled == doctest::Approx(alpha).epsilon(1e-12));

  CrosscheckRow two = rilt_moment_crosscheck({2}, {Site{0}}, alpha, e.table);
  CHECK(two.expansion == doctest::Approx(alpha * alpha).epsilon(1e-12));
  CHECK(two.reconciled == doctest::Approx(alpha * alpha).epsilon(1e-12));
  // transcribed formula doubles the two-singleton partition
  CHECK(two.direct == doctest::Approx(2.0 * alpha * alpha).epsilon(1e-12));

  CrosscheckRow pair = rilt_moment_crosscheck({1, 1}, {Site{0}, Site{2}}, alpha, e.table);
  const double expected = alpha * alpha + 2.0 * alpha * uxy;
  CHECK(pair.expansion == doctest::Approx(expected).epsilon(1e-12));
  CHECK(pair.reconciled == doctest::Approx(expected).epsilon(1e-12));
  CHECK(pair.direct == doctest::Approx(2.0 * alpha * alpha + 2.0 * alpha * uxy).epsilon(1e-12));

  // E[L_n] = alpha^n through the crosscheck for higher singleton profiles
  for (int n = 3; n <= 4; ++n) {
    CrosscheckRow row = rilt_moment_crosscheck({n}, {Site{0}}, alpha, e.table);
    CHECK(row.expansion == doctest::Approx(std::pow(alpha, n)).epsilon(1e-11));
    CHECK(row.reconciled == doctest::Approx(std::pow(alpha, n)).epsilon(1e-11));
  }
}

TEST_CASE("sampled mixed third moments match the exact oracle") {
  const auto& e = env();
  EquilibriumData eq = equilibrium(e.table, e.K);
  const double alpha = 1.0;
  const std::size_t samples = 100000;

  auto acc = par::mc_mean_vec(
      samples, 2,
      [&](std::size_t i, std::vector<double>& vals) {
        Soup soup = sample_soup(e.spec, eq, alpha, 60601, soup_stream_base(i),
                                SoupOptions{200000, false});
        double l0 = 0.0, l2 = 0.0;
        for (const auto& tr : soup.trajectories) {
          l0 += tr.occupation(Site{0});
          l2 += tr.occupation(Site{2});
        }
        vals[0] = l0 * l0 * l2;
        vals[1] = l0 * l2 * l2;
      },
      true);

  const double t0 = soup_moment({Site{0}, Site{0}, Site{2}}, alpha, e.table);
  const double t1 = soup_moment({Site{0}, Site{2}, Site{2}}, alpha, e.table);
  CHECK(std::abs(acc.acc[0].z(t0)) < 4.0);
  CHECK(std::abs(acc.acc[1].z(t1)) < 4.0);
}

TEST_CASE("pathwise decomposition") {
  const auto& e = env();
  EquilibriumData eq = equilibrium(e.table, e.K);

  // empty soup: all orders give 0 = 0
  Soup empty = sample_soup(e.spec, eq, 0.0, 11, 0);
  for (const auto& row : decomposition_check(empty, 4, Site{0}, e.table)) {
    CHECK(row.lhs == 0.0);
    CHECK(row.rhs == 0.0);
    CHECK(row.pass);
  }

  // single-trajectory soup: L_n equals the per-path polynomial
  Soup single = sample_soup(e.spec, eq, 1.0, 13, 0);
  while (single.trajectories.size() > 1) single.trajectories.pop_back();
  for (const auto& row : decomposition_check(single, 4, Site{0}, e.table)) CHECK(row.pass);

  // random soups
  for (int s = 0; s < 20; ++s) {
    Soup soup = sample_soup(e.spec, eq, 1.5, 77, soup_stream_base(s));
    for (const auto& row : decomposition_check(soup, 4, Site{0}, e.table)) {
      CAPTURE(s);
      CAPTURE(row.n);
      CHECK(row.pass);
    }
  }
}

TEST_CASE("degree bounds are enforced") {
  const auto& e = env();
  ObservableSpace space{{Site{0}}};
  PolyD big = PolyD::var(space.nvars(), space.lvar(0), 9);
  CHECK_THROWS_AS(expectation(big, space, 1.0, e.table), DegreeBoundError);
  PolyD bigg = PolyD::var(space.nvars(), space.gvar(0), 11);
  CHECK_THROWS_AS(expectation(bigg, space, 1.0, e.table), DegreeBoundError);
}
