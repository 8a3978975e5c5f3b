#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rwi/asymptotics.hpp"

using namespace rwi;
using namespace rwi::cont;

namespace {

ContinuumSpec brownian(double kappa = 1.0) {
  ContinuumSpec spec;
  spec.kind = ContinuumSpec::Exponent::brownian;
  spec.kappa = kappa;
  return spec;
}

}  // namespace

TEST_CASE("mollifier normalization and transform bounds") {
  const double mass =
      2.0 * M_PI *
      adaptive_integrate([](double r) { return mollifier(r) * r; }, 0.0, 1.0, 1e-12, 1e-14);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mollifier(1.2) == 0.0);
  CHECK(mollifier_hat(0.0) == doctest::Approx(1.0).epsilon(1e-10));
  for (double rho : {0.5, 2.0, 7.0, 19.0, 45.0})
    CHECK(std::abs(mollifier_hat(rho)) <= 1.0 + 1e-12);
  // autocorrelation: total mass is (int f)^2 = 1
  const double auto_mass =
      2.0 * M_PI *
      adaptive_integrate([](double r) { return mollifier_autocorr(r) * r; }, 0.0, 2.0,
                         1e-10, 1e-13);
  CHECK(auto_mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("h: endpoints, monotonicity and the Brownian closed form") {
  ContinuumSpec spec = brownian(1.0);
  CHECK(h_fn(spec, 0.0) == 0.0);
  double prev = 0.0;
  for (double s : {0.5, 1.0, 2.0, 8.0, 64.0}) {
    const double h = h_fn(spec, s);
    CHECK(h > prev);
    prev = h;
  }
  for (double s : {1.0, 10.0, 100.0, 1000.0}) {
    const double closed = h_brownian_closed(1.0, s);
    CHECK(std::abs(h_fn(spec, s) - closed) / closed < 1e-8);
  }

  ContinuumSpec logspec;
  logspec.kind = ContinuumSpec::Exponent::log_tempered;
  logspec.log_a = 1.0;
  logspec.kappa = 0.5;
  CHECK(logspec.psi(0.0) == 0.0);
  prev = 0.0;
  for (double s : {1.0, 4.0, 16.0, 256.0}) {
    const double h = h_fn(logspec, s);
    CHECK(h > prev);
    prev = h;
  }
}

TEST_CASE("u_radial: Brownian closed form sanity") {
  ContinuumSpec spec = brownian(1.0);
  // K0 decreases; u positive
  double prev = u_radial(spec, 0.05);
  for (double r : {0.1, 0.4, 1.0, 2.5}) {
    const double u = u_radial(spec, r);
    CHECK(u > 0.0);
    CHECK(u < prev);
    prev = u;
  }
  // log-tempered route stays positive and decreasing too
  ContinuumSpec logspec;
  logspec.kind = ContinuumSpec::Exponent::log_tempered;
  logspec.log_a = 1.0;
  logspec.kappa = 1.0;
  prev = u_radial(logspec, 0.05);
  for (double r : {0.15, 0.5, 1.5}) {
    const double u = u_radial(logspec, r);
    CHECK(u > 0.0);
    CHECK(u < prev);
    prev = u;
  }
}

TEST_CASE("chain function: dual routes at k = 1") {
  ContinuumSpec spec = brownian(1.0);
  const double eps = 0.25;

  const double real_space = chain_fn_realspace_k1(spec, eps);
  const double fourier = chain_fn_fourier(spec, 1, eps);
  CHECK(std::abs(real_space - fourier) / fourier < 1e-6);

  ChainOptions opts;
  opts.radial_nodes = 96;
  const double operator_route = chain_fn(spec, 1, eps, opts);
  CHECK(std::abs(operator_route - real_space) / real_space < 5e-4);
}

TEST_CASE("single-frequency route is dominated by the unmollified integral") {
  ContinuumSpec spec = brownian(1.0);
  for (int k : {1, 2, 3}) {
    for (double eps : {0.25, 0.0625}) {
      const double bound =
          adaptive_integrate([&](double s) { return std::pow(spec.uhat(s), k) * s; }, 0.0,
                             400.0 / eps, 1e-10, 1e-14) /
          (2.0 * M_PI);
      CHECK(chain_fn_fourier(spec, k, eps) <= bound * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("cycle function: positivity and dual route at eps = 0.5") {
  ContinuumSpec spec = brownian(1.0);
  const double real_space = cycle_fn2(spec, 0.5);
  CHECK(real_space > 0.0);
  const double fourier = cycle_fn2_fourier(spec, 0.5);
  CHECK(std::abs(real_space - fourier) / real_space < 1e-5);
}

TEST_CASE("ratio brackets stay bounded on a short grid") {
  ContinuumSpec spec = brownian(1.0);
  ChainOptions opts;
  opts.radial_nodes = 96;
  std::vector<double> grid{0.125, 0.0625, 0.03125, 0.015625};
  AsymptoticsReport rep = asymptotics_report(spec, 2, grid, opts);
  for (int k = 1; k <= 2; ++k) {
    const double spread = rep.ratio_spread(k);
    CAPTURE(k);
    CHECK(spread >= 1.0);
    CHECK(spread < 10.0);
  }
  CHECK(rep.cycle_ratio_spread() < 10.0);
  const std::string csv = rep.to_csv();
  CHECK(csv.find("eps,h") != std::string::npos);
  CHECK(csv.find("cy2_over_h2") != std::string::npos);
}
