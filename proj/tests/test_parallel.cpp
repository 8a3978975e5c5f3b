#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rwi/asymptotics.hpp"
#include "rwi/lattice.hpp"
#include "rwi/parallel.hpp"
#include "rwi/soup.hpp"

using namespace rwi;

// The OpenMP kernels must be bit-identical to the serial reference: fixed
// block layout, per-block serial accumulation, ordered merge.

TEST_CASE("blocked reduction: serial and parallel sums agree bitwise") {
  auto value = [](std::size_t i) {
    const double x = static_cast<double>(i % 1000) * 1e-3 + 1e-9;
    return std::sin(x) / (1.0 + x);
  };
  for (std::size_t n : {0ull, 1ull, 7ull, 1000ull, 250001ull}) {
    auto serial = par::mc_mean(n, value, false);
    auto parallel = par::mc_mean(n, value, true);
    CHECK(serial.sum == parallel.sum);
    CHECK(serial.sumsq == parallel.sumsq);
    CHECK(serial.n == parallel.n);
  }
}

TEST_CASE("vector accumulators: serial and parallel agree bitwise") {
  auto fill = [](std::size_t i, std::vector<double>& vals) {
    Rng rng(7, i);
    vals[0] = rng.uniform01();
    vals[1] = rng.normal();
    vals[2] = vals[0] * vals[1];
  };
  auto serial = par::mc_mean_vec(20000, 3, fill, false);
  auto parallel = par::mc_mean_vec(20000, 3, fill, true);
  for (int k = 0; k < 3; ++k) {
    CHECK(serial.acc[k].sum == parallel.acc[k].sum);
    CHECK(serial.acc[k].sumsq == parallel.acc[k].sumsq);
  }
}

TEST_CASE("green table: serial and parallel quadrature agree bitwise") {
  WalkSpec spec = WalkSpec::nearest_neighbor(2, 0.75);
  std::vector<Site> window;
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y) window.push_back(Site{x, y});
  QuadOptions serial_opts, parallel_opts;
  serial_opts.parallel = false;
  parallel_opts.parallel = true;
  GreenTable a(spec, window, serial_opts);
  GreenTable b(spec, window, parallel_opts);
  for (const auto& [x, v] : a.values()) CHECK(v == b.u(x));
}

TEST_CASE("soup sampling: schedule-independent trajectories") {
  WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
  std::vector<Site> K{Site{0}, Site{2}};
  GreenTable table = GreenTable::for_sites(spec, K);
  EquilibriumData eq = equilibrium(table, K);
  Soup serial = sample_soup(spec, eq, 2.0, 4242, 0, SoupOptions{200000, false});
  Soup parallel = sample_soup(spec, eq, 2.0, 4242, 0, SoupOptions{200000, true});
  CHECK(serial.to_json(1) == parallel.to_json(1));
}

TEST_CASE("chain kernel: serial and parallel builds agree bitwise") {
  cont::ContinuumSpec spec;
  spec.kind = cont::ContinuumSpec::Exponent::brownian;
  spec.kappa = 1.0;
  cont::ChainOptions serial_opts, parallel_opts;
  serial_opts.radial_nodes = parallel_opts.radial_nodes = 48;
  serial_opts.parallel = false;
  parallel_opts.parallel = true;
  const double a = cont::chain_fn(spec, 2, 0.25, serial_opts);
  const double b = cont::chain_fn(spec, 2, 0.25, parallel_opts);
  CHECK(a == b);
}
