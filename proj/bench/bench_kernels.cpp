// Timing comparison of the OpenMP kernels against their serial reference
// paths. Results are identical by construction; only the wall time differs.

#include <chrono>
#include <cstdio>

#include "rwi/asymptotics.hpp"
#include "rwi/gaussian.hpp"
#include "rwi/lattice.hpp"
#include "rwi/parallel.hpp"
#include "rwi/soup.hpp"

using namespace rwi;

namespace {

template <class Fn>
double time_ms(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.1f ms   omp %9.1f ms   speedup %.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", par::max_threads());

  {
    WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
    std::vector<Site> K{Site{0}, Site{2}};
    GreenTable table = GreenTable::for_sites(spec, K);
    EquilibriumData eq = equilibrium(table, K);
    auto batch = [&](bool parallel) {
      auto acc = par::mc_mean(
          20000,
          [&](std::size_t i) {
            Soup soup = sample_soup(spec, eq, 1.0, 99, soup_stream_base(i),
                                    SoupOptions{200000, false});
            double l = 0.0;
            for (const auto& tr : soup.trajectories) l += tr.occupation(Site{0});
            return l;
          },
          parallel);
      return acc.mean();
    };
    double r1 = 0, r2 = 0;
    const double s = time_ms([&] { r1 = batch(false); });
    const double p = time_ms([&] { r2 = batch(true); });
    report("soup batch (20k soups)", s, p);
    if (r1 != r2) std::printf("  MISMATCH %a vs %a\n", r1, r2);
  }

  {
    WalkSpec spec = WalkSpec::nearest_neighbor(1, 1.0);
    std::vector<Site> window{Site{0}, Site{1}};
    GreenTable table = GreenTable::for_sites(spec, window);
    CovarianceFactor factor = covariance_factor(table, window);
    const double u0 = table.u0();
    auto batch = [&](bool parallel) {
      auto acc = par::mc_mean(
          200000,
          [&](std::size_t i) {
            Rng rng(5, i);
            std::vector<double> g;
            sample_field_values(factor, rng, g);
            return wick_power(g[0], 4, u0) * wick_power(g[1], 4, u0);
          },
          parallel);
      return acc.mean();
    };
    double r1 = 0, r2 = 0;
    const double s = time_ms([&] { r1 = batch(false); });
    const double p = time_ms([&] { r2 = batch(true); });
    report("field batch (200k samples)", s, p);
    if (r1 != r2) std::printf("  MISMATCH %a vs %a\n", r1, r2);
  }

  {
    WalkSpec spec = WalkSpec::nearest_neighbor(2, 0.5);
    std::vector<Site> window;
    for (int x = -10; x <= 10; ++x)
      for (int y = -10; y <= 10; ++y) window.push_back(Site{x, y});
    QuadOptions serial_opts, parallel_opts;
    serial_opts.parallel = false;
    parallel_opts.parallel = true;
    double u1 = 0, u2 = 0;
    const double s = time_ms([&] { u1 = GreenTable(spec, window, serial_opts).u0(); });
    const double p = time_ms([&] { u2 = GreenTable(spec, window, parallel_opts).u0(); });
    report("green table d=2, r=10", s, p);
    if (u1 != u2) std::printf("  MISMATCH %a vs %a\n", u1, u2);
  }

  {
    cont::ContinuumSpec spec;
    spec.kind = cont::ContinuumSpec::Exponent::brownian;
    spec.kappa = 1.0;
    cont::ChainOptions serial_opts, parallel_opts;
    serial_opts.radial_nodes = parallel_opts.radial_nodes = 96;
    serial_opts.parallel = false;
    parallel_opts.parallel = true;
    double c1 = 0, c2 = 0;
    const double s = time_ms([&] { c1 = cont::chain_fn(spec, 3, 1.0 / 64, serial_opts); });
    const double p = time_ms([&] { c2 = cont::chain_fn(spec, 3, 1.0 / 64, parallel_opts); });
    report("chain kernel (96 nodes)", s, p);
    if (c1 != c2) std::printf("  MISMATCH %a vs %a\n", c1, c2);
  }

  return 0;
}
