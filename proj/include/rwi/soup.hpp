#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rwi/lattice.hpp"
#include "rwi/rng.hpp"
#include "rwi/site.hpp"

namespace rwi {

using Segment = std::vector<std::pair<Site, double>>;  // (site, holding time)

// One bilateral trajectory of the soup, split at its first hit of K. The
// entrance holding interval belongs to the forward segment; backward sites
// never touch K.
struct Trajectory {
  Site entrance;
  Segment forward;   // starts at the entrance site
  Segment backward;  // strictly after the first reversed jump

  double occupation(const Site& x) const;
};

struct Soup {
  double alpha = 0.0;
  std::vector<Site> K;
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;
  long long poisson_count = 0;
  std::vector<Trajectory> trajectories;

  nlohmann::json to_json(int dim) const;
};

struct SoupOptions {
  long long max_rejection_attempts = 200000;
  bool parallel = true;
};

// Free killed walk from x0; holding times are Exp(1+kappa), the walk dies
// with probability kappa/(1+kappa) per event.
Segment forward_walk(const WalkSpec& spec, const Site& x0, Rng& rng);

// One rejection round of the conditioned reversed walk: returns true and
// fills `out` when the walk dies without revisiting K. The initial holding
// at x0 is excluded (it belongs to the forward part).
bool backward_walk_attempt(const WalkSpec& spec, const std::set<Site>& K, const Site& x0,
                           Rng& rng, Segment& out);

// Walk from x0 conditioned never to revisit K, by rejection. Acceptance
// probability per attempt is e_K(x0)/(1+kappa).
Segment backward_walk(const WalkSpec& spec, const std::set<Site>& K, const Site& x0,
                      Rng& rng, long long max_attempts = 200000);

// Poisson(alpha * cap(K)) trajectories, entrances from e_K/cap, one RNG
// stream per trajectory index (stream_base + 1 + i; the count itself is drawn
// from stream_base).
Soup sample_soup(const WalkSpec& spec, const EquilibriumData& eq, double alpha,
                 std::uint64_t seed, std::uint64_t stream_base = 0,
                 const SoupOptions& opts = {});

// Total occupation time of the soup at each requested site.
std::map<Site, double> local_time_field(const Soup& soup, const std::vector<Site>& sites);

std::string local_time_field_csv(const std::map<Site, double>& field, int dim);

struct ExpMomentReport {
  double delta = 0.0;
  double empirical = 0.0;
  double se = 0.0;
  double target = 0.0;
  double z = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

// Compares the empirical mean of exp(delta * L1(x)) over fresh soups against
// exp(alpha*delta/(1 - delta*u0)). Requires delta*u0 < 1.
ExpMomentReport exp_moment_check(const WalkSpec& spec, const GreenTable& table,
                                 const EquilibriumData& eq, const Site& x, double alpha,
                                 double delta, std::size_t samples, std::uint64_t seed,
                                 const SoupOptions& opts = {});

// Per-soup stream bases spaced so trajectory streams never collide.
inline std::uint64_t soup_stream_base(std::size_t soup_index) {
  return static_cast<std::uint64_t>(soup_index) << 21;
}

}  // namespace rwi
