#include "rwi/soup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rwi/errors.hpp"
#include "rwi/parallel.hpp"

namespace rwi {

namespace {

struct KernelCdf {
  std::vector<double> cdf;
  std::vector<Site> jumps;

  explicit KernelCdf(const WalkSpec& spec) {
    double run = 0.0;
    for (const auto& [e, p] : spec.kernel) {
      run += p;
      cdf.push_back(run);
      jumps.push_back(e);
    }
    cdf.back() = 1.0;
  }

  const Site& draw(Rng& rng) const { return jumps[rng.discrete_cdf(cdf)]; }
};

}  // namespace

double Trajectory::occupation(const Site& x) const {
  double t = 0.0;
  for (const auto& [s, h] : forward)
    if (s == x) t += h;
  for (const auto& [s, h] : backward)
    if (s == x) t += h;
  return t;
}

Segment forward_walk(const WalkSpec& spec, const Site& x0, Rng& rng) {
  const KernelCdf kernel(spec);
  const double total_rate = 1.0 + spec.kappa;
  const double kill_prob = spec.kappa / total_rate;
  Segment seg;
  Site pos = x0;
  for (;;) {
    seg.emplace_back(pos, rng.exponential(total_rate));
    if (rng.bernoulli(kill_prob)) return seg;
    pos = pos + kernel.draw(rng);
  }
}

bool backward_walk_attempt(const WalkSpec& spec, const std::set<Site>& K, const Site& x0,
                           Rng& rng, Segment& out) {
  const KernelCdf kernel(spec);
  const double total_rate = 1.0 + spec.kappa;
  const double kill_prob = spec.kappa / total_rate;
  out.clear();
  // First event at x0: its holding belongs to the forward part.
  if (rng.bernoulli(kill_prob)) return true;
  Site pos = x0 + kernel.draw(rng);
  while (!K.count(pos)) {
    out.emplace_back(pos, rng.exponential(total_rate));
    if (rng.bernoulli(kill_prob)) return true;
    pos = pos + kernel.draw(rng);
  }
  return false;  // re-entered K before dying
}

Segment backward_walk(const WalkSpec& spec, const std::set<Site>& K, const Site& x0,
                      Rng& rng, long long max_attempts) {
  Segment seg;
  for (long long attempt = 0; attempt < max_attempts; ++attempt)
    if (backward_walk_attempt(spec, K, x0, rng, seg)) return seg;
  throw RejectionBudgetError("backward_walk: rejection budget exceeded after " +
                             std::to_string(max_attempts) + " attempts");
}

Soup sample_soup(const WalkSpec& spec, const EquilibriumData& eq, double alpha,
                 std::uint64_t seed, std::uint64_t stream_base, const SoupOptions& opts) {
  if (alpha < 0.0) throw std::invalid_argument("sample_soup: alpha must be >= 0");
  Soup soup;
  soup.alpha = alpha;
  soup.K = eq.K;
  soup.seed = seed;
  soup.stream_base = stream_base;

  Rng count_rng(seed, stream_base);
  soup.poisson_count = count_rng.poisson(alpha * eq.capacity);
  soup.trajectories.resize(soup.poisson_count);

  const std::set<Site> kset(eq.K.begin(), eq.K.end());
  const std::vector<double> entrance_cdf = eq.entrance_cdf();
  const std::size_t n = soup.trajectories.size();

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) if (opts.parallel && n > 16)
#endif
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    Rng rng(seed, stream_base + 1 + static_cast<std::uint64_t>(i));
    Trajectory& tr = soup.trajectories[i];
    tr.entrance = eq.K[rng.discrete_cdf(entrance_cdf)];
    tr.forward = forward_walk(spec, tr.entrance, rng);
    tr.backward = backward_walk(spec, kset, tr.entrance, rng, opts.max_rejection_attempts);
  }
  return soup;
}

std::map<Site, double> local_time_field(const Soup& soup, const std::vector<Site>& sites) {
  std::map<Site, double> field;
  for (const auto& s : sites) field[s] = 0.0;
  for (const auto& tr : soup.trajectories) {
    for (const auto& [s, h] : tr.forward) {
      auto it = field.find(s);
      if (it != field.end()) it->second += h;
    }
    for (const auto& [s, h] : tr.backward) {
      auto it = field.find(s);
      if (it != field.end()) it->second += h;
    }
  }
  return field;
}

std::string local_time_field_csv(const std::map<Site, double>& field, int dim) {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < dim; ++i) os << "x" << i + 1 << ",";
  os << "L1\n";
  for (const auto& [s, v] : field) {
    for (int i = 0; i < dim; ++i) os << s.c[i] << ",";
    os << v << "\n";
  }
  return os.str();
}

nlohmann::json Soup::to_json(int dim) const {
  auto segment_json = [dim](const Segment& seg) {
    nlohmann::json sites = nlohmann::json::array();
    nlohmann::json holdings = nlohmann::json::array();
    for (const auto& [s, h] : seg) {
      sites.push_back(std::vector<int>(s.c.begin(), s.c.begin() + dim));
      holdings.push_back(h);
    }
    return nlohmann::json{{"sites", std::move(sites)}, {"holdings", std::move(holdings)}};
  };
  nlohmann::json ks = nlohmann::json::array();
  for (const auto& s : K) ks.push_back(std::vector<int>(s.c.begin(), s.c.begin() + dim));
  nlohmann::json trs = nlohmann::json::array();
  for (const auto& tr : trajectories) {
    nlohmann::json t;
    t["entrance"] = std::vector<int>(tr.entrance.c.begin(), tr.entrance.c.begin() + dim);
    t["forward"] = segment_json(tr.forward);
    t["backward"] = segment_json(tr.backward);
    trs.push_back(std::move(t));
  }
  return nlohmann::json{{"alpha", alpha},
                        {"K", std::move(ks)},
                        {"seed", seed},
                        {"stream_base", stream_base},
                        {"poisson_count", poisson_count},
                        {"trajectories", std::move(trs)}};
}

ExpMomentReport exp_moment_check(const WalkSpec& spec, const GreenTable& table,
                                 const EquilibriumData& eq, const Site& x, double alpha,
                                 double delta, std::size_t samples, std::uint64_t seed,
                                 const SoupOptions& opts) {
  const double u0 = table.u0();
  if (delta < 0.0) throw std::invalid_argument("exp_moment_check: delta must be >= 0");
  if (delta * u0 >= 1.0)
    throw DivergenceError("exp_moment_check: delta*u0 >= 1, exponential moment diverges");

  auto acc = par::mc_mean(
      samples,
      [&](std::size_t i) {
        Soup soup = sample_soup(spec, eq, alpha, seed, soup_stream_base(i),
                                SoupOptions{opts.max_rejection_attempts, false});
        double l1 = 0.0;
        for (const auto& tr : soup.trajectories) l1 += tr.occupation(x);
        return std::exp(delta * l1);
      },
      opts.parallel);

  ExpMomentReport rep;
  rep.delta = delta;
  rep.samples = samples;
  rep.empirical = acc.mean();
  rep.se = acc.se();
  rep.target = std::exp(alpha * delta / (1.0 - delta * u0));
  rep.z = acc.z(rep.target);
  rep.pass = std::abs(rep.z) < 4.0;
  return rep;
}

}  // namespace rwi
