#include "rwi/lattice.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "rwi/parallel.hpp"

namespace rwi {

WalkSpec WalkSpec::nearest_neighbor(int dim, double kappa) {
  WalkSpec spec;
  spec.dim = dim;
  spec.kappa = kappa;
  const double p = 1.0 / (2.0 * dim);
  for (int axis = 0; axis < dim; ++axis) {
    Site e;
    e.c[axis] = 1;
    spec.kernel.emplace_back(e, p);
    spec.kernel.emplace_back(-e, p);
  }
  return spec;
}

void WalkSpec::validate() const {
  if (dim < 1 || dim > 3) throw std::invalid_argument("WalkSpec: dim must be 1..3");
  if (!(kappa > 0.0)) throw std::invalid_argument("WalkSpec: kappa must be > 0");
  if (kernel.empty()) throw std::invalid_argument("WalkSpec: empty kernel");
  double total = 0.0;
  std::map<Site, double> probs;
  for (const auto& [e, p] : kernel) {
    if (e == Site{}) throw std::invalid_argument("WalkSpec: kernel mass at origin");
    if (!(p > 0.0)) throw std::invalid_argument("WalkSpec: nonpositive kernel weight");
    for (int i = dim; i < 3; ++i)
      if (e.c[i] != 0) throw std::invalid_argument("WalkSpec: jump outside dimension");
    if (!probs.emplace(e, p).second) throw std::invalid_argument("WalkSpec: duplicate jump");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("WalkSpec: kernel does not sum to 1");
  for (const auto& [e, p] : probs) {
    auto it = probs.find(-e);
    if (it == probs.end() || std::abs(it->second - p) > 1e-12)
      throw std::invalid_argument("WalkSpec: kernel not symmetric");
  }
}

double characteristic_exponent(const WalkSpec& spec, const double* theta) {
  double psi = 0.0;
  for (const auto& [e, p] : spec.kernel) {
    double dot = 0.0;
    for (int i = 0; i < spec.dim; ++i) dot += e.c[i] * theta[i];
    psi += p * (1.0 - std::cos(dot));
  }
  return psi;
}

namespace {

// Midpoint tensor rule over [-pi,pi]^d with N points per axis. The integrand
// is smooth and periodic (kappa > 0), so doubling N converges exponentially;
// the result at fixed N equals the exact u plus wrap-around terms u(x + N k).
std::vector<double> grid_pass(const WalkSpec& spec, const std::vector<Site>& xs,
                              int n, bool parallel) {
  const int d = spec.dim;
  const double step = 2.0 * M_PI / n;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);

  struct Acc {
    std::vector<double> v;
  };
  Acc init;
  init.v.assign(xs.size(), 0.0);

  Acc out = par::blocked_reduce(
      total, par::kDefaultBlocks, init,
      [&](Acc& acc, std::size_t idx) {
        double theta[3] = {0, 0, 0};
        std::size_t rest = idx;
        for (int i = 0; i < d; ++i) {
          const int j = static_cast<int>(rest % n);
          rest /= n;
          theta[i] = -M_PI + (j + 0.5) * step;
        }
        const double w = 1.0 / (spec.kappa + characteristic_exponent(spec, theta));
        for (std::size_t k = 0; k < xs.size(); ++k) {
          double dot = 0.0;
          for (int i = 0; i < d; ++i) dot += xs[k].c[i] * theta[i];
          acc.v[k] += std::cos(dot) * w;
        }
      },
      [](Acc& a, const Acc& b) {
        for (std::size_t k = 0; k < a.v.size(); ++k) a.v[k] += b.v[k];
      },
      parallel);

  const double scale = 1.0 / static_cast<double>(total);
  for (auto& v : out.v) v *= scale;
  return out.v;
}

std::vector<double> quadrature(const WalkSpec& spec, const std::vector<Site>& xs,
                               const QuadOptions& opts, int* points_used) {
  spec.validate();
  int radius = 0;
  for (const auto& x : xs) radius = std::max(radius, x.linf());
  int n = 8;
  while (n < 4 * radius + 8) n *= 2;
  const int cap = opts.max_points[spec.dim - 1];
  if (n > cap) throw QuadratureError("green quadrature: window too large for grid cap");

  std::vector<double> prev = grid_pass(spec, xs, n, opts.parallel);
  for (;;) {
    if (n * 2 > cap)
      throw QuadratureError("green quadrature failed to reach tolerance " +
                            std::to_string(opts.rel_tol));
    n *= 2;
    std::vector<double> cur = grid_pass(spec, xs, n, opts.parallel);
    double u0 = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k)
      if (xs[k] == Site{}) u0 = cur[k];
    double worst = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k)
      worst = std::max(worst, std::abs(cur[k] - prev[k]));
    if (u0 > 0.0 && worst <= opts.rel_tol * u0) {
      if (points_used) *points_used = n;
      return cur;
    }
    prev = std::move(cur);
  }
}

}  // namespace

GreenTable::GreenTable(const WalkSpec& spec, const std::vector<Site>& window,
                       QuadOptions opts)
    : spec_(spec) {
  std::set<Site> wanted;
  wanted.insert(Site{});
  for (const auto& x : window) {
    wanted.insert(x);
    wanted.insert(-x);
  }
  std::vector<Site> xs(wanted.begin(), wanted.end());
  std::vector<double> vals = quadrature(spec_, xs, opts, &grid_points_);
  for (std::size_t k = 0; k < xs.size(); ++k) values_[xs[k]] = vals[k];
  u0_ = values_.at(Site{});
  for (const auto& [x, v] : values_) {
    if (!(v > 0.0)) throw QuadratureError("green quadrature: nonpositive value");
    if (v > u0_ * (1.0 + 1e-9))
      throw QuadratureError("green quadrature: u(x) exceeds u(0)");
  }
}

double GreenTable::u(const Site& dx) const {
  auto it = values_.find(dx);
  if (it == values_.end())
    throw std::out_of_range("GreenTable: displacement not covered: " +
                            site_to_string(dx, spec_.dim));
  return it->second;
}

std::string GreenTable::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < spec_.dim; ++i) os << "x" << i + 1 << ",";
  os << "u\n";
  for (const auto& [x, v] : values_) {
    for (int i = 0; i < spec_.dim; ++i) os << x.c[i] << ",";
    os << v << "\n";
  }
  return os.str();
}

nlohmann::json GreenTable::to_json() const {
  nlohmann::json kernel = nlohmann::json::array();
  for (const auto& [e, p] : spec_.kernel) {
    nlohmann::json row;
    row["e"] = std::vector<int>(e.c.begin(), e.c.begin() + spec_.dim);
    row["p"] = p;
    kernel.push_back(std::move(row));
  }
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [x, v] : values_) {
    nlohmann::json row;
    row["x"] = std::vector<int>(x.c.begin(), x.c.begin() + spec_.dim);
    row["u"] = v;
    entries.push_back(std::move(row));
  }
  return nlohmann::json{{"d", spec_.dim},
                        {"kappa", spec_.kappa},
                        {"kernel", std::move(kernel)},
                        {"u0", u0_},
                        {"entries", std::move(entries)}};
}

GreenTable GreenTable::for_sites(const WalkSpec& spec, std::span<const Site> sites,
                                 std::span<const Site> extra, QuadOptions opts) {
  std::vector<Site> window;
  for (const auto& a : sites)
    for (const auto& b : sites) window.push_back(a - b);
  for (const auto& x : extra) window.push_back(x);
  return GreenTable(spec, window, opts);
}

double green(const WalkSpec& spec, const Site& x, QuadOptions opts) {
  std::vector<Site> xs{Site{}, x};
  std::vector<double> vals = quadrature(spec, xs, opts, nullptr);
  return x == Site{} ? vals[0] : vals[1];
}

EquilibriumData equilibrium(const GreenTable& table, const std::vector<Site>& K) {
  if (K.empty()) throw std::invalid_argument("equilibrium: empty K");
  const int m = static_cast<int>(K.size());
  Eigen::MatrixXd gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram(i, j) = table.u(K[i] - K[j]);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible())
    throw SingularSystemError("equilibrium: Gram system numerically singular");
  Eigen::VectorXd e = lu.solve(Eigen::VectorXd::Ones(m));

  EquilibriumData out;
  out.K = K;
  out.weights.resize(m);
  const double tol = 1e-10;
  for (int i = 0; i < m; ++i) {
    if (e(i) < -tol)
      throw NegativeWeightError("equilibrium: negative weight at " +
                                site_to_string(K[i], table.spec().dim));
    out.weights[i] = std::max(e(i), 0.0);
    out.capacity += out.weights[i];
  }
  if (!(out.capacity > 0.0)) throw SingularSystemError("equilibrium: nonpositive capacity");
  return out;
}

std::vector<double> EquilibriumData::entrance_cdf() const {
  std::vector<double> cdf(weights.size());
  double run = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    run += weights[i] / capacity;
    cdf[i] = run;
  }
  cdf.back() = 1.0;
  return cdf;
}

double hitting_probability(const GreenTable& table, const EquilibriumData& eq,
                           const Site& y) {
  double p = 0.0;
  for (std::size_t i = 0; i < eq.K.size(); ++i)
    p += table.u(y - eq.K[i]) * eq.weights[i];
  return p;
}

double equilibrium_residual(const GreenTable& table, const EquilibriumData& eq) {
  double worst = 0.0;
  for (const auto& x : eq.K)
    worst = std::max(worst, std::abs(hitting_probability(table, eq, x) - 1.0));
  return worst;
}

double resolvent_residual(const GreenTable& table) {
  const auto& spec = table.spec();
  double worst = 0.0;
  int checked = 0;
  for (const auto& [x, ux] : table.values()) {
    bool interior = true;
    double jump_sum = 0.0;
    for (const auto& [e, p] : spec.kernel) {
      if (!table.covers(x - e)) {
        interior = false;
        break;
      }
      jump_sum += p * table.u(x - e);
    }
    if (!interior) continue;
    const double target = (x == Site{}) ? 1.0 : 0.0;
    worst = std::max(worst, std::abs((spec.kappa + 1.0) * ux - jump_sum - target));
    ++checked;
  }
  if (checked == 0)
    throw std::invalid_argument("resolvent_residual: window has no interior point");
  return worst;
}

}  // namespace rwi
