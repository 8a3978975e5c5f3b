#include "rwi/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rwi/algebra.hpp"
#include "rwi/errors.hpp"
#include "rwi/parallel.hpp"
#include "rwi/rational.hpp"

namespace rwi::mom {

std::vector<std::vector<std::vector<int>>> set_partitions(int n) {
  std::vector<std::vector<std::vector<int>>> out;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  // restricted growth strings: a[i] <= 1 + max(a[0..i-1])
  std::vector<int> a(n, 0);
  for (;;) {
    int blocks = *std::max_element(a.begin(), a.end()) + 1;
    std::vector<std::vector<int>> part(blocks);
    for (int i = 0; i < n; ++i) part[a[i]].push_back(i);
    out.push_back(std::move(part));

    int i = n - 1;
    for (; i > 0; --i) {
      int prefix_max = *std::max_element(a.begin(), a.begin() + i);
      if (a[i] <= prefix_max) break;
    }
    if (i == 0) break;
    ++a[i];
    std::fill(a.begin() + i + 1, a.end(), 0);
  }
  return out;
}

double quasi_moment(const std::vector<Site>& points, const GreenTable& table) {
  const int k = static_cast<int>(points.size());
  if (k == 0) return 1.0;
  if (k > kMaxSoupDegree) throw DegreeBoundError("quasi_moment: more than 8 points");
  if (k == 1) return 1.0;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  double acc = 0.0;
  do {
    double prod = 1.0;
    for (int j = 0; j + 1 < k; ++j) prod *= table.u(points[idx[j]] - points[idx[j + 1]]);
    acc += prod;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return acc;
}

double soup_moment(const std::vector<Site>& points, double alpha, const GreenTable& table) {
  const int k = static_cast<int>(points.size());
  if (k == 0) return 1.0;
  if (k > kMaxSoupDegree) throw DegreeBoundError("soup_moment: total multiplicity > 8");
  double acc = 0.0;
  for (const auto& part : set_partitions(k)) {
    double term = std::pow(alpha, static_cast<double>(part.size()));
    for (const auto& block : part) {
      std::vector<Site> pts;
      pts.reserve(block.size());
      for (int i : block) pts.push_back(points[i]);
      term *= quasi_moment(pts, table);
    }
    acc += term;
  }
  return acc;
}

double soup_moment(const std::vector<std::pair<Site, int>>& request, double alpha,
                   const GreenTable& table) {
  std::vector<Site> points;
  for (const auto& [s, mult] : request)
    for (int i = 0; i < mult; ++i) points.push_back(s);
  return soup_moment(points, alpha, table);
}

namespace {

double matching_sum(std::vector<Site>& pts, std::vector<char>& used, int remaining,
                    const GreenTable& table) {
  if (remaining == 0) return 1.0;
  int first = 0;
  while (used[first]) ++first;
  used[first] = 1;
  double acc = 0.0;
  for (std::size_t j = first + 1; j < pts.size(); ++j) {
    if (used[j]) continue;
    used[j] = 1;
    acc += table.u(pts[first] - pts[j]) * matching_sum(pts, used, remaining - 2, table);
    used[j] = 0;
  }
  used[first] = 0;
  return acc;
}

}  // namespace

double gaussian_moment(const std::vector<Site>& points, const GreenTable& table) {
  const int k = static_cast<int>(points.size());
  if (k > kMaxGaussianDegree) throw DegreeBoundError("gaussian_moment: degree > 10");
  if (k % 2 != 0) return 0.0;
  if (k == 0) return 1.0;
  std::vector<Site> pts = points;
  std::vector<char> used(points.size(), 0);
  return matching_sum(pts, used, k, table);
}

double expectation(const PolyD& observable, const ObservableSpace& space, double alpha,
                   const GreenTable& table) {
  const int m = space.count();
  if (observable.nvars() != space.nvars())
    throw std::invalid_argument("expectation: observable width mismatch");
  double acc = 0.0;
  for (const auto& [mono, c] : observable.terms()) {
    std::vector<Site> lpts, gpts;
    for (int i = 0; i < m; ++i) {
      for (int e = 0; e < mono[space.lvar(i)]; ++e) lpts.push_back(space.sites[i]);
      for (int e = 0; e < mono[space.gvar(i)]; ++e) gpts.push_back(space.sites[i]);
    }
    const double gm = gaussian_moment(gpts, table);
    if (gm == 0.0) continue;
    acc += c * gm * soup_moment(lpts, alpha, table);
  }
  return acc;
}

PolyD wick_observable(const ObservableSpace& space, int i, int order, double u0) {
  const std::vector<double> coeffs = wick_coeffs(order, u0);
  PolyD out(space.nvars());
  for (int j = 0; j <= order / 2; ++j) {
    std::vector<int> mono(space.nvars(), 0);
    mono[space.gvar(i)] = order - 2 * j;
    out.add_term(mono, coeffs[j]);
  }
  return out;
}

PolyD renorm_observable(const ObservableSpace& space, int i, int n, double u0) {
  static const std::vector<PolyQ> family = alg::renorm_polys_gf_toy(8);
  if (n < 0 || n > 8) throw DegreeBoundError("renorm_observable: n out of range");
  PolyD out(space.nvars());
  for (const auto& [mono, c] : family[n].terms()) {
    // toy layout: variable 0 is the local time, variable 1 is u
    std::vector<int> target(space.nvars(), 0);
    target[space.lvar(i)] = mono[0];
    out.add_term(target, rat_to_double(c) * std::pow(u0, mono[1]));
  }
  return out;
}

PolyD build_lhs(const ObservableSpace& space, int i, int n, double u0) {
  PolyD out(space.nvars());
  for (int j = 0; j <= n; ++j) {
    const double cnj = rat_to_double(Rat(binomial(n, j)));
    PolyD term = wick_observable(space, i, 2 * j, u0);
    term.scale(cnj / std::pow(2.0, j));
    term *= renorm_observable(space, i, n - j, u0);
    out += term;
  }
  return out;
}

PolyD build_rhs(const ObservableSpace& space, int i, int n, double alpha, double u0) {
  PolyD out(space.nvars());
  for (int j = 0; j <= 2 * n; ++j) {
    PolyD term = wick_observable(space, i, j, u0);
    term.scale(rat_to_double(Rat(binomial(2 * n, j))) * std::pow(alpha, 2 * n - j) /
               std::pow(2.0, j / 2.0));
    out += term;
  }
  return out;
}

PolyD plain_lhs(const ObservableSpace& space, int i, int n) {
  PolyD base = space.g(i) * space.g(i);
  base.scale(0.5);
  base += space.l(i);
  return base.pow(n);
}

PolyD plain_rhs(const ObservableSpace& space, int i, int n, double alpha) {
  PolyD lin = space.g(i);
  lin.scale(1.0 / std::sqrt(2.0));
  lin += space.constant(alpha);
  return lin.pow(2 * n);
}

namespace {

std::vector<std::vector<int>> multi_indices(int sites, int max_order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(sites, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == sites) {
      int total = std::accumulate(cur.begin(), cur.end(), 0);
      if (total >= 1) out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[pos] = e;
      rec(pos + 1, left - e);
      cur[pos] = 0;
    }
  };
  rec(0, max_order);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const int ta = std::accumulate(a.begin(), a.end(), 0);
    const int tb = std::accumulate(b.begin(), b.end(), 0);
    return std::tie(ta, a) < std::tie(tb, b);
  });
  return out;
}

double rel_gap(double a, double b) {
  const double denom = std::max(std::abs(a), std::abs(b));
  if (denom < 1e-9) return std::abs(a - b);
  return std::abs(a - b) / denom;
}

}  // namespace

std::vector<IsoRow> iso_verify_exact(int n, const std::vector<Site>& sites, double alpha,
                                     int max_order, const GreenTable& table, double rel_tol) {
  if (n < 1 || n > 2) throw DegreeBoundError("iso_verify_exact: n must be 1 or 2");
  ObservableSpace space{sites};
  const double u0 = table.u0();
  const int m = space.count();

  std::vector<PolyD> wick_l(m, PolyD(space.nvars())), wick_r(m, PolyD(space.nvars()));
  std::vector<PolyD> plain_l(m, PolyD(space.nvars())), plain_r(m, PolyD(space.nvars()));
  for (int i = 0; i < m; ++i) {
    wick_l[i] = build_lhs(space, i, n, u0);
    wick_r[i] = build_rhs(space, i, n, alpha, u0);
    plain_l[i] = plain_lhs(space, i, n);
    plain_r[i] = plain_rhs(space, i, n, alpha);
  }

  std::vector<IsoRow> rows;
  for (const auto& orders : multi_indices(m, max_order)) {
    for (const char* family : {"wick", "plain"}) {
      PolyD lobs = PolyD::one(space.nvars());
      PolyD robs = PolyD::one(space.nvars());
      for (int i = 0; i < m; ++i) {
        if (!orders[i]) continue;
        const bool wick = family[0] == 'w';
        lobs *= (wick ? wick_l[i] : plain_l[i]).pow(orders[i]);
        robs *= (wick ? wick_r[i] : plain_r[i]).pow(orders[i]);
      }
      IsoRow row;
      row.family = family;
      row.orders = orders;
      row.lhs = expectation(lobs, space, alpha * alpha, table);
      row.rhs = expectation(robs, space, 0.0, table);
      row.rel_err = rel_gap(row.lhs, row.rhs);
      row.pass = row.rel_err <= rel_tol;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<IsoMcRow> iso_verify_mc(int n, const std::vector<Site>& sites, double alpha,
                                    int max_order, std::size_t samples, std::uint64_t seed,
                                    const GreenTable& table, bool parallel) {
  if (n < 1 || n > 3) throw DegreeBoundError("iso_verify_mc: n must be 1..3");
  ObservableSpace space{sites};
  const double u0 = table.u0();
  const int m = space.count();

  EquilibriumData eq = equilibrium(table, sites);
  CovarianceFactor factor = covariance_factor(table, sites);

  const auto indices = multi_indices(m, max_order);

  // Row targets: exact field-only expectations of the right sides.
  std::vector<PolyD> wick_l(m, PolyD(space.nvars())), plain_l(m, PolyD(space.nvars()));
  std::vector<IsoMcRow> rows;
  for (int i = 0; i < m; ++i) {
    wick_l[i] = build_lhs(space, i, n, u0);
    plain_l[i] = plain_lhs(space, i, n);
  }
  for (const auto& orders : indices) {
    for (const char* family : {"wick", "plain"}) {
      PolyD robs = PolyD::one(space.nvars());
      for (int i = 0; i < m; ++i) {
        if (!orders[i]) continue;
        const bool wick = family[0] == 'w';
        robs *= (wick ? build_rhs(space, i, n, alpha, u0) : plain_rhs(space, i, n, alpha))
                    .pow(orders[i]);
      }
      IsoMcRow row;
      row.family = family;
      row.orders = orders;
      row.target = expectation(robs, space, 0.0, table);
      rows.push_back(std::move(row));
    }
  }

  const std::size_t nrows = rows.size();
  auto acc = par::mc_mean_vec(
      samples, nrows,
      [&](std::size_t s, std::vector<double>& vals) {
        const std::uint64_t base = soup_stream_base(s);
        Rng field_rng(seed ^ 0x517cc1b727220a95ULL, base);
        std::vector<double> point(space.nvars(), 0.0);
        std::vector<double> g;
        sample_field_values(factor, field_rng, g);
        Soup soup = sample_soup(table.spec(), eq, alpha * alpha, seed, base,
                                SoupOptions{200000, false});
        auto field = local_time_field(soup, sites);
        for (int i = 0; i < m; ++i) {
          point[space.lvar(i)] = field[sites[i]];
          point[space.gvar(i)] = g[i];
        }
        std::size_t r = 0;
        for (const auto& orders : indices) {
          for (const char* family : {"wick", "plain"}) {
            double v = 1.0;
            for (int i = 0; i < m; ++i) {
              if (!orders[i]) continue;
              const bool wick = family[0] == 'w';
              const double base_val = (wick ? wick_l[i] : plain_l[i]).eval(point);
              v *= std::pow(base_val, orders[i]);
            }
            vals[r++] = v;
          }
        }
      },
      parallel);

  for (std::size_t r = 0; r < nrows; ++r) {
    rows[r].mean = acc.acc[r].mean();
    rows[r].se = acc.acc[r].se();
    rows[r].z = acc.acc[r].z(rows[r].target);
    rows[r].pass = std::abs(rows[r].z) < 4.0;
  }
  return rows;
}

namespace {

// All assignments of slots to profile parts with the given multiplicities.
std::vector<std::vector<int>> group_assignments(const std::vector<int>& profile) {
  std::vector<int> slots;
  for (std::size_t g = 0; g < profile.size(); ++g)
    for (int i = 0; i < profile[g]; ++i) slots.push_back(static_cast<int>(g));
  std::sort(slots.begin(), slots.end());
  std::vector<std::vector<int>> out;
  do {
    out.push_back(slots);
  } while (std::next_permutation(slots.begin(), slots.end()));
  return out;
}

}  // namespace

CrosscheckRow rilt_moment_crosscheck(const std::vector<int>& profile,
                                     const std::vector<Site>& sites, double alpha,
                                     const GreenTable& table) {
  const int k = static_cast<int>(profile.size());
  if (static_cast<int>(sites.size()) != k)
    throw std::invalid_argument("rilt_moment_crosscheck: one site per profile entry");
  const int n = std::accumulate(profile.begin(), profile.end(), 0);
  if (n > 5) throw DegreeBoundError("rilt_moment_crosscheck: sum n_i <= 5");

  CrosscheckRow row;
  row.profile = profile;

  // Expansion route (authoritative): product of counterterm polynomials in
  // the per-site local times, evaluated by the partition moment formula.
  {
    ObservableSpace space{sites};
    PolyD obs = PolyD::one(space.nvars());
    for (int i = 0; i < k; ++i) obs *= renorm_observable(space, i, profile[i], table.u0());
    row.expansion = expectation(obs, space, alpha, table);
  }

  const auto partitions = set_partitions(n);

  // Direct route as transcribed: global alternating maps, blocks in natural
  // order, prefactor prod n_i!.
  {
    double prefactor = 1.0;
    for (int ni : profile) prefactor *= rat_to_double(Rat(factorial(ni)));
    const auto maps = group_assignments(profile);
    double total = 0.0;
    for (const auto& part : partitions) {
      double part_sum = 0.0;
      for (const auto& pi : maps) {
        bool ok = true;
        double prod = 1.0;
        for (const auto& block : part) {
          for (std::size_t t = 0; t + 1 < block.size(); ++t) {
            const int a = pi[block[t]], b = pi[block[t + 1]];
            if (a == b) {
              ok = false;
              break;
            }
            prod *= table.u(sites[a] - sites[b]);
          }
          if (!ok) break;
        }
        if (ok) part_sum += prod;
      }
      total += std::pow(alpha, static_cast<double>(part.size())) * part_sum;
    }
    row.direct = prefactor * total;
  }

  // Reconciling reading: slots carry fixed part labels; each block sums over
  // its own alternating permutations; no prefactor.
  {
    std::vector<int> slot_group;
    for (int g = 0; g < k; ++g)
      for (int i = 0; i < profile[g]; ++i) slot_group.push_back(g);
    double total = 0.0;
    for (const auto& part : partitions) {
      double prod_blocks = 1.0;
      for (const auto& block : part) {
        std::vector<int> idx(block.begin(), block.end());
        std::sort(idx.begin(), idx.end());
        double block_sum = 0.0;
        do {
          bool ok = true;
          double prod = 1.0;
          for (std::size_t t = 0; t + 1 < idx.size(); ++t) {
            const int a = slot_group[idx[t]], b = slot_group[idx[t + 1]];
            if (a == b) {
              ok = false;
              break;
            }
            prod *= table.u(sites[a] - sites[b]);
          }
          if (ok) block_sum += prod;
        } while (std::next_permutation(idx.begin(), idx.end()));
        prod_blocks *= block_sum;
      }
      total += std::pow(alpha, static_cast<double>(part.size())) * prod_blocks;
    }
    row.reconciled = total;
  }

  row.direct_over_expansion = row.expansion != 0.0 ? row.direct / row.expansion : 0.0;
  return row;
}

std::vector<DecompositionRow> decomposition_check(const Soup& soup, int n_max,
                                                  const Site& site, const GreenTable& table,
                                                  double rel_tol) {
  if (n_max > 4) throw DegreeBoundError("decomposition_check: n <= 4");
  const double u0 = table.u0();

  // Numeric counterterm polynomials B_n(t) with ch_j = u0^j.
  static const std::vector<PolyQ> family = alg::renorm_polys_gf_toy(8);
  auto bval = [&](int order, double t) {
    double acc = 0.0;
    for (const auto& [mono, c] : family[order].terms())
      acc += rat_to_double(c) * std::pow(u0, mono[1]) * std::pow(t, mono[0]);
    return acc;
  };

  std::vector<double> occ;
  double total = 0.0;
  for (const auto& tr : soup.trajectories) {
    const double o = tr.occupation(site);
    total += o;
    if (o > 0.0) occ.push_back(o);
  }
  const int active = static_cast<int>(occ.size());

  std::vector<DecompositionRow> rows;
  for (int order = 1; order <= n_max; ++order) {
    DecompositionRow row;
    row.n = order;
    row.lhs = bval(order, total);

    double rhs = 0.0;
    for (const auto& part : set_partitions(order)) {
      const int j = static_cast<int>(part.size());
      if (j > active) continue;
      // ordered tuples of distinct active trajectories
      std::vector<int> tuple(j, -1);
      std::vector<char> used(active, 0);
      std::function<void(int, double)> rec = [&](int pos, double prod) {
        if (pos == j) {
          rhs += prod;
          return;
        }
        for (int t = 0; t < active; ++t) {
          if (used[t]) continue;
          used[t] = 1;
          rec(pos + 1, prod * bval(static_cast<int>(part[pos].size()), occ[t]));
          used[t] = 0;
        }
      };
      rec(0, 1.0);
    }
    row.rhs = rhs;
    row.rel_err = rel_gap(row.lhs, row.rhs);
    row.pass = row.rel_err <= rel_tol;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rwi::mom
