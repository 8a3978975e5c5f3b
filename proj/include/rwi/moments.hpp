#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rwi/gaussian.hpp"
#include "rwi/lattice.hpp"
#include "rwi/polynomial.hpp"
#include "rwi/soup.hpp"

namespace rwi::mom {

// Observables are polynomials over [l_0..l_{m-1}, g_0..g_{m-1}]: soup local
// times and field values at m fixed sites.
struct ObservableSpace {
  std::vector<Site> sites;

  int count() const { return static_cast<int>(sites.size()); }
  int nvars() const { return 2 * count(); }
  int lvar(int i) const { return i; }
  int gvar(int i) const { return count() + i; }
  PolyD l(int i) const { return PolyD::var(nvars(), lvar(i)); }
  PolyD g(int i) const { return PolyD::var(nvars(), gvar(i)); }
  PolyD constant(double c) const { return PolyD::constant(nvars(), c); }
};

inline constexpr int kMaxSoupDegree = 8;      // permutation sum bound
inline constexpr int kMaxGaussianDegree = 10;  // matching sum bound

// Quasi-process moment of one block: sum over permutations pi of the points
// of prod_j u(y_pi(j) - y_pi(j+1)). Empty product for a single point.
double quasi_moment(const std::vector<Site>& points, const GreenTable& table);

// Soup moment: sum over set partitions of the expanded point list of
// alpha^{#blocks} prod_blocks quasi_moment(block).
double soup_moment(const std::vector<Site>& points, double alpha, const GreenTable& table);
double soup_moment(const std::vector<std::pair<Site, int>>& request, double alpha,
                   const GreenTable& table);

// Gaussian moment by the pairing sum; zero for odd total degree.
double gaussian_moment(const std::vector<Site>& points, const GreenTable& table);

// Monomial-wise E[prod g] * E[prod l] over the product measure.
double expectation(const PolyD& observable, const ObservableSpace& space, double alpha,
                   const GreenTable& table);

// --- observable builders ---------------------------------------------------

// :G^order: at site i as a polynomial in g_i.
PolyD wick_observable(const ObservableSpace& space, int i, int order, double u0);

// L_n at site i: the chain-counterterm polynomial with ch_j = u0^j.
PolyD renorm_observable(const ObservableSpace& space, int i, int n, double u0);

// sum_j C(n,j) (:G^{2j}:/2^j) L_{n-j} at site i (evaluated under soup
// intensity alpha^2 x field).
PolyD build_lhs(const ObservableSpace& space, int i, int n, double u0);

// J_n at site i: sum_j C(2n,j) alpha^{2n-j} :G^j:/2^{j/2} (field only).
PolyD build_rhs(const ObservableSpace& space, int i, int n, double alpha, double u0);

// Uncentered pair: (g^2/2 + l)^n and ((g/sqrt2 + alpha)^2)^n.
PolyD plain_lhs(const ObservableSpace& space, int i, int n);
PolyD plain_rhs(const ObservableSpace& space, int i, int n, double alpha);

// --- isomorphism verification ----------------------------------------------

struct IsoRow {
  std::string family;       // "wick" or "plain"
  std::vector<int> orders;  // multi-index over sites
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  bool pass = false;
};

// Exact mode: every multi-index with 1 <= total order <= max_order, both
// observable families, soup intensity alpha^2 on the left.
std::vector<IsoRow> iso_verify_exact(int n, const std::vector<Site>& sites, double alpha,
                                     int max_order, const GreenTable& table,
                                     double rel_tol = 1e-9);

struct IsoMcRow {
  std::string family;
  std::vector<int> orders;
  double target = 0.0;  // exact field-only expectation of the right side
  double mean = 0.0;
  double se = 0.0;
  double z = 0.0;
  bool pass = false;
};

std::vector<IsoMcRow> iso_verify_mc(int n, const std::vector<Site>& sites, double alpha,
                                    int max_order, std::size_t samples, std::uint64_t seed,
                                    const GreenTable& table, bool parallel = true);

// --- joint-moment crosscheck and pathwise decomposition --------------------

struct CrosscheckRow {
  std::vector<int> profile;
  double direct = 0.0;      // partition sum over global alternating maps, prefactor prod n_i!
  double reconciled = 0.0;  // per-block alternating permutations of concrete slots
  double expansion = 0.0;   // authoritative: counterterm expansion + soup moments
  double direct_over_expansion = 0.0;
};

CrosscheckRow rilt_moment_crosscheck(const std::vector<int>& profile,
                                     const std::vector<Site>& sites, double alpha,
                                     const GreenTable& table);

struct DecompositionRow {
  int n = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  bool pass = false;
};

// Pathwise identity on one sampled soup: B_n of the total local time equals
// the partition sum of ordered distinct-trajectory products.
std::vector<DecompositionRow> decomposition_check(const Soup& soup, int n_max,
                                                  const Site& site, const GreenTable& table,
                                                  double rel_tol = 1e-9);

// Enumerates set partitions of {0..n-1} as block lists (used by the moment
// sums and by tests).
std::vector<std::vector<std::vector<int>>> set_partitions(int n);

}  // namespace rwi::mom
