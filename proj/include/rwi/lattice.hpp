#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rwi/errors.hpp"
#include "rwi/site.hpp"

namespace rwi {

// Killed symmetric continuous-time random walk on Z^d: total jump rate 1,
// independent killing at rate kappa > 0.
struct WalkSpec {
  int dim = 1;
  double kappa = 1.0;
  std::vector<std::pair<Site, double>> kernel;  // jump kernel p(e), e != 0

  static WalkSpec nearest_neighbor(int dim, double kappa);

  // Checks symmetry, normalization, p(0) = 0 and kappa > 0.
  void validate() const;
};

struct QuadOptions {
  double rel_tol = 1e-10;
  // Per-dimension cap on grid points (power of two), indexed by dim-1.
  int max_points[3] = {1 << 16, 1 << 11, 1 << 8};
  bool parallel = true;
};

// psi(theta) = sum_e p(e) (1 - cos(e . theta)), theta in [-pi,pi]^d.
double characteristic_exponent(const WalkSpec& spec, const double* theta);

// Tabulated potential u(x) on a finite symmetric window of displacements.
class GreenTable {
 public:
  GreenTable(const WalkSpec& spec, const std::vector<Site>& window,
             QuadOptions opts = {});

  const WalkSpec& spec() const { return spec_; }
  double u0() const { return u0_; }
  bool covers(const Site& dx) const { return values_.count(dx) > 0; }
  double u(const Site& dx) const;
  const std::map<Site, double>& values() const { return values_; }
  int grid_points_used() const { return grid_points_; }

  std::string to_csv() const;
  nlohmann::json to_json() const;

  // Window covering all differences of `sites` plus every displacement in
  // `extra` (symmetrized, origin included).
  static GreenTable for_sites(const WalkSpec& spec, std::span<const Site> sites,
                              std::span<const Site> extra = {}, QuadOptions opts = {});

 private:
  WalkSpec spec_;
  std::map<Site, double> values_;
  double u0_ = 0.0;
  int grid_points_ = 0;
};

// One-off evaluation of u(x) by the same quadrature.
double green(const WalkSpec& spec, const Site& x, QuadOptions opts = {});

// Equilibrium measure e_K and capacity of a finite set K.
struct EquilibriumData {
  std::vector<Site> K;
  std::vector<double> weights;  // e_K(y), y in K order
  double capacity = 0.0;

  // Cumulative entrance distribution e_K / cap, for sampling.
  std::vector<double> entrance_cdf() const;
};

EquilibriumData equilibrium(const GreenTable& table, const std::vector<Site>& K);

// P^y(hit K) = sum_z u(y - z) e_K(z); equals 1 on K.
double hitting_probability(const GreenTable& table, const EquilibriumData& eq, const Site& y);

// Max-norm residual of the defining system u_K e = 1 (diagnostic).
double equilibrium_residual(const GreenTable& table, const EquilibriumData& eq);

// Max-norm residual of (kappa+1) u(x) - sum_e p(e) u(x-e) - 1{x=0} over all
// x whose neighbors stay inside the window.
double resolvent_residual(const GreenTable& table);

}  // namespace rwi
