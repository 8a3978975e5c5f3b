#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rwi/lattice.hpp"
#include "rwi/rng.hpp"
#include "rwi/site.hpp"

namespace rwi {

// Lower-triangular factor of the covariance [u(x_i - x_j)] over a window.
struct CovarianceFactor {
  std::vector<Site> window;
  Eigen::MatrixXd lower;
  double jitter = 0.0;

  // Max-norm of L L^T - (C + jitter I).
  double reconstruction_residual(const GreenTable& table) const;
};

CovarianceFactor covariance_factor(const GreenTable& table, const std::vector<Site>& window);

using FieldSample = std::map<Site, double>;

FieldSample sample_field(const CovarianceFactor& factor, Rng& rng);

// Samples straight into a caller buffer ordered like factor.window.
void sample_field_values(const CovarianceFactor& factor, Rng& rng, std::vector<double>& out);

std::string field_csv(const std::vector<FieldSample>& samples, int dim);

// :G^n: as an explicit polynomial in g with variance u0:
// sum_j (-1)^j C(n,2j) (2j)!/(j! 2^j) u0^j g^(n-2j).
double wick_power(double g, int n, double u0);

// Coefficient of g^(n-2j) in :G^n:, as exact integers times u0^j.
std::vector<double> wick_coeffs(int n, double u0);

// Independent routes used as cross-checks.
double hermite_poly(int n, double x);        // physicists' H_n, by recurrence
double laguerre_half(int n, double x);       // Laguerre index -1/2, by recurrence
double wick_via_hermite(double g, int n, double u0);
double wick_via_laguerre(double g, int n, double u0);  // even n only

struct WickCheckReport {
  int n_max = 0;
  double max_rel_err_hermite = 0.0;
  double max_rel_err_laguerre = 0.0;
  bool pass = false;
};

WickCheckReport hermite_check(int n_max, double u0, const std::vector<double>& g_grid,
                              double tol = 1e-10);

struct ShiftedWickReport {
  int n_max = 0;
  double c = 0.0;
  double max_rel_err = 0.0;
  bool pass = false;
};

// Checks :(G+c)^{2n}: = P_n((G+c)^2) where P_n is read off :G^{2n}: = P_n(G^2)
// and the left side is evaluated through the binomial shift
// :(G+c)^m: = sum_k C(m,k) c^(m-k) :G^k:.
ShiftedWickReport shifted_wick_check(int n_max, double u0, double c,
                                     const std::vector<double>& g_grid, double tol = 1e-10);

struct GenFnReport {
  double s = 0.0;
  int order = 0;
  double max_abs_err = 0.0;
  bool pass = false;
};

// Truncated generating function: sum_{n<=N} s^n :G^n:/n! vs exp(s g - s^2 u0/2).
GenFnReport truncated_genfn_check(int order, double u0, double s,
                                  const std::vector<double>& g_grid, double tol = 1e-8);

}  // namespace rwi
