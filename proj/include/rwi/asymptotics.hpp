#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rwi/errors.hpp"

namespace rwi::cont {

// Radially symmetric exponent psi(|xi|) with killing rate kappa, d = 2.
struct ContinuumSpec {
  enum class Exponent { brownian, log_tempered };

  Exponent kind = Exponent::brownian;
  double log_a = 1.0;  // exponent parameter for the log-tempered family
  double kappa = 1.0;

  double psi(double r) const;
  double uhat(double r) const { return 1.0 / (psi(r) + kappa); }
};

// Fixed smooth bump supported in the unit ball with unit mass.
double mollifier(double r);
// Radial Fourier transform; mollifier_hat(0) = 1, |mollifier_hat| <= 1.
double mollifier_hat(double rho);
// Radial autocorrelation (f * f)(rho), supported in [0,2].
double mollifier_autocorr(double rho);

// Potential density u(|x|) of the killed process: closed Bessel form for
// Brownian, Hankel quadrature otherwise.
double u_radial(const ContinuumSpec& spec, double r);

// h(s) = int_{|xi|<=s} dxi / (psi + kappa), radial quadrature.
double h_fn(const ContinuumSpec& spec, double s);
// 2 pi log(1 + s^2/(2 kappa)); Brownian closed form used as an oracle.
double h_brownian_closed(double kappa, double s);

struct ChainOptions {
  int radial_nodes = 128;
  double tol = 1e-9;
  bool parallel = true;
};

// Chain function: the (k+1)-variable mollified u-product integral, evaluated
// through k applications of the integral operator with kernel u(eps |y-y'|)
// on radial functions over the unit ball.
double chain_fn(const ContinuumSpec& spec, int k, double eps, const ChainOptions& opts = {});

// Single-frequency route (2pi)^{-2} int uhat^k |fhat(eps .)|^2: exact for
// k = 1 and an upper-bound surrogate for k >= 2.
double chain_fn_fourier(const ContinuumSpec& spec, int k, double eps);

// High-accuracy real-space route for k = 1 via the autocorrelation of the
// mollifier (independent of the operator discretization).
double chain_fn_realspace_k1(const ContinuumSpec& spec, double eps);

// Cycle function of order two, real space: int u^2(eps z) (f*f)(z) dz.
double cycle_fn2(const ContinuumSpec& spec, double eps);
// Fourier route through the self-convolution of uhat.
double cycle_fn2_fourier(const ContinuumSpec& spec, double eps);

struct AsymptoticsReport {
  std::vector<double> eps;
  int kmax = 0;
  std::vector<std::vector<double>> ch;  // ch[k-1][i]
  std::vector<double> cy2;
  std::vector<double> h;  // h(1/eps_i)

  // max/min of ch_k/h^k over the grid.
  double ratio_spread(int k) const;
  double cycle_ratio_spread() const;
  std::string to_csv() const;
};

AsymptoticsReport asymptotics_report(const ContinuumSpec& spec, int kmax,
                                     const std::vector<double>& eps_grid,
                                     const ChainOptions& opts = {});

// Adaptive Gauss-Kronrod 15(7) on [a,b]; throws QuadratureError when the
// requested tolerance cannot be certified.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol);

}  // namespace rwi::cont
