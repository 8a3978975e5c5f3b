#include "rwi/gaussian.hpp"

#include <cmath>
#include <sstream>

#include "rwi/errors.hpp"
#include "rwi/rational.hpp"

namespace rwi {

double CovarianceFactor::reconstruction_residual(const GreenTable& table) const {
  const int m = static_cast<int>(window.size());
  Eigen::MatrixXd cov(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) cov(i, j) = table.u(window[i] - window[j]);
  cov.diagonal().array() += jitter;
  return (lower * lower.transpose() - cov).cwiseAbs().maxCoeff();
}

CovarianceFactor covariance_factor(const GreenTable& table, const std::vector<Site>& window) {
  if (window.empty()) throw std::invalid_argument("covariance_factor: empty window");
  const int m = static_cast<int>(window.size());
  Eigen::MatrixXd cov(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) cov(i, j) = table.u(window[i] - window[j]);

  const double u0 = table.u0();
  std::vector<double> jitters{0.0};
  for (double j = 1e-12; j <= 1.0001e-8; j *= 10.0) jitters.push_back(j * u0);

  for (double jitter : jitters) {
    Eigen::MatrixXd jittered = cov;
    jittered.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(jittered);
    if (llt.info() == Eigen::Success) {
      CovarianceFactor out;
      out.window = window;
      out.lower = llt.matrixL();
      out.jitter = jitter;
      return out;
    }
  }
  throw NotPositiveDefiniteError(
      "covariance_factor: matrix not positive definite within jitter cap");
}

void sample_field_values(const CovarianceFactor& factor, Rng& rng, std::vector<double>& out) {
  const int m = static_cast<int>(factor.window.size());
  out.assign(m, 0.0);
  // g = L z, accumulated column-by-column so only one pass over z is needed.
  for (int j = 0; j < m; ++j) {
    const double z = rng.normal();
    for (int i = j; i < m; ++i) out[i] += factor.lower(i, j) * z;
  }
}

FieldSample sample_field(const CovarianceFactor& factor, Rng& rng) {
  std::vector<double> vals;
  sample_field_values(factor, rng, vals);
  FieldSample out;
  for (std::size_t i = 0; i < factor.window.size(); ++i) out[factor.window[i]] = vals[i];
  return out;
}

std::string field_csv(const std::vector<FieldSample>& samples, int dim) {
  std::ostringstream os;
  os.precision(17);
  os << "sample,";
  for (int i = 0; i < dim; ++i) os << "x" << i + 1 << ",";
  os << "g\n";
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (const auto& [site, g] : samples[s]) {
      os << s << ",";
      for (int i = 0; i < dim; ++i) os << site.c[i] << ",";
      os << g << "\n";
    }
  }
  return os.str();
}

std::vector<double> wick_coeffs(int n, double u0) {
  if (n < 0) throw std::invalid_argument("wick_coeffs: negative order");
  std::vector<double> coeffs(n / 2 + 1);
  for (int j = 0; j <= n / 2; ++j) {
    const BigInt num = binomial(n, 2 * j) * factorial(2 * j);
    const BigInt den = factorial(j) * (BigInt(1) << j);
    const Rat c = Rat(num) / Rat(den);
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    coeffs[j] = sign * rat_to_double(c) * std::pow(u0, j);
  }
  return coeffs;
}

double wick_power(double g, int n, double u0) {
  const std::vector<double> coeffs = wick_coeffs(n, u0);
  double acc = 0.0;
  for (int j = 0; j <= n / 2; ++j) acc += coeffs[j] * std::pow(g, n - 2 * j);
  return acc;
}

double hermite_poly(int n, double x) {
  if (n == 0) return 1.0;
  double hm = 1.0, h = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * h - 2.0 * k * hm;
    hm = h;
    h = next;
  }
  return h;
}

double laguerre_half(int n, double x) {
  const double a = -0.5;
  if (n == 0) return 1.0;
  double lm = 1.0, l = 1.0 + a - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + a - x) * l - (k + a) * lm) / (k + 1.0);
    lm = l;
    l = next;
  }
  return l;
}

double wick_via_hermite(double g, int n, double u0) {
  return std::pow(u0 / 2.0, n / 2.0) * hermite_poly(n, g / std::sqrt(2.0 * u0));
}

double wick_via_laguerre(double g, int n, double u0) {
  if (n % 2 != 0) throw std::invalid_argument("wick_via_laguerre: odd order");
  const int half = n / 2;
  const double fac = rat_to_double(Rat(factorial(half)));
  const double sign = (half % 2 == 0) ? 1.0 : -1.0;
  // :G^{2m}: / 2^m = (-u0)^m m! L_m^{-1/2}(g^2 / 2u0)
  return std::pow(2.0, half) * sign * std::pow(u0, half) * fac *
         laguerre_half(half, g * g / (2.0 * u0));
}

WickCheckReport hermite_check(int n_max, double u0, const std::vector<double>& g_grid,
                              double tol) {
  if (n_max > 12) throw std::invalid_argument("hermite_check: n_max <= 12");
  WickCheckReport rep;
  rep.n_max = n_max;
  for (int n = 0; n <= n_max; ++n) {
    double scale = 0.0, worst_h = 0.0, worst_l = 0.0;
    std::vector<double> direct(g_grid.size());
    for (std::size_t i = 0; i < g_grid.size(); ++i) {
      direct[i] = wick_power(g_grid[i], n, u0);
      scale = std::max(scale, std::abs(direct[i]));
    }
    for (std::size_t i = 0; i < g_grid.size(); ++i) {
      worst_h = std::max(worst_h, std::abs(direct[i] - wick_via_hermite(g_grid[i], n, u0)));
      if (n % 2 == 0)
        worst_l = std::max(worst_l, std::abs(direct[i] - wick_via_laguerre(g_grid[i], n, u0)));
    }
    if (scale > 0.0) {
      rep.max_rel_err_hermite = std::max(rep.max_rel_err_hermite, worst_h / scale);
      rep.max_rel_err_laguerre = std::max(rep.max_rel_err_laguerre, worst_l / scale);
    }
  }
  rep.pass = rep.max_rel_err_hermite < tol && rep.max_rel_err_laguerre < tol;
  return rep;
}

ShiftedWickReport shifted_wick_check(int n_max, double u0, double c,
                                     const std::vector<double>& g_grid, double tol) {
  if (n_max > 8) throw std::invalid_argument("shifted_wick_check: n_max <= 8");
  ShiftedWickReport rep;
  rep.n_max = n_max;
  rep.c = c;
  for (int n = 1; n <= n_max; ++n) {
    // P_n(y): :G^{2n}: has only even powers of g, so it is a polynomial in g^2.
    const std::vector<double> pc = wick_coeffs(2 * n, u0);  // pc[j] multiplies y^{n-j}
    double scale = 0.0, worst = 0.0;
    for (double g : g_grid) {
      const double y = (g + c) * (g + c);
      double rhs = 0.0;
      for (int j = 0; j <= n; ++j) rhs += pc[j] * std::pow(y, n - j);
      // :(G+c)^{2n}: via the binomial shift of Wick powers.
      double lhs = 0.0;
      for (int k = 0; k <= 2 * n; ++k)
        lhs += rat_to_double(Rat(binomial(2 * n, k))) * std::pow(c, 2 * n - k) *
               wick_power(g, k, u0);
      scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    if (scale > 0.0) rep.max_rel_err = std::max(rep.max_rel_err, worst / scale);
  }
  rep.pass = rep.max_rel_err < tol;
  return rep;
}

GenFnReport truncated_genfn_check(int order, double u0, double s,
                                  const std::vector<double>& g_grid, double tol) {
  GenFnReport rep;
  rep.s = s;
  rep.order = order;
  for (double g : g_grid) {
    double acc = 0.0;
    double sn_over_fact = 1.0;
    for (int n = 0; n <= order; ++n) {
      acc += sn_over_fact * wick_power(g, n, u0);
      sn_over_fact *= s / (n + 1.0);
    }
    const double target = std::exp(s * g - s * s * u0 / 2.0);
    rep.max_abs_err = std::max(rep.max_abs_err, std::abs(acc - target));
  }
  rep.pass = rep.max_abs_err < tol;
  return rep;
}

}  // namespace rwi
