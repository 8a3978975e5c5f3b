#include "rwi/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rwi/parallel.hpp"

namespace rwi::cont {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Gauss-Kronrod 15(7) nodes/weights on [-1,1] (positive half, symmetric).
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult {
  double value;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fk[15];
  for (int i = 0; i < 7; ++i) {
    fk[i] = f(c - h * kKronrodNodes[i]);
    fk[14 - i] = f(c + h * kKronrodNodes[i]);
  }
  fk[7] = f(c);
  double kron = 0.0;
  for (int i = 0; i < 7; ++i) kron += kKronrodWeights[i] * (fk[i] + fk[14 - i]);
  kron += kKronrodWeights[7] * fk[7];
  kron *= h;
  double gauss = kGaussWeights[3] * fk[7];
  for (int i = 0; i < 3; ++i) gauss += kGaussWeights[i] * (fk[2 * i + 1] + fk[13 - 2 * i]);
  gauss *= h;
  return {kron, std::abs(kron - gauss)};
}

double adaptive_rec(const std::function<double(double)>& f, double a, double b, double tol,
                    int depth) {
  GkResult r = gk15(f, a, b);
  if (r.error <= tol || depth >= 48) return r.value;
  const double c = 0.5 * (a + b);
  return adaptive_rec(f, a, c, 0.5 * tol, depth + 1) +
         adaptive_rec(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol) {
  if (a == b) return 0.0;
  GkResult first = gk15(f, a, b);
  double tol = std::max(abs_tol, rel_tol * std::abs(first.value));
  if (tol <= 0.0) tol = abs_tol > 0.0 ? abs_tol : 1e-14;
  double v = adaptive_rec(f, a, b, tol, 0);
  // one refinement pass with the tolerance rescaled to the better estimate
  const double tol2 = std::max(abs_tol, rel_tol * std::abs(v));
  if (tol2 < tol * 0.1) v = adaptive_rec(f, a, b, tol2, 0);
  return v;
}

double ContinuumSpec::psi(double r) const {
  if (kind == Exponent::brownian) return 0.5 * r * r;
  return r * r / std::pow(std::log(std::exp(1.0) + r), log_a);
}

namespace {

double bump_raw(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

double bump_norm() {
  static const double norm = [] {
    const double mass = 2.0 * kPi *
                        adaptive_integrate([](double r) { return bump_raw(r) * r; }, 0.0,
                                           1.0, 1e-14, 1e-16);
    return 1.0 / mass;
  }();
  return norm;
}

}  // namespace

double mollifier(double r) { return bump_norm() * bump_raw(r); }

double mollifier_hat(double rho) {
  // 2 pi int_0^1 J0(rho t) f(t) t dt; the adaptive rule resolves the
  // oscillation by subdivision.
  return 2.0 * kPi *
         adaptive_integrate(
             [rho](double t) { return std::cyl_bessel_j(0.0, rho * t) * mollifier(t) * t; },
             0.0, 1.0, 1e-12, 1e-14);
}

double mollifier_autocorr(double rho) {
  if (rho >= 2.0) return 0.0;
  return adaptive_integrate(
      [rho](double t) {
        const double inner = adaptive_integrate(
            [rho, t](double phi) {
              const double d2 = t * t + rho * rho - 2.0 * t * rho * std::cos(phi);
              return mollifier(std::sqrt(std::max(d2, 0.0)));
            },
            0.0, kPi, 1e-11, 1e-13);
        return 2.0 * inner * mollifier(t) * t;
      },
      0.0, 1.0, 1e-10, 1e-13);
}

namespace {

// Hankel-type inversion for the non-Brownian family: Longman segmentation
// between Bessel zeros plus repeated averaging of the alternating tail.
double hankel_u(const ContinuumSpec& spec, double r) {
  const auto integrand = [&](double s) {
    return std::cyl_bessel_j(0.0, r * s) * s * spec.uhat(s);
  };
  const int segments = 40;
  std::vector<double> partial;
  double acc = 0.0;
  double prev_cut = 0.0;
  for (int k = 1; k <= segments; ++k) {
    const double zero = (k - 0.25) * kPi / r;
    acc += adaptive_integrate(integrand, prev_cut, zero, 1e-11, 1e-15);
    partial.push_back(acc);
    prev_cut = zero;
  }
  // iterated averaging (Euler transform) of the oscillating partial sums
  std::vector<double> row = partial;
  for (int level = 0; level < 12; ++level) {
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
    row.pop_back();
  }
  return row.back() / (2.0 * kPi);
}

}  // namespace

double u_radial(const ContinuumSpec& spec, double r) {
  if (r <= 0.0) throw std::invalid_argument("u_radial: r must be positive");
  if (spec.kind == ContinuumSpec::Exponent::brownian) {
    // uhat = 2/(r^2 + 2 kappa) gives u(r) = K0(sqrt(2 kappa) r)/pi.
    return std::cyl_bessel_k(0.0, std::sqrt(2.0 * spec.kappa) * r) / kPi;
  }
  return hankel_u(spec, r);
}

double h_fn(const ContinuumSpec& spec, double s) {
  if (s < 0.0) throw std::invalid_argument("h_fn: s >= 0");
  if (s == 0.0) return 0.0;
  return 2.0 * kPi *
         adaptive_integrate([&](double r) { return r * spec.uhat(r); }, 0.0, s, 1e-12, 1e-15);
}

double h_brownian_closed(double kappa, double s) {
  return 2.0 * kPi * std::log1p(s * s / (2.0 * kappa));
}

namespace {

struct GaussLegendre {
  std::vector<double> x, w;  // on [0,1]
};

GaussLegendre gauss_legendre_01(int n) {
  GaussLegendre out;
  out.x.resize(n);
  out.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double step = p1 / dp;
      xi -= step;
      if (std::abs(step) < 1e-15) break;
    }
    double p0 = 1.0, p1 = xi;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
    out.x[i] = 0.5 * (1.0 - xi);  // descending cos -> ascending grid
    out.w[i] = 1.0 / ((1.0 - xi * xi) * dp * dp);
  }
  std::reverse(out.x.begin(), out.x.end());
  std::reverse(out.w.begin(), out.w.end());
  return out;
}

}  // namespace

namespace {

// Radial evaluator for u(eps * d), d in (0, 2]: closed form for Brownian,
// tabulated in log coordinates otherwise (u is a + b log x near zero, so
// linear interpolation in log x is accurate).
struct RadialU {
  const ContinuumSpec& spec;
  bool tabulated = false;
  double lo = 0.0, hi = 0.0, step = 0.0;
  std::vector<double> table;

  RadialU(const ContinuumSpec& s, double eps) : spec(s) {
    if (spec.kind == ContinuumSpec::Exponent::brownian) return;
    tabulated = true;
    lo = std::log(eps * 1e-8);
    hi = std::log(eps * 2.5);
    const int n = 2400;
    step = (hi - lo) / (n - 1);
    table.resize(n);
    for (int i = 0; i < n; ++i) table[i] = u_radial(spec, std::exp(lo + i * step));
  }

  double operator()(double x) const {
    if (!tabulated) return u_radial(spec, x);
    const double w = std::log(x);
    if (w <= lo) return table.front();
    if (w >= hi) return table.back();
    const double pos = (w - lo) / step;
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return table[i] * (1.0 - frac) + table[i + 1] * frac;
  }
};

double angular_kernel_u(const RadialU& u, double eps, double r, double t, double tol) {
  const auto dist = [&](double theta) {
    const double d2 = r * r + t * t - 2.0 * r * t * std::cos(theta);
    return std::sqrt(std::max(d2, 0.0));
  };
  const double theta0 = 0.1;
  const double outer = adaptive_integrate(
      [&](double theta) { return u(std::max(eps * dist(theta), 1e-300)); }, theta0, kPi,
      tol, 1e-14);
  const double inner = adaptive_integrate(
      [&](double w) {
        const double theta = std::exp(w);
        return u(std::max(eps * dist(theta), 1e-300)) * theta;
      },
      std::log(theta0) - 34.0, std::log(theta0), tol, 1e-14);
  return 2.0 * (outer + inner);
}

std::vector<double> chain_fn_multi(const ContinuumSpec& spec, int kmax, double eps,
                                   const ChainOptions& opts) {
  if (kmax < 1) throw std::invalid_argument("chain_fn: k >= 1");
  const int n = opts.radial_nodes;
  const GaussLegendre gl = gauss_legendre_01(n);
  const RadialU u(spec, eps);

  std::vector<double> kernel(static_cast<std::size_t>(n) * n, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (opts.parallel)
#endif
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double a = angular_kernel_u(u, eps, gl.x[i], gl.x[j], opts.tol);
      kernel[static_cast<std::size_t>(i) * n + j] = a;
      kernel[static_cast<std::size_t>(j) * n + i] = a;
    }
  }

  std::vector<double> out;
  std::vector<double> phi(n, 1.0), next(n, 0.0);
  for (int step = 1; step <= kmax; ++step) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        acc += kernel[static_cast<std::size_t>(i) * n + j] * mollifier(gl.x[j]) * gl.x[j] *
               gl.w[j] * phi[j];
      next[i] = acc;
    }
    phi.swap(next);
    double value = 0.0;
    for (int i = 0; i < n; ++i) value += mollifier(gl.x[i]) * gl.x[i] * gl.w[i] * phi[i];
    out.push_back(2.0 * kPi * value);
  }
  return out;
}

}  // namespace

double chain_fn(const ContinuumSpec& spec, int k, double eps, const ChainOptions& opts) {
  return chain_fn_multi(spec, k, eps, opts).back();
}

double chain_fn_fourier(const ContinuumSpec& spec, int k, double eps) {
  if (k < 1) throw std::invalid_argument("chain_fn_fourier: k >= 1");
  const double cutoff = 400.0 / eps;
  const auto integrand = [&](double s) {
    const double fh = mollifier_hat(eps * s);
    return std::pow(spec.uhat(s), k) * fh * fh * s;
  };
  // split at 1/eps where the mollifier transform starts to bite
  const double split = std::min(1.0 / eps, cutoff);
  const double part1 = adaptive_integrate(integrand, 0.0, split, 1e-10, 1e-14);
  const double part2 = adaptive_integrate(integrand, split, cutoff, 1e-10, 1e-14);
  return (part1 + part2) / (2.0 * kPi);
}

double chain_fn_realspace_k1(const ContinuumSpec& spec, double eps) {
  return 2.0 * kPi *
         adaptive_integrate(
             [&](double rho) {
               if (rho <= 0.0) return 0.0;
               return u_radial(spec, eps * rho) * mollifier_autocorr(rho) * rho;
             },
             0.0, 2.0, 1e-9, 1e-13);
}

double cycle_fn2(const ContinuumSpec& spec, double eps) {
  return 2.0 * kPi *
         adaptive_integrate(
             [&](double rho) {
               if (rho <= 0.0) return 0.0;
               const double u = u_radial(spec, eps * rho);
               return u * u * mollifier_autocorr(rho) * rho;
             },
             0.0, 2.0, 1e-8, 1e-13);
}

double cycle_fn2_fourier(const ContinuumSpec& spec, double eps) {
  // (uhat * uhat)(mu) as a radial 2-D convolution. For the Brownian exponent
  // uhat(r) = 2/(r^2 + 2 kappa) and the angular integral closes:
  // int dtheta / (A - B cos) = 2 pi / sqrt(A^2 - B^2).
  const bool brownian = spec.kind == ContinuumSpec::Exponent::brownian;
  const auto conv = [&](double mu) {
    if (brownian) {
      const double two_kappa = 2.0 * spec.kappa;
      return adaptive_integrate(
          [&](double s) {
            const double a = s * s + mu * mu + two_kappa;
            const double b = 2.0 * s * mu;
            const double angular = 2.0 * kPi / std::sqrt(a * a - b * b);
            return 2.0 * angular * spec.uhat(s) * s;
          },
          0.0, std::max(4000.0, 4.0 * mu), 1e-9, 1e-13);
    }
    return adaptive_integrate(
        [&](double s) {
          const double inner = adaptive_integrate(
              [&](double theta) {
                const double q2 = s * s + mu * mu - 2.0 * s * mu * std::cos(theta);
                return spec.uhat(std::sqrt(std::max(q2, 0.0)));
              },
              0.0, kPi, 1e-9, 1e-13);
          return 2.0 * inner * spec.uhat(s) * s;
        },
        0.0, std::max(2000.0, 4.0 * mu), 1e-8, 1e-13);
  };
  const double cutoff = 300.0 / eps;
  const auto integrand = [&](double mu) {
    const double fh = mollifier_hat(eps * mu);
    return conv(mu) * fh * fh * mu;
  };
  const double split = std::min(1.0 / eps, cutoff);
  const double part1 = adaptive_integrate(integrand, 0.0, split, 1e-9, 1e-13);
  const double part2 = adaptive_integrate(integrand, split, cutoff, 1e-9, 1e-13);
  return (part1 + part2) / std::pow(2.0 * kPi, 3);
}

double AsymptoticsReport::ratio_spread(int k) const {
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double ratio = ch[k - 1][i] / std::pow(h[i], k);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return hi / lo;
}

double AsymptoticsReport::cycle_ratio_spread() const {
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double ratio = cy2[i] / (h[i] * h[i]);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return hi / lo;
}

std::string AsymptoticsReport::to_csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "eps,h";
  for (int k = 1; k <= kmax; ++k) os << ",ch" << k;
  os << ",cy2";
  for (int k = 1; k <= kmax; ++k) os << ",ch" << k << "_over_h" << k;
  os << ",cy2_over_h2\n";
  for (std::size_t i = 0; i < eps.size(); ++i) {
    os << eps[i] << "," << h[i];
    for (int k = 1; k <= kmax; ++k) os << "," << ch[k - 1][i];
    os << "," << cy2[i];
    for (int k = 1; k <= kmax; ++k) os << "," << ch[k - 1][i] / std::pow(h[i], k);
    os << "," << cy2[i] / (h[i] * h[i]) << "\n";
  }
  return os.str();
}

AsymptoticsReport asymptotics_report(const ContinuumSpec& spec, int kmax,
                                     const std::vector<double>& eps_grid,
                                     const ChainOptions& opts) {
  AsymptoticsReport rep;
  rep.eps = eps_grid;
  rep.kmax = kmax;
  rep.ch.assign(kmax, std::vector<double>(eps_grid.size(), 0.0));
  rep.cy2.assign(eps_grid.size(), 0.0);
  rep.h.assign(eps_grid.size(), 0.0);
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    const double eps = eps_grid[i];
    rep.h[i] = h_fn(spec, 1.0 / eps);
    const std::vector<double> chains = chain_fn_multi(spec, kmax, eps, opts);
    for (int k = 1; k <= kmax; ++k) rep.ch[k - 1][i] = chains[k - 1];
    rep.cy2[i] = cycle_fn2(spec, eps);
    if (!(rep.h[i] > 0.0) || !(rep.cy2[i] > 0.0))
      throw QuadratureError("asymptotics_report: nonpositive value");
    for (int k = 1; k <= kmax; ++k)
      if (!(rep.ch[k - 1][i] > 0.0))
        throw QuadratureError("asymptotics_report: nonpositive chain value");
  }
  return rep;
}

}  // namespace rwi::cont
