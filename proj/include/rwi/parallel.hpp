#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rwi::par {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Deterministic blocked reduction. The block layout depends only on n and
// nblocks; each block is accumulated serially and blocks are merged in index
// order, so results are bit-identical for any thread count and identical to
// the serial reference path (parallel = false).
template <class State, class PerItem, class Merge>
State blocked_reduce(std::size_t n, std::size_t nblocks, const State& init,
                     PerItem per_item, Merge merge, bool parallel) {
  if (n == 0) return init;
  nblocks = std::clamp<std::size_t>(nblocks, 1, n);
  const std::size_t bsz = (n + nblocks - 1) / nblocks;
  std::vector<State> partial(nblocks, init);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
#endif
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * bsz;
    const std::size_t hi = std::min(n, lo + bsz);
    for (std::size_t i = lo; i < hi; ++i) per_item(partial[b], i);
  }
  State out = init;
  for (const auto& p : partial) merge(out, p);
  return out;
}

inline constexpr std::size_t kDefaultBlocks = 512;

// Running sum / sum of squares for mean and standard-error estimates.
struct MeanAcc {
  double sum = 0.0;
  double sumsq = 0.0;
  std::size_t n = 0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  void merge(const MeanAcc& o) {
    sum += o.sum;
    sumsq += o.sumsq;
    n += o.n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double v = (sumsq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return v > 0.0 ? v : 0.0;
  }
  double se() const { return n ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
  double z(double target) const {
    const double s = se();
    const double d = mean() - target;
    if (s == 0.0) return d == 0.0 ? 0.0 : std::copysign(1e9, d);
    return d / s;
  }
};

// Fixed-width vector of MeanAcc, for estimating several observables per pass.
struct VecMeanAcc {
  std::vector<MeanAcc> acc;

  explicit VecMeanAcc(std::size_t k = 0) : acc(k) {}
  void merge(const VecMeanAcc& o) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i].merge(o.acc[i]);
  }
};

template <class PerItem>
MeanAcc mc_mean(std::size_t n, PerItem value_of, bool parallel,
                std::size_t nblocks = kDefaultBlocks) {
  return blocked_reduce(
      n, nblocks, MeanAcc{},
      [&](MeanAcc& a, std::size_t i) { a.add(value_of(i)); },
      [](MeanAcc& a, const MeanAcc& b) { a.merge(b); }, parallel);
}

template <class PerItem>
VecMeanAcc mc_mean_vec(std::size_t n, std::size_t k, PerItem fill_values, bool parallel,
                       std::size_t nblocks = kDefaultBlocks) {
  return blocked_reduce(
      n, nblocks, VecMeanAcc{k},
      [&](VecMeanAcc& a, std::size_t i) {
        thread_local std::vector<double> vals;
        vals.assign(k, 0.0);
        fill_values(i, vals);
        for (std::size_t j = 0; j < k; ++j) a.acc[j].add(vals[j]);
      },
      [](VecMeanAcc& a, const VecMeanAcc& b) { a.merge(b); }, parallel);
}

}  // namespace rwi::par
