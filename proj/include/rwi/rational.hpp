#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <initializer_list>
#include <stdexcept>
#include <string>

namespace rwi {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative");
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

// n! / (k1! k2! ...), requiring the parts to sum to n and be nonnegative.
inline BigInt multinomial(int n, std::initializer_list<int> parts) {
  int sum = 0;
  for (int p : parts) {
    if (p < 0) return 0;
    sum += p;
  }
  if (sum != n) return 0;
  BigInt r = factorial(n);
  for (int p : parts) r /= factorial(p);
  return r;
}

inline std::string rat_to_string(const Rat& r) {
  return r.str();
}

inline double rat_to_double(const Rat& r) {
  return r.template convert_to<double>();
}

}  // namespace rwi
