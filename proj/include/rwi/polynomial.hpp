#pragma once

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rwi/rational.hpp"

namespace rwi {

// Sparse multivariate polynomial with a fixed variable count. The meaning of
// each variable index is the caller's contract; widths must match in mixed
// arithmetic. Coefficients are exact rationals in the symbolic layer and
// doubles in the moment engine.
template <class C>
class Polynomial {
 public:
  using Monomial = std::vector<int>;
  using TermMap = std::map<Monomial, C>;

  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const C& c) {
    Polynomial p(nvars);
    if (!(c == C(0))) p.terms_.emplace(Monomial(nvars, 0), c);
    return p;
  }
  static Polynomial one(int nvars) { return constant(nvars, C(1)); }
  static Polynomial var(int nvars, int index, int power = 1) {
    if (index < 0 || index >= nvars) throw std::out_of_range("Polynomial::var index");
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m[index] = power;
    p.terms_.emplace(std::move(m), C(1));
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  C coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? C(0) : it->second;
  }

  void add_term(const Monomial& m, const C& c) {
    if (static_cast<int>(m.size()) != nvars_) throw std::invalid_argument("monomial width");
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) it->second += c;
    if (it->second == C(0)) terms_.erase(it);
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_width(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_width(o);
    for (const auto& [m, c] : o.terms_) add_term(m, C(0) - c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_width(b);
    Polynomial out(a.nvars_);
    Monomial m(a.nvars_, 0);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        for (int i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
        out.add_term(m, ca * cb);
      }
    }
    return out;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial& scale(const C& c) {
    if (c == C(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
  }
  friend Polynomial operator*(const C& c, Polynomial p) { return p.scale(c); }

  Polynomial pow(int e) const {
    if (e < 0) throw std::invalid_argument("Polynomial::pow negative");
    Polynomial out = one(nvars_);
    Polynomial base = *this;
    while (e > 0) {
      if (e & 1) out *= base;
      base = (e >>= 1) ? base * base : base;
    }
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
      int t = 0;
      for (int e : m) t += e;
      d = std::max(d, t);
    }
    return d;
  }

  int degree_in(int index) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[index]);
    return d;
  }

  // Total degree counting only the variables selected by `mask`.
  int masked_degree(const std::vector<bool>& mask) const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
      int t = 0;
      for (int i = 0; i < nvars_; ++i)
        if (mask[i]) t += m[i];
      d = std::max(d, t);
    }
    return d;
  }

  // Substitutes every variable via `image` into a polynomial over a new
  // variable set of width `new_nvars`.
  Polynomial map_vars(int new_nvars,
                      const std::function<Polynomial(int)>& image) const {
    std::vector<std::optional<Polynomial>> cache(nvars_);
    Polynomial out(new_nvars);
    for (const auto& [m, c] : terms_) {
      Polynomial term = constant(new_nvars, c);
      for (int i = 0; i < nvars_; ++i) {
        if (m[i] == 0) continue;
        if (!cache[i]) cache[i] = image(i);
        term *= cache[i]->pow(m[i]);
      }
      out += term;
    }
    return out;
  }

  template <class V>
  V eval(const std::vector<V>& values) const {
    if (static_cast<int>(values.size()) != nvars_) throw std::invalid_argument("eval width");
    V acc = V(0);
    for (const auto& [m, c] : terms_) {
      V t = coeff_as<V>(c);
      for (int i = 0; i < nvars_; ++i)
        for (int e = 0; e < m[i]; ++e) t *= values[i];
      acc += t;
    }
    return acc;
  }

  nlohmann::json to_json(const std::vector<std::string>& names) const {
    if (static_cast<int>(names.size()) != nvars_) throw std::invalid_argument("names width");
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : terms_) {
      nlohmann::json t;
      t["e"] = m;
      t["c"] = coeff_string(c);
      terms.push_back(std::move(t));
    }
    return nlohmann::json{{"vars", names}, {"terms", std::move(terms)}};
  }

  std::string str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << coeff_string(c) << ")";
      for (int i = 0; i < nvars_; ++i) {
        if (m[i] == 0) continue;
        os << "*" << names[i];
        if (m[i] > 1) os << "^" << m[i];
      }
    }
    return os.str();
  }

  // First differing (monomial, lhs, rhs) between two polynomials, if any.
  static std::optional<std::string> first_difference(
      const Polynomial& a, const Polynomial& b,
      const std::vector<std::string>& names) {
    Polynomial d = a - b;
    if (d.terms_.empty()) return std::nullopt;
    const auto& [m, c] = *d.terms_.begin();
    std::ostringstream os;
    os << "monomial ";
    for (int i = 0; i < d.nvars_; ++i)
      if (m[i]) os << names[i] << "^" << m[i] << " ";
    os << ": lhs-rhs = " << coeff_string(c);
    return os.str();
  }

 private:
  void check_width(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("polynomial width mismatch");
  }

  template <class V>
  static V coeff_as(const C& c) {
    if constexpr (std::is_same_v<C, Rat>) {
      return static_cast<V>(rat_to_double(c));
    } else {
      return static_cast<V>(c);
    }
  }

  static std::string coeff_string(const C& c) {
    if constexpr (std::is_same_v<C, Rat>) {
      return rat_to_string(c);
    } else {
      std::ostringstream os;
      os.precision(17);
      os << c;
      return os.str();
    }
  }

  int nvars_;
  TermMap terms_;
};

using PolyQ = Polynomial<Rat>;
using PolyD = Polynomial<double>;

}  // namespace rwi
