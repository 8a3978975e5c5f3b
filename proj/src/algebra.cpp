#include "rwi/algebra.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "rwi/errors.hpp"

namespace rwi::alg {

int Vars::ch(int i) {
  if (i < 1 || i > max_chain) throw std::out_of_range("Vars::ch index");
  return i;
}

int Vars::cy(int j) {
  if (j < 2 || j > max_cycle) throw std::out_of_range("Vars::cy index");
  return max_chain + (j - 1);
}

std::vector<std::string> Vars::names(const std::string& base_name) {
  std::vector<std::string> out;
  out.push_back(base_name);
  for (int i = 1; i <= max_chain; ++i) out.push_back("ch" + std::to_string(i));
  for (int j = 2; j <= max_cycle; ++j) out.push_back("cy" + std::to_string(j));
  return out;
}

int Signature::order() const {
  int s = 0;
  for (std::size_t i = 0; i < chains.size(); ++i) s += static_cast<int>(i + 1) * chains[i];
  for (std::size_t j = 0; j < cycles.size(); ++j) s += static_cast<int>(j + 2) * cycles[j];
  return s;
}

int Signature::order_plus() const {
  int s = 0;
  for (std::size_t i = 0; i < chains.size(); ++i) s += static_cast<int>(i + 2) * chains[i];
  for (std::size_t j = 0; j < cycles.size(); ++j) s += static_cast<int>(j + 2) * cycles[j];
  return s;
}

int Signature::chain_count() const {
  return std::accumulate(chains.begin(), chains.end(), 0);
}

bool Signature::empty() const {
  return chain_count() == 0 && std::accumulate(cycles.begin(), cycles.end(), 0) == 0;
}

std::string Signature::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < chains.size(); ++i) {
    if (chains[i]) os << "k" << i + 1 << "=" << chains[i] << " ";
  }
  for (std::size_t j = 0; j < cycles.size(); ++j) {
    if (cycles[j]) os << "m" << j + 2 << "=" << cycles[j] << " ";
  }
  os << ")";
  return os.str();
}

namespace {

void trim(std::vector<int>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

}  // namespace

std::vector<Signature> signatures_up_to(int n, bool cycles_allowed) {
  std::vector<Signature> out;
  std::vector<int> chains, cycles;

  std::function<void(int, int)> rec_cycles = [&](int budget, int min_order) {
    {
      Signature s{chains, cycles};
      trim(s.chains);
      trim(s.cycles);
      if (!s.empty()) out.push_back(std::move(s));
    }
    for (int j = std::max(2, min_order); j <= budget; ++j) {
      if (static_cast<int>(cycles.size()) < j - 1) cycles.resize(j - 1, 0);
      ++cycles[j - 2];
      rec_cycles(budget - j, j);
      --cycles[j - 2];
      trim(cycles);
    }
  };

  std::function<void(int, int)> rec_chains = [&](int budget, int min_order) {
    if (cycles_allowed)
      rec_cycles(budget, 2);
    else {
      Signature s{chains, cycles};
      trim(s.chains);
      if (!s.empty()) out.push_back(std::move(s));
    }
    for (int i = min_order; i + 1 <= budget; ++i) {
      if (static_cast<int>(chains.size()) < i) chains.resize(i, 0);
      ++chains[i - 1];
      rec_chains(budget - (i + 1), i);
      --chains[i - 1];
      trim(chains);
    }
  };

  rec_chains(n, 1);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PolyQ counterterm_weight(int n, const Signature& sigma) {
  const int plus = sigma.order_plus();
  if (plus > n) throw std::invalid_argument("counterterm_weight: |sigma|+ > n");
  Rat coeff = Rat(factorial(n)) / Rat(factorial(n - plus));
  PolyQ mono = PolyQ::one(Vars::count);
  for (std::size_t i = 0; i < sigma.chains.size(); ++i) {
    const int k = sigma.chains[i];
    if (!k) continue;
    coeff /= Rat(factorial(k));
    mono *= PolyQ::var(Vars::count, Vars::ch(static_cast<int>(i + 1)), k);
  }
  for (std::size_t j = 0; j < sigma.cycles.size(); ++j) {
    const int m = sigma.cycles[j];
    if (!m) continue;
    const int order = static_cast<int>(j + 2);
    coeff /= Rat(factorial(m));
    for (int t = 0; t < m; ++t) coeff /= Rat(2 * order);  // each cycle carries 1/(2j)
    mono *= PolyQ::var(Vars::count, Vars::cy(order), m);
  }
  return coeff * mono;
}

namespace {

std::vector<PolyQ> recursion_family(int n_max, bool cycles_allowed) {
  std::vector<PolyQ> fam;
  fam.push_back(PolyQ::one(Vars::count));
  const PolyQ x = PolyQ::var(Vars::count, Vars::base());
  for (int n = 1; n <= n_max; ++n) {
    PolyQ p = x.pow(n);
    for (const auto& sigma : signatures_up_to(n, cycles_allowed))
      p -= counterterm_weight(n, sigma) * fam[n - sigma.order()];
    fam.push_back(std::move(p));
  }
  return fam;
}

void require_equal(const PolyQ& a, const PolyQ& b, const std::vector<std::string>& names,
                   const std::string& what) {
  if (auto diff = PolyQ::first_difference(a, b, names))
    throw MismatchError(what + ": " + *diff);
}

}  // namespace

std::vector<PolyQ> renorm_polys_recursive(int n_max) {
  if (n_max > Vars::max_chain) throw TruncationOrderError("renorm_polys: n_max too large");
  return recursion_family(n_max, false);
}

std::vector<PolyQ> renorm_polys(int n_max) {
  auto rec = renorm_polys_recursive(n_max);
  auto coeffs = expansion_coeffs_from(rec, n_max);
  // Re-derive the family from the coefficient formula by triangular inversion
  // and demand exact agreement.
  std::vector<PolyQ> from_formula;
  from_formula.push_back(PolyQ::one(Vars::count));
  const PolyQ x = PolyQ::var(Vars::count, Vars::base());
  const auto names = Vars::names("L1");
  for (int n = 1; n <= n_max; ++n) {
    PolyQ p = x.pow(n);
    for (int k = 0; k < n; ++k) p -= coeff_chain(n, k) * from_formula[k];
    require_equal(coeff_chain(n, n), PolyQ::one(Vars::count), names,
                  "renorm_polys: B_{n,n} != 1 at n=" + std::to_string(n));
    from_formula.push_back(std::move(p));
    require_equal(rec[n], from_formula[n], names,
                  "renorm_polys: recursion vs generating-function route at n=" +
                      std::to_string(n));
    // and the formula coefficients must match the elimination ground truth
    for (int k = 0; k <= n; ++k)
      require_equal(coeff_chain(n, k), coeffs[n][k], names,
                    "renorm_polys: B coefficient mismatch at (n,k)=(" +
                        std::to_string(n) + "," + std::to_string(k) + ")");
  }
  return rec;
}

std::vector<PolyQ> self_renorm_polys(int n_max) {
  auto per_path = recursion_family(n_max, false);
  auto soup_level = renorm_polys_recursive(n_max);
  const auto names = Vars::names("cL1");
  for (int n = 0; n <= n_max; ++n)
    require_equal(per_path[n], soup_level[n], names,
                  "self_renorm_polys: family differs at n=" + std::to_string(n));
  return per_path;
}

std::vector<std::string> toy_names() { return {"L1", "u"}; }

std::vector<PolyQ> renorm_polys_gf_toy(int n_max) {
  if (n_max > 16) throw TruncationOrderError("renorm_polys_gf_toy: n_max too large");
  // t(s) = s/(1+su) = sum_{m>=1} (-u)^{m-1} s^m; family = n! [s^n] exp(t(s) x).
  const int nv = 2;
  const PolyQ x = PolyQ::var(nv, 0);
  const PolyQ u = PolyQ::var(nv, 1);
  std::vector<PolyQ> a(n_max + 1, PolyQ(nv));  // a[m] = coefficient of s^m in t(s)*x
  for (int m = 1; m <= n_max; ++m) {
    PolyQ c = u.pow(m - 1) * x;
    if ((m - 1) % 2 == 1) c.scale(Rat(-1));
    a[m] = std::move(c);
  }
  // exp of a series with zero constant term: E_n = (1/n) sum_m m a_m E_{n-m}.
  std::vector<PolyQ> e(n_max + 1, PolyQ(nv));
  e[0] = PolyQ::one(nv);
  for (int n = 1; n <= n_max; ++n) {
    PolyQ acc(nv);
    for (int m = 1; m <= n; ++m) acc += Rat(m) * (a[m] * e[n - m]);
    acc.scale(Rat(1, n));
    e[n] = std::move(acc);
  }
  std::vector<PolyQ> fam(n_max + 1, PolyQ(nv));
  for (int n = 0; n <= n_max; ++n) fam[n] = Rat(factorial(n)) * e[n];
  return fam;
}

PolyQ to_toy(const PolyQ& p) {
  const int nv = 2;
  return p.map_vars(nv, [&](int idx) -> PolyQ {
    if (idx == Vars::base()) return PolyQ::var(nv, 0);
    for (int i = 1; i <= Vars::max_chain; ++i)
      if (idx == Vars::ch(i)) return PolyQ::var(nv, 1, i);
    throw std::invalid_argument("to_toy: cycle variable present");
  });
}

std::vector<PolyQ> shifted_square_polys(int n_max) {
  if (n_max > Vars::max_cycle) throw TruncationOrderError("shifted_square_polys: n_max too large");
  return recursion_family(n_max, true);
}

namespace {

// Ordered chain-order sequences (j_1..j_k), j >= 0, summing to `total`.
void for_each_composition(int total, int parts, std::vector<int>& buf,
                          const std::function<void(const std::vector<int>&)>& fn) {
  if (parts == 0) {
    if (total == 0) fn(buf);
    return;
  }
  for (int j = 0; j <= total; ++j) {
    buf.push_back(j);
    for_each_composition(total - j, parts - 1, buf, fn);
    buf.pop_back();
  }
}

// Ordered cycle-order sequences with entries >= 2 summing to `total`.
void for_each_cycle_seq(int total, std::vector<int>& buf,
                        const std::function<void(const std::vector<int>&)>& fn) {
  fn(buf);
  for (int i = 2; i <= total; ++i) {
    buf.push_back(i);
    for_each_cycle_seq(total - i, buf, fn);
    buf.pop_back();
  }
}

}  // namespace

PolyQ coeff_chain(int n, int k) {
  PolyQ out(Vars::count);
  if (k < 0 || k > n) return out;
  if (n - k > Vars::max_chain) throw TruncationOrderError("coeff_chain: order too large");
  const Rat pref = Rat(factorial(n)) / Rat(factorial(k));
  std::vector<int> buf;
  for_each_composition(n - k, k, buf, [&](const std::vector<int>& js) {
    PolyQ mono = PolyQ::one(Vars::count);
    for (int j : js)
      if (j > 0) mono *= PolyQ::var(Vars::count, Vars::ch(j));
    out += pref * mono;
  });
  return out;
}

PolyQ coeff_chain_cycle(int n, int k) {
  PolyQ out(Vars::count);
  if (k < 0 || k > n) return out;
  const Rat pref = Rat(factorial(n)) / Rat(factorial(k));
  std::vector<int> cyc;
  for_each_cycle_seq(n - k, cyc, [&](const std::vector<int>& is) {
    int cycle_mass = 0;
    for (int i : is) cycle_mass += i;
    const int chain_mass = n - k - cycle_mass;
    if (chain_mass < 0) return;
    Rat cyc_coeff = Rat(1) / Rat(factorial(static_cast<int>(is.size())));
    PolyQ cyc_mono = PolyQ::one(Vars::count);
    for (int i : is) {
      cyc_coeff /= Rat(2 * i);
      cyc_mono *= PolyQ::var(Vars::count, Vars::cy(i));
    }
    std::vector<int> buf;
    for_each_composition(chain_mass, k, buf, [&](const std::vector<int>& js) {
      PolyQ mono = cyc_mono;
      for (int j : js)
        if (j > 0) mono *= PolyQ::var(Vars::count, Vars::ch(j));
      out += (pref * cyc_coeff) * mono;
    });
  });
  return out;
}

namespace {

// Slice of p at base-variable exponent k, with that exponent removed.
PolyQ base_slice(const PolyQ& p, int k) {
  PolyQ out(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    if (m[Vars::base()] != k) continue;
    auto reduced = m;
    reduced[Vars::base()] = 0;
    out.add_term(reduced, c);
  }
  return out;
}

}  // namespace

std::vector<std::vector<PolyQ>> expansion_coeffs_from(const std::vector<PolyQ>& basis,
                                                      int n_max) {
  const PolyQ x = PolyQ::var(Vars::count, Vars::base());
  std::vector<std::vector<PolyQ>> coeffs(n_max + 1);
  const auto names = Vars::names("x");
  for (int n = 0; n <= n_max; ++n) {
    PolyQ rem = x.pow(n);
    coeffs[n].assign(n + 1, PolyQ(Vars::count));
    for (int k = n; k >= 0; --k) {
      PolyQ c = base_slice(rem, k);
      if (!c.is_zero()) rem -= c * basis[k];
      coeffs[n][k] = std::move(c);
    }
    if (!rem.is_zero())
      throw MismatchError("expansion_coeffs_from: nonzero remainder at n=" +
                          std::to_string(n) + ": " + rem.str(names));
  }
  return coeffs;
}

void check_chain_expansion(int n_max) {
  auto fam = renorm_polys_recursive(n_max);
  const auto names = Vars::names("L1");
  const PolyQ x = PolyQ::var(Vars::count, Vars::base());
  for (int n = 0; n <= n_max; ++n) {
    PolyQ rhs(Vars::count);
    for (int k = 0; k <= n; ++k) rhs += coeff_chain(n, k) * fam[k];
    require_equal(x.pow(n), rhs, names,
                  "check_chain_expansion: L1^n != sum B_{n,k} L_k at n=" + std::to_string(n));
  }
}

void check_chain_cycle_expansion(int n_max) {
  auto fam = shifted_square_polys(n_max);
  const auto names = Vars::names("H1");
  const PolyQ x = PolyQ::var(Vars::count, Vars::base());
  auto ground_truth = expansion_coeffs_from(fam, n_max);
  for (int n = 0; n <= n_max; ++n) {
    PolyQ rhs(Vars::count);
    for (int k = 0; k <= n; ++k) {
      require_equal(coeff_chain_cycle(n, k), ground_truth[n][k], names,
                    "check_chain_cycle_expansion: A coefficient mismatch at (n,k)=(" +
                        std::to_string(n) + "," + std::to_string(k) + ")");
      rhs += coeff_chain_cycle(n, k) * fam[k];
    }
    require_equal(x.pow(n), rhs, names,
                  "check_chain_cycle_expansion: H1^n != sum A_{n,k} Ht_k at n=" +
                      std::to_string(n));
  }
}

void check_gf_vs_recursion(int n_max) {
  auto rec = renorm_polys_recursive(n_max);
  auto gf = renorm_polys_gf_toy(n_max);
  const auto names = toy_names();
  for (int n = 0; n <= n_max; ++n)
    require_equal(to_toy(rec[n]), gf[n], names,
                  "check_gf_vs_recursion: mismatch at n=" + std::to_string(n));
}

Rat rho_sum(int n, const Signature& sigma, int k) {
  const int plus = sigma.order_plus();
  if (sigma.order() < 0 || plus > n) throw std::invalid_argument("rho_sum: |sigma|+ > n");
  const int p = sigma.chain_count();
  const int m = n - plus;
  Rat acc = 0;
  for (int s = 0; s <= 2 * p; ++s) {
    const BigInt cs = binomial(2 * p, s);
    if (cs == 0) continue;
    for (int v = 0; v <= k - s; ++v) {
      if ((k - s - v) % 2 != 0) continue;
      const int t = (k - s - v) / 2;
      const int rest = m - t - v;
      if (t < 0 || rest < 0) continue;
      const BigInt mult = multinomial(m, {t, v, rest});
      if (mult == 0) continue;
      acc += Rat(cs * mult * (BigInt(1) << v));
    }
  }
  return acc;
}

Rat rho_closed(int n, const Signature& sigma, int k) {
  return Rat(binomial(2 * (n - sigma.order()), k));
}

BigInt multinomial_identity_lhs(int k, int m, int p) {
  BigInt acc = 0;
  for (int s = 0; s <= 2 * p; ++s) {
    const BigInt cs = binomial(2 * p, s);
    if (cs == 0) continue;
    for (int v = 0; v <= k - s; ++v) {
      if ((k - s - v) % 2 != 0) continue;
      const int t = (k - s - v) / 2;
      const int rest = m - t - v;
      if (t < 0 || rest < 0) continue;
      acc += cs * multinomial(m, {t, v, rest}) * (BigInt(1) << v);
    }
  }
  return acc;
}

BigInt multinomial_identity_rhs(int k, int m, int p) {
  return binomial(2 * m + 2 * p, k);
}

namespace {

// Pairing decomposition over elements 0..2R-1 (copies of R nodes) and
// 2R..2R+SU-1 (endpoint nodes).
struct PairingWalker {
  int n_r, n_su;
  std::vector<int> partner;

  explicit PairingWalker(int r, int su) : n_r(r), n_su(su), partner(2 * r + su, -1) {}

  int elements() const { return 2 * n_r + n_su; }
  bool is_endpoint(int e) const { return e >= 2 * n_r; }
  int node_of(int e) const { return is_endpoint(e) ? n_r + (e - 2 * n_r) : e / 2; }
  int twin(int e) const { return e ^ 1; }  // valid for R copies only

  Signature decompose() const {
    std::vector<int> chains, cycles;
    std::vector<char> seen(n_r + n_su, 0);
    // chains start at endpoint nodes
    for (int e = 2 * n_r; e < elements(); ++e) {
      const int node = node_of(e);
      if (seen[node]) continue;
      seen[node] = 1;
      int edges = 0;
      int slot = e;
      for (;;) {
        const int q = partner[slot];
        ++edges;
        if (is_endpoint(q)) {
          seen[node_of(q)] = 1;
          break;
        }
        seen[node_of(q)] = 1;
        slot = twin(q);
      }
      if (static_cast<int>(chains.size()) < edges) chains.resize(edges, 0);
      ++chains[edges - 1];
    }
    // remaining R nodes form cycles
    for (int r = 0; r < n_r; ++r) {
      if (seen[r]) continue;
      int edges = 0;
      int slot = 2 * r;
      for (;;) {
        seen[node_of(slot)] = 1;
        const int q = partner[slot];
        ++edges;
        if (node_of(q) == r) break;
        slot = twin(q);
      }
      if (static_cast<int>(cycles.size()) < edges - 1) cycles.resize(edges - 1, 0);
      ++cycles[edges - 2];
    }
    Signature s{std::move(chains), std::move(cycles)};
    trim(s.chains);
    trim(s.cycles);
    return s;
  }
};

void for_each_pairing(PairingWalker& w, const std::function<void(const PairingWalker&)>& fn) {
  int first = -1;
  for (int e = 0; e < w.elements(); ++e) {
    if (w.partner[e] < 0) {
      first = e;
      break;
    }
  }
  if (first < 0) {
    fn(w);
    return;
  }
  for (int q = first + 1; q < w.elements(); ++q) {
    if (w.partner[q] >= 0) continue;
    if (!w.is_endpoint(first) && !w.is_endpoint(q) && w.node_of(first) == w.node_of(q))
      continue;  // no element may pair with its own twin
    w.partner[first] = q;
    w.partner[q] = first;
    for_each_pairing(w, fn);
    w.partner[first] = -1;
    w.partner[q] = -1;
  }
}

}  // namespace

PairingCensus enumerate_pairings(int n_r, int n_s, int n_u) {
  if (n_r < 0 || n_s < 0 || n_u < 0)
    throw std::invalid_argument("enumerate_pairings: negative size");
  if ((n_s + n_u) % 2 != 0)
    throw std::invalid_argument("enumerate_pairings: |S|+|U| must be even");
  if (2 * n_r + n_s + n_u > 18)
    throw std::invalid_argument("enumerate_pairings: set too large to enumerate");
  PairingCensus census;
  PairingWalker w(n_r, n_s + n_u);
  for_each_pairing(w, [&](const PairingWalker& done) {
    ++census.counts[done.decompose()];
    ++census.total;
  });
  return census;
}

Rat pairing_count(const Signature& sigma, int n_r, int n_su) {
  // Element balance: chains of order l use l-1 R nodes, cycles of order l use l.
  int r_used = 0;
  for (std::size_t i = 0; i < sigma.chains.size(); ++i)
    r_used += static_cast<int>(i) * sigma.chains[i];
  for (std::size_t j = 0; j < sigma.cycles.size(); ++j)
    r_used += static_cast<int>(j + 2) * sigma.cycles[j];
  if (r_used != n_r || 2 * sigma.chain_count() != n_su) return Rat(0);

  Rat count = Rat(factorial(n_r)) * Rat(factorial(n_su)) * Rat(BigInt(1) << n_r);
  for (std::size_t i = 0; i < sigma.chains.size(); ++i) {
    const int k = sigma.chains[i];
    if (!k) continue;
    count /= Rat(factorial(k));
    count /= Rat(BigInt(1) << k);
  }
  for (std::size_t j = 0; j < sigma.cycles.size(); ++j) {
    const int m = sigma.cycles[j];
    if (!m) continue;
    const int order = static_cast<int>(j + 2);
    count /= Rat(factorial(m));
    for (int t = 0; t < m; ++t) count /= Rat(2 * order);
  }
  return count;
}

std::pair<Rat, Rat> pairing_weight_identity(int n_r, int n_su,
                                            const std::vector<Rat>& ch_vals,
                                            const std::vector<Rat>& cy_vals) {
  PairingCensus census = enumerate_pairings(n_r, n_su, 0);
  auto weight = [&](const Signature& s) {
    Rat w = 1;
    for (std::size_t i = 0; i < s.chains.size(); ++i)
      for (int t = 0; t < s.chains[i]; ++t) w *= ch_vals.at(i);
    for (std::size_t j = 0; j < s.cycles.size(); ++j)
      for (int t = 0; t < s.cycles[j]; ++t) w *= cy_vals.at(j);
    return w;
  };

  Rat direct = 0;
  for (const auto& [sig, cnt] : census.counts) direct += Rat(cnt) * weight(sig);
  direct /= Rat(BigInt(1) << n_r);

  // Closed form: sum over signatures of
  // 2^{-p} |R|! (2p)! / (prod m_l! k_l!) prod ch^{k_l} (cy_l / 2l)^{m_l}.
  Rat closed = 0;
  for (const auto& [sig, cnt] : census.counts) {
    Rat term = Rat(factorial(n_r)) * Rat(factorial(n_su));
    const int p = sig.chain_count();
    term /= Rat(BigInt(1) << p);
    for (std::size_t i = 0; i < sig.chains.size(); ++i) {
      const int k = sig.chains[i];
      if (!k) continue;
      term /= Rat(factorial(k));
      for (int t = 0; t < k; ++t) term *= ch_vals.at(i);
    }
    for (std::size_t j = 0; j < sig.cycles.size(); ++j) {
      const int m = sig.cycles[j];
      if (!m) continue;
      const int order = static_cast<int>(j + 2);
      term /= Rat(factorial(m));
      for (int t = 0; t < m; ++t) term *= cy_vals.at(j) / Rat(2 * order);
    }
    closed += term;
  }
  return {direct, closed};
}

}  // namespace rwi::alg
