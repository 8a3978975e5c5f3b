#pragma once

#include <map>
#include <string>
#include <vector>

#include "rwi/polynomial.hpp"
#include "rwi/rational.hpp"

namespace rwi::alg {

// Variable layout shared by the counterterm polynomial families:
//   index 0             base variable (L1 or H1),
//   index 1..max_chain  chain weights ch1..ch8,
//   index 9..15         cycle weights cy2..cy8.
// cy1 does not exist in this layout: cycles of order one are banned at the
// type level.
struct Vars {
  static constexpr int max_chain = 8;
  static constexpr int max_cycle = 8;
  static constexpr int count = 1 + max_chain + (max_cycle - 1);

  static constexpr int base() { return 0; }
  static int ch(int i);
  static int cy(int j);
  static std::vector<std::string> names(const std::string& base_name);
};

// Multiplicity vector sigma: chains[i-1] = k_i (order-i chains, i >= 1) and
// cycles[j-2] = m_j (order-j cycles, j >= 2).
struct Signature {
  std::vector<int> chains;
  std::vector<int> cycles;

  int order() const;       // |sigma|
  int order_plus() const;  // |sigma|+
  int chain_count() const;
  bool empty() const;
  std::string str() const;

  friend auto operator<=>(const Signature&, const Signature&) = default;
};

// All nonzero signatures with |sigma|+ <= n.
std::vector<Signature> signatures_up_to(int n, bool cycles_allowed);

// Counterterm weight: n!/((n-|s|+)! prod k_i! prod m_j!) prod ch_i^{k_i}
// prod (cy_j/(2j))^{m_j}, as a polynomial over the shared layout.
PolyQ counterterm_weight(int n, const Signature& sigma);

// --- counterterm polynomial families (index = order, L[0] = 1) ------------

// L_n in (L1, ch): base recursion, chains only.
std::vector<PolyQ> renorm_polys_recursive(int n_max);

// Same family through the coefficient route; both routes are compared and a
// MismatchError carries the first differing coefficient.
std::vector<PolyQ> renorm_polys(int n_max);

// Per-path family: identical recursion instantiated separately and checked
// against renorm_polys.
std::vector<PolyQ> self_renorm_polys(int n_max);

// Toy closed form in two variables (x, u): series extraction from
// exp(s x / (1 + s u)); exact rationals.
std::vector<PolyQ> renorm_polys_gf_toy(int n_max);

// ch_i -> u^i into the two-variable layout (x, u); throws if cycles appear.
PolyQ to_toy(const PolyQ& p);
std::vector<std::string> toy_names();

// H-tilde_n in (H1, ch, cy): recursion with chains and cycles.
std::vector<PolyQ> shifted_square_polys(int n_max);

// --- expansion coefficients ------------------------------------------------

// B_{n,k}: (n!/k!) sum over (j_1..j_k) >= 0 with sum (j_b + 1) = n of
// prod ch_{j_b}, ch_0 = 1.
PolyQ coeff_chain(int n, int k);

// A_{n,k}: (n!/k!) sum_r (1/r!) over cycle orders i_a >= 2 and chain orders
// j_b >= 0 with sum i_a + sum (j_b + 1) = n of prod cy_{i_a}/(2 i_a)
// prod ch_{j_b}.
PolyQ coeff_chain_cycle(int n, int k);

// Unique coefficients C[n][k] with x^n = sum_k C[n][k] basis[k], obtained by
// triangular elimination against the given polynomial family. Ground truth
// for the two formulas above.
std::vector<std::vector<PolyQ>> expansion_coeffs_from(const std::vector<PolyQ>& basis,
                                                      int n_max);

// Exact identity checks; throw MismatchError naming the first bad term.
void check_chain_expansion(int n_max);        // x^n = sum B_{n,k} L_k
void check_chain_cycle_expansion(int n_max);  // H1^n = sum A_{n,k} Htilde_k
void check_gf_vs_recursion(int n_max);        // toy substitution vs series route

// --- reduction coefficients and pairing combinatorics ----------------------

// rho(sigma, k), double-sum route.
Rat rho_sum(int n, const Signature& sigma, int k);
// rho(sigma, k) = C(2(n - |sigma|), k).
Rat rho_closed(int n, const Signature& sigma, int k);

// Both sides of the multinomial identity
// sum_s C(2p,s) sum_v multinomial(m; (k-s-v)/2, v, m-(k-s+v)/2) 2^v = C(2m+2p, k).
BigInt multinomial_identity_lhs(int k, int m, int p);
BigInt multinomial_identity_rhs(int k, int m, int p);

struct PairingCensus {
  std::map<Signature, long long> counts;
  long long total = 0;
};

// Enumerates pairings of (R x {1,2}) u S u U with no element paired to its
// own twin, decomposes each into chains (endpoints in S u U) and cycles
// (inside R), and tallies per signature.
PairingCensus enumerate_pairings(int n_r, int n_s, int n_u);

// Closed-form census count for one signature.
Rat pairing_count(const Signature& sigma, int n_r, int n_su);

// Direct pairing-weighted sum (1/2^|R|) sum_P prod ch/cy against the
// census-weighted closed form, with explicit rational chain/cycle values.
// Returns both sides.
std::pair<Rat, Rat> pairing_weight_identity(int n_r, int n_su,
                                            const std::vector<Rat>& ch_vals,
                                            const std::vector<Rat>& cy_vals);

}  // namespace rwi::alg
