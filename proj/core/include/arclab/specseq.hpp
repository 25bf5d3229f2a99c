// Closed-form side of the theory: the exponent sequence e_k(N), the first
// page of the spectral sequence with its support triangle and Tate twists,
// loop-space Betti numbers, the stable window bookkeeping, differential
// feasibility, and an independent character-sum interpolation oracle for the
// symmetric-invariant dimensions. All series arithmetic is exact big-integer
// truncated-polynomial arithmetic; floating point never enters.
#pragma once

#include <arclab/errors.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <utility>
#include <vector>

namespace arclab::specseq {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Primitive middle cohomology dimension of a smooth degree-k hypersurface in
// P^m: ((k-1)^{m+1} + (-1)^{m+1} (k-1)) / k.
BigInt prim_dim(int m, int k);

// Middle Betti number N of the relevant (n-2)-dimensional smooth hypersurface
// pair: prim_dim(n, k) + prim_dim(n-1, k) = (k-1)^n.
BigInt middle_betti(int n, int k);

// e_k = -(1/k) sum_{d|k} mu(d) ((-1)^n N)^{k/d}, k = 1..K, exact integers.
std::vector<BigInt> e_seq(const BigInt& N, bool n_even, int K);

// prod_{k<=K} (1 - T^k)^{-e_k} == 1 + (-1)^{n-1} N T  (mod T^{K+1}).
bool product_check(const BigInt& N, bool n_even, int K);

// The reindexing between the generating-function degree i and the page
// coordinate s: cohomological degree s + mn equals m + i.
inline int i_from_s(int m, int s, int n) { return s + m * (n - 1); }
inline int s_from_i(int m, int i, int n) { return i - m * (n - 1); }

// dim of the S_m-invariants in H^{m+i}_c(PConf_m) tensor V^{(x)m} tensor
// sgn^{n-1}: up to sign, the coefficient of q^i U^m in prod (1-qU^k)^{-e_k}.
// The sign is (-1)^i for n even and (-1)^{m+i} for n odd; a negative result
// would mean the sign convention is wrong and throws.
BigInt pconf_invariant_dim(int m, int i, bool n_even, const BigInt& N);

struct E1Entry {
  int m = 0;
  int s = 0;
  BigInt dim;
  int twist = 0;  // kd - m - n(d-m); metadata only
};

struct E1Page {
  int n = 0, k = 0, d = 0;
  BigInt N;
  std::vector<E1Entry> entries;  // all support cells, ascending (m, s)

  // 0 off the support triangle.
  BigInt dim_at(int m, int s) const;
  // Twist of a column; valid for 0 <= m <= d.
  int twist_at(int m) const;
};

// Support: (0,0) with dim 1, plus 1 <= m <= d with -m(n-1)+1 <= s <= -m(n-2).
E1Page e1_page(int n, int k, int d);

// Character-sum oracle: for each prime q, sum ((-1)^{n-1} N)^{omega(f)} *
// (-1)^{(n-1)m} over squarefree monic f of degree m in F_q[T], where omega
// counts distinct irreducible factors (distinct-degree gcd peeling; no
// factorization into irreducibles). Interpolates the degree-<= m polynomial
// in q from the first m+1 primes and checks any extra primes; inconsistency
// or a non-integer coefficient throws. Returns coefficients of q^0..q^m.
std::vector<BigInt> pconf_character_oracle(int m, bool n_even, const BigInt& N,
                                           const std::vector<int>& primes);

// Dimensions encoded by the oracle coefficients: D_{m,i} = (-1)^{m-i} c_i.
// Throws if any comes out negative.
std::vector<BigInt> oracle_dims(int m, bool n_even, const BigInt& N,
                                const std::vector<int>& primes);

// Coefficient of q^{-j} in prod_k (1 - (-q)^{1 - k(n-2)})^{-e_k(N)} with
// N = (k-1)^n; the free-graded-commutative-algebra Betti number. n >= 4.
BigInt loop_betti(int j, int n, int k);

// loop_betti(j) equals the anti-diagonal sum (over m + s = -j) of the first
// page, for every j <= d(n-3).
bool row_consistency(int n, int k, int d);

struct StableWindow {
  BigRat theorem_threshold;        // -4( floor(d/(k-1)) (n/2^k - k + 1) - 1 )
  BigRat minor_threshold;          // 2dn + 4 - 4 floor(d/(k-1)) (n/2^k - k + 1)
  bool n_range_ok = false;         // n >= 2^k k
  bool theorem_hypothesis_ok = false;  // n > 2^k (k-1), strict
  std::vector<std::pair<int, int>> cor_stable_gaps;  // [1-m(n-2), -m(n-3)], m = 1..d
};

// Requires d >= k-1 >= 2.
StableWindow stable_window(int d, int k, int n);

struct Differential {
  int m = 0, s = 0;
  int r = 0;
  friend bool operator==(const Differential&, const Differential&) = default;
};

// All (m, s, r) with r >= 2 even, m >= r(n-3)+2, m+r <= d, and both the
// source (m, s) and the target (m+r, s-r+1) inside the support. n >= 4.
std::vector<Differential> feasible_differentials(int n, int d);

}  // namespace arclab::specseq
