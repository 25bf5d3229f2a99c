// The exponential-sum engine: parameterized families g_j = P_j T^d + lower
// terms, the coefficient map a -> (c_1..c_kd) of f(g_1..g_n), pushforward
// histograms over the coefficient space, full-space character sweeps S(b),
// and the exact residue-level checks that tie strata to charts.
#pragma once

#include <arclab/arcs.hpp>
#include <arclab/errors.hpp>
#include <arclab/ff.hpp>
#include <arclab/gfq.hpp>
#include <arclab/poly.hpp>

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace arclab::expsum {

inline constexpr std::uint64_t kDefaultGuard = 100000000ull;  // 1e8 enumeration cap

// One term coeff * x_1^{e_1} ... x_n^{e_n}.
struct Monomial {
  std::vector<int> exps;
  long long coeff = 0;
};

// A validated problem instance: f of total degree k in n variables over F_p,
// leading coefficients P on the leading-form zero locus, smoothness checked
// exhaustively over F_p and F_{p^2}.
struct MorInstance {
  int p = 0;
  int k = 0;
  int n = 0;
  int d = 0;
  std::vector<Monomial> f;       // coefficient-reduced, zero terms dropped
  std::vector<Monomial> f0;      // terms of f of total degree exactly k
  std::vector<int> P;            // leading coefficients, size n

  int kd() const { return k * d; }
  int dn() const { return d * n; }
};

// Validates every hypothesis (p prime > k; d >= 1; P nonzero with f0(P) = 0
// and grad f0(P) != 0; f0 smooth projective and f smooth affine over both F_p
// and F_{p^2}). Violations throw InstanceError; malformed shapes throw
// DomainError; enumeration beyond max_enum throws GuardError.
MorInstance make_instance(int p, int k, int n, int d, std::vector<Monomial> f,
                          std::vector<int> P, std::uint64_t max_enum = kDefaultGuard);

// Evaluate a monomial list over any field with the shared interface.
template <typename Field>
typename Field::Elt eval_terms(const Field& fld, const std::vector<Monomial>& terms,
                               const std::vector<typename Field::Elt>& x) {
  typename Field::Elt acc = fld.zero();
  for (const Monomial& t : terms) {
    typename Field::Elt prod = fld.from_base(t.coeff);
    for (std::size_t j = 0; j < t.exps.size(); ++j) {
      for (int e = 0; e < t.exps[j]; ++e) prod = fld.mul(prod, x[j]);
    }
    acc = fld.add(acc, prod);
  }
  return acc;
}

// Formal partial derivative of a monomial list with respect to variable j.
std::vector<Monomial> partial(const std::vector<Monomial>& terms, int j, int p);

// Coefficients (c_1,...,c_kd) with f(g_1,...,g_n) = sum_r c_r T^{r-1}, where
// g_j = P_j T^d + sum_{i<d} a[(j-1)d+i] T^i. The top coefficient [T^kd]
// vanishes identically because f0(P) = 0, so kd entries always suffice.
std::vector<int> coeff_map(const MorInstance& inst, std::span<const int> a);

// Pushforward of the uniform measure on F_p^{dn} under coeff_map.
struct Histogram {
  int p = 0;
  int kd = 0;
  std::vector<std::int64_t> counts;                            // size p^kd
  std::vector<std::pair<std::uint64_t, std::int64_t>> cells;   // nonzero entries, ascending index
  std::int64_t total = 0;                                      // = p^{dn}
};

Histogram build_histogram(const MorInstance& inst, std::uint64_t max_enum = kDefaultGuard,
                          unsigned threads = 1);

// #{a : f(g_a) = 0} = counts at the origin.
std::int64_t count_mor(const Histogram& hist);

// All S(b) = sum_c hist[c] psi(b.c) for one fixed nontrivial psi (e(t/p)),
// computed by kd axis passes of size-p character transforms in a fixed order.
struct SweepResult {
  int p = 0;
  int kd = 0;
  std::vector<std::complex<double>> S;  // index = sum_r b_r p^{r-1}
};

SweepResult sweep(const Histogram& hist, std::uint64_t max_enum = kDefaultGuard,
                  unsigned threads = 1);

// Exact value distribution of a -> b.c(a), assembled from histogram cells.
ff::CountVector cv_of_b(const Histogram& hist, const poly::LaurentTail& b);

// sum_t counts[t] e(t/p): the S(b) value the sweep approximates, exactly.
std::complex<double> psi_sum(const ff::CountVector& cv);

// Largest relative |S_sweep - S_exact| / max(1, |S_exact|) over `samples`
// uniformly drawn b (deterministic in seed).
double sweep_crosscheck(const Histogram& hist, const SweepResult& sw, int samples,
                        std::uint64_t seed);

// sum_b CV_b as exact integers, compared against the closed form
// p^{kd-1}(p^{dn} - M) + [t=0] p^kd M with M = count_mor.
struct OrthogonalityResult {
  std::int64_t mor_count = 0;
  ff::CountVector aggregate;   // empirical, summed over every b
  ff::CountVector expected;    // closed form
  bool pass = false;
};

OrthogonalityResult check_orthogonality(const Histogram& hist);

// Every b of level m outside the charted set must have uniform CV.
struct InfinityReport {
  int m = 0;
  std::int64_t tested = 0;
  std::vector<poly::LaurentTail> violators;
  bool pass = false;
};

InfinityReport check_infinity_vanishing(const MorInstance& inst, const Histogram& hist, int m,
                                        unsigned threads = 1);

// Value distribution over residue tuples (F_p[T]/h2)^n of the T^{-1}
// coefficient of (h1/h2) f(a~). Requires h2 monic, deg h1 < deg h2,
// gcd(h1, h2) = 1.
ff::CountVector residue_sum(const MorInstance& inst, const poly::FqPoly& h1,
                            const poly::FqPoly& h2);

// residue_sum aggregated over all h1 of degree < deg l coprime to l.
ff::CountVector aggregate_at(const MorInstance& inst, const poly::FqPoly& l);

// CV(e(.;b)) == p^{n(d-m)} * residue_sum at the chart of b. Requires b
// charted with m = level(b) <= d.
bool check_residue_reduction(const MorInstance& inst, const Histogram& hist,
                             const poly::LaurentTail& b);

// Aggregate at a non-squarefree modulus must be uniform.
bool check_power_vanishing(const MorInstance& inst, const poly::FqPoly& h2);

// Aggregate at l1*l2 equals the convolution of the aggregates (coprime moduli).
bool check_factorisation(const MorInstance& inst, const poly::FqPoly& l1,
                         const poly::FqPoly& l2);

// Degree-one aggregates are independent of the root x, with the predicted
// exact counts {0: (p-1)#X, t!=0: p^n - #X} and psi-sum p #X - p^n.
struct MaintermReport {
  bool x_independent = false;
  bool counts_match = false;
  std::int64_t points_on_X = 0;          // #{x in F_p^n : f(x) = 0}
  ff::CountVector aggregate;             // the common aggregate
  std::complex<double> psi_value;
  double expected_psi = 0.0;             // p #X - p^n (real)
  bool pass = false;
};

MaintermReport check_mainterm(const MorInstance& inst);

// Direct sum of S(b) over the level-m stratum (float sweep path).
std::complex<double> stratum_direct(const Histogram& hist, const SweepResult& sw, int m);

// Two-way stratum assembly: direct sweep vs p^{n(d-m)} * sum over squarefree
// monic charts of psi-weighted residue sums. Requires m <= d.
struct StratumSumResult {
  int m = 0;
  std::complex<double> direct;
  std::complex<double> assembled;
  bool pass = false;
};

StratumSumResult stratum_sum(const MorInstance& inst, const Histogram& hist,
                             const SweepResult& sw, int m);

// Guard helper shared by enumeration routines: p^e as uint64, throwing
// GuardError when it exceeds max_enum.
std::uint64_t checked_pow(int p, int e, std::uint64_t max_enum);

}  // namespace arclab::expsum
