#pragma once
// Minor-arc machinery at desk scale: the symmetric coefficient tensor of the
// leading form and its partial-polarization forms Psi_j, the multilinear
// solution count N and its Laurent-window twin N(alpha), point counts of the
// Weyl variety V(G) over F_p and F_{p^2}, the trace-level Weyl inequality
// chain, successive minima of the 2n-dimensional function-field lattices
// Lambda_{a,c} with Lee's product formula and the shrinking ratio, the
// empirical minor-arc bound, and a two-field dimension fit.

#include <cstdint>
#include <map>
#include <vector>

#include "arclab/errors.hpp"
#include "arclab/expsum.hpp"
#include "arclab/poly.hpp"

namespace arclab::minor {

inline constexpr std::uint64_t kDefaultGuard = 100000000ULL;

// Symmetric k-linear coefficient tensor over F_p: c indexed by sorted
// k-tuples of variable indices, with c_{sigma(J)} = c_J baked in by keying on
// the sorted tuple. Requires p > k so that k! is invertible.
struct SymForm {
    int p = 0, k = 0, n = 0;
    std::map<std::vector<int>, int> c;  // sorted index tuple (size k) -> residue
};

// Polarize a degree-k form given as monomials: the tuple holding index j
// e_j times gets coefficient coeff * prod_j e_j! / k!  (all mod p).
SymForm make_sym_form(int p, int k, int n, const std::vector<expsum::Monomial>& terms);

// The tensor of the instance's leading form.
SymForm sym_form(const expsum::MorInstance& inst);

// The n associated (k-1)-linear forms
//   Psi_j(h^(1),..,h^(k-1)) = k! sum c_{j_1..j_{k-1}, j} h^(1)_{j_1} ... ,
// stored densely: t[j][flat] with flat = sum_l j_l n^l over ordered tuples.
struct PsiForms {
    int p = 0, k = 0, n = 0;
    std::vector<std::vector<int>> t;
};
PsiForms psi_forms(const SymForm& f0);

// Number of tuples (u^(1),..,u^(k-1)) in (F_p^{dn})^{k-1} solving the
// bilinearized system d_{J,I} = c_J b_{i_1+..+i_{k-1}+i+1}: computed by
// fixing the first k-2 blocks and adding p^{dn - rank} of the resulting
// linear system on the last block. Size guard: p^{(k-1)nd} <= max_enum.
long long count_system(const SymForm& f0, const poly::LaurentTail& b, int d,
                       std::uint64_t max_enum = kDefaultGuard, unsigned threads = 1);

// The same count, measured on the other side of the bridge: enumerate all
// polynomial tuples |u^(l)| < q^d and keep those where every coefficient of
// T^{-1}..T^{-d} in alpha Psi_j(u) vanishes (alpha the tail b).
long long count_Nalpha(const SymForm& f0, const poly::LaurentTail& b, int d,
                       std::uint64_t max_enum = kDefaultGuard, unsigned threads = 1);

// #V(G)(F_{p^r}) for r in {1,2}: tuples (y^(1),..,y^(k-1)) over the field
// with all Psi_j vanishing (the multilinear characterization of V(G), valid
// in characteristic > k). r > 2 is refused.
long long vg_count(const SymForm& g0, int r, std::uint64_t max_enum = kDefaultGuard);

struct WeylReport {
    double s_abs = 0;       // |S(G)|
    double s_neg_abs = 0;   // |S(-G)|
    double s_sq = 0;        // |S(G)|^2
    double diff_sum = 0;    // sum over 2N variables of the differenced phase
    long long vg = 0;       // #V(G_0)(F_p)
    double lhs = 0;         // |S|^{2^{k-1}}
    double rhs = 0;         // p^{N(2^{k-1}-(k-1))} * #V
    bool conj_ok = false;   // |S(G)| == |S(-G)|      (1e-6 relative)
    bool shear_ok = false;  // |S|^2 == differenced sum (1e-6 relative)
    bool weyl_ok = false;   // lhs <= rhs
    bool pass() const { return conj_ok && shear_ok && weyl_ok; }
};

// Trace-level Weyl chain for a polynomial G (monomial list in nvars
// variables, total degree exactly k; lower-order terms allowed).
WeylReport weyl_check(int p, int nvars, int k, const std::vector<expsum::Monomial>& terms,
                      std::uint64_t max_enum = kDefaultGuard);

// Symmetric n x n matrix of Laurent tails: entry (i,j) is
// sum_{r=1..prec} g[i*n+j][r-1] T^{-r}. Operations check that the window
// they need fits inside prec and refuse otherwise.
struct LaurentMat {
    int p = 0, n = 0, prec = 0;
    std::vector<std::vector<int>> g;
};
LaurentMat make_laurent_mat(int p, int n, int prec, std::vector<std::vector<int>> entries);

struct LatticeReport {
    int a = 0, c = 0;
    std::vector<int> rho;  // successive-minima exponents, ascending (size 2n)
    long long lee = 0;     // prod max(1, q^{-rho_i}) = q^{sum max(0, -rho_i)}
};

// Successive minima of Lambda_{a,c} = (t^{-a}I t^c gamma ; 0 t^c I): scale by
// t^a, row-reduce the polynomial matrix to weak Popov form, read off sorted
// row degrees, unshift by a. Needs prec >= a + c.
LatticeReport lattice_minima(const LaurentMat& gamma, int a, int c);

// Minima of the dual lattice t^{c-a} Lambda_{a,c}^{-T}; satisfies
// rho_i + rho'_{2n+1-i} = c - a against lattice_minima.
std::vector<int> dual_minima(const LaurentMat& gamma, int a, int c);

// #{u in F_p[T]^n : deg u_i < a, coefficients of T^{-1}..T^{-c} of every
// (gamma u)_j vanish} by enumeration. Needs prec >= a + c - 1.
long long lattice_brute_count(const LaurentMat& gamma, int a, int c,
                              std::uint64_t max_enum = kDefaultGuard);

struct ShrinkReport {
    long long n_ac = 0;     // N_{gamma,a,c}
    long long n_shift = 0;  // N_{gamma,a-s,c+s}
    double ratio = 0;
    double bound = 0;       // q^{ns + n max(floor((a-c)/2), 0)}
    bool pass = false;
};
ShrinkReport shrink_check(const LaurentMat& gamma, int a, int c, int s,
                          std::uint64_t max_enum = kDefaultGuard);

struct MinorBoundReport {
    int m = 0;
    long long tested = 0;       // scaling classes (or samples) examined
    long long max_count = 0;    // max of N(alpha) over them
    std::vector<int> argmax_b;  // first tail attaining the max, fixed order
    double denom = 0;           // p^{dn(k-1) - n floor(m/(k-1))}
    double max_ratio = 0;
};

// Scan b outside A_m (every scaling class when samples == 0, else `samples`
// rejection-sampled tails) and report the largest N(alpha) relative to the
// predicted power of p. Requires d <= m <= kd/2.
MinorBoundReport minor_bound_check(const expsum::MorInstance& inst, int m,
                                   long long samples = 0, std::uint64_t seed = 0,
                                   std::uint64_t max_enum = kDefaultGuard,
                                   unsigned threads = 1);

struct DimFitReport {
    long long n1 = 0, n2 = 0;  // #V(F_p), #V(F_{p^2})
    int d_hat = 0;             // round(log_p(n2/n1))
    double c1 = 0, c2 = 0;     // n_r / p^{r d_hat}
    bool dim_ok = false;       // d_hat <= (k-2) n
    bool langweil_ok = false;  // c1, c2 within a factor 2
};
DimFitReport dimv_fit_report(const SymForm& f0, std::uint64_t max_enum = kDefaultGuard);

// The fitted dimension alone.
int dimv_fit(const SymForm& f0, std::uint64_t max_enum = kDefaultGuard);

}  // namespace arclab::minor
