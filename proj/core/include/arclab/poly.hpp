#pragma once
// Arithmetic of F_p[T] and of truncated Laurent tails in 1/T, including the
// rational-reconstruction primitive behind the major-arc charts: a tail
// alpha = sum_{r=1..kd} b_r T^{-r} lies on arc level m iff the (kd-m)x(m+1)
// Hankel matrix M_ij = b_{i+j-1} drops rank to <= m, and the kernel converts
// to the unique coprime pair h1/h2 best-approximating alpha.

#include <optional>
#include <string>
#include <vector>

#include "arclab/errors.hpp"
#include "arclab/ff.hpp"

namespace arclab::poly {

// Dense polynomial over F_p, lowest-degree coefficient first, normalized so
// the leading coefficient is nonzero. deg(0) is represented as -1.
struct FqPoly {
    int p = 0;
    std::vector<int> c;

    FqPoly() = default;
    explicit FqPoly(int p_) : p(p_) {}
    FqPoly(int p_, std::vector<int> coeffs);

    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    int lead() const { return c.empty() ? 0 : c.back(); }
    bool is_monic() const { return lead() == 1; }
    int coeff(int i) const { return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : 0; }
    int eval(int x) const;
    bool operator==(const FqPoly& o) const = default;

    static FqPoly zero(int p) { return FqPoly(p); }
    static FqPoly constant(int p, int v) { return FqPoly(p, {v}); }
    static FqPoly from_roots(int p, const std::vector<int>& roots);  // monic prod (T - r)
};

FqPoly operator+(const FqPoly& a, const FqPoly& b);
FqPoly operator-(const FqPoly& a, const FqPoly& b);
FqPoly operator*(const FqPoly& a, const FqPoly& b);
FqPoly scale(const FqPoly& a, int s);
FqPoly derivative(const FqPoly& a);
// Euclidean division by a nonzero divisor: a = q*b + r with deg r < deg b.
std::pair<FqPoly, FqPoly> divmod(const FqPoly& a, const FqPoly& b);
FqPoly make_monic(const FqPoly& a);

// Text form "c0+c1*T+c2*T^2" with decimal residues (zero terms omitted;
// the zero polynomial prints "0").
std::string to_string(const FqPoly& a);

// Monic gcd; rejects gcd(0, 0).
FqPoly poly_gcd(const FqPoly& a, const FqPoly& b);

// True iff gcd(f, f') = 1. The derivative-collapse corner (f' = 0, possible
// only when every exponent is divisible by p) deterministically reports
// "not squarefree". The zero polynomial is rejected.
bool is_squarefree(const FqPoly& f);

// Negative-exponent window of a Laurent series: b[r-1] is the coefficient of
// T^{-r}, r = 1..kd.
struct LaurentTail {
    int p = 0;
    std::vector<int> b;

    LaurentTail() = default;
    LaurentTail(int p_, std::vector<int> b_);
    int kd() const { return static_cast<int>(b.size()); }
    bool is_zero() const;
    bool operator==(const LaurentTail& o) const = default;
};

// First kd coefficients of h1/h2 (deg h1 < deg h2, h2 monic) in 1/T.
LaurentTail tail_of(const FqPoly& h1, const FqPoly& h2, int kd);

// The unique minimal rational approximation at level m:
// alpha - h1/h2 = O(T^{-kd-1+m-m'}) with h2 monic of degree m' <= m and
// gcd(h1, h2) = 1.
struct RationalApprox {
    int m_prime = 0;
    FqPoly h1, h2;
    bool operator==(const RationalApprox& o) const = default;
};

// Hankel-kernel reconstruction (the primary path). Returns nullopt when the
// tail is off A_m; throws DomainError for m outside [0, kd/2] (uniqueness of
// the minimal pair is only guaranteed up to kd/2, so larger m is refused).
std::optional<RationalApprox> rational_reconstruct(const LaurentTail& b, int m);

// Independent cross-check oracle via the extended Euclidean algorithm on
// (T^kd, sum b_r T^{kd-r}); same contract as rational_reconstruct.
std::optional<RationalApprox> xgcd_reconstruct(const LaurentTail& b, int m);

}  // namespace arclab::poly
