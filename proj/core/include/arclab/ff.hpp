#pragma once
// Prime-field arithmetic and exact value distributions of F_p-valued maps.
// A CountVector stores how often each residue occurs; it is a lossless,
// integer-exact stand-in for the additive-character sum S = sum psi(value):
// the sum for every character can be recovered from it, and "S vanishes for
// all nontrivial psi" is exactly "all counts equal".

#include <complex>
#include <cstdint>
#include <vector>

#include "arclab/errors.hpp"

namespace arclab::ff {

bool is_prime(long long p);

// Canonical residue in [0, p).
inline int normalize(long long x, int p) {
    int r = static_cast<int>(x % p);
    return r < 0 ? r + p : r;
}

inline int add_mod(int a, int b, int p) { int s = a + b; return s >= p ? s - p : s; }
inline int sub_mod(int a, int b, int p) { int s = a - b; return s < 0 ? s + p : s; }
inline int mul_mod(int a, int b, int p) { return static_cast<int>(static_cast<long long>(a) * b % p); }

int pow_mod(int a, long long e, int p);
int inv_mod(int a, int p);  // a != 0 mod p required

// Validated prime modulus.
struct PrimeField {
    int p;
    explicit PrimeField(int p_) : p(p_) {
        if (p < 2 || !is_prime(p)) throw DomainError("PrimeField: modulus must be prime");
    }
};

struct CountVector {
    int p = 0;
    std::vector<std::int64_t> counts;  // counts[t] = #{x : value(x) = t}, t in [0,p)

    CountVector() = default;
    explicit CountVector(int p_) : p(p_), counts(static_cast<std::size_t>(p_), 0) {}
    CountVector(int p_, std::vector<std::int64_t> c) : p(p_), counts(std::move(c)) {
        if (static_cast<int>(counts.size()) != p) throw DomainError("CountVector: size != p");
    }

    std::int64_t total() const {
        std::int64_t s = 0;
        for (auto c : counts) s += c;
        return s;
    }
    bool operator==(const CountVector& o) const = default;
};

// Unit mass at t=0: the convolution identity.
CountVector delta0(int p);

// Exact distribution scaled view: sum_t counts[t] * exp(2*pi*i*j*t/p).
// The trivial character j = 0 (mod p) is rejected: it never witnesses vanishing.
std::complex<double> charsum_eval(const CountVector& cv, int j);

// True iff all counts are equal, i.e. charsum_eval(cv, j) = 0 for every
// nontrivial j (the p-th roots of unity satisfy only the full-orbit relation).
bool is_uniform(const CountVector& cv);

// Additive convolution over F_p: out[t] = sum_{u+v=t} cv1[u]*cv2[v].
CountVector convolve(const CountVector& cv1, const CountVector& cv2);

}  // namespace arclab::ff
