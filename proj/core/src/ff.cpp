#include "arclab/ff.hpp"

#include <cmath>
#include <numbers>

namespace arclab::ff {

bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

int pow_mod(int a, long long e, int p) {
    long long base = normalize(a, p), acc = 1;
    while (e > 0) {
        if (e & 1) acc = acc * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<int>(acc);
}

int inv_mod(int a, int p) {
    a = normalize(a, p);
    if (a == 0) throw DomainError("inv_mod: zero is not invertible");
    return pow_mod(a, p - 2, p);
}

CountVector delta0(int p) {
    CountVector cv(p);
    cv.counts[0] = 1;
    return cv;
}

std::complex<double> charsum_eval(const CountVector& cv, int j) {
    if (normalize(j, cv.p) == 0)
        throw DomainError("charsum_eval: trivial character rejected");
    const double w = 2.0 * std::numbers::pi * normalize(j, cv.p) / cv.p;
    std::complex<double> s = 0.0;
    for (int t = 0; t < cv.p; ++t) {
        if (cv.counts[t] == 0) continue;
        s += static_cast<double>(cv.counts[t]) *
             std::complex<double>(std::cos(w * t), std::sin(w * t));
    }
    return s;
}

bool is_uniform(const CountVector& cv) {
    for (int t = 1; t < cv.p; ++t)
        if (cv.counts[t] != cv.counts[0]) return false;
    return true;
}

CountVector convolve(const CountVector& cv1, const CountVector& cv2) {
    if (cv1.p != cv2.p) throw DomainError("convolve: mismatched moduli");
    const int p = cv1.p;
    CountVector out(p);
    for (int u = 0; u < p; ++u) {
        if (cv1.counts[u] == 0) continue;
        for (int v = 0; v < p; ++v) {
            if (cv2.counts[v] == 0) continue;
            out.counts[add_mod(u, v, p)] += cv1.counts[u] * cv2.counts[v];
        }
    }
    return out;
}

}  // namespace arclab::ff
