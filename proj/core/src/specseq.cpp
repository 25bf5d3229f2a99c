#include "arclab/specseq.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "arclab/errors.hpp"
#include "arclab/ff.hpp"
#include "arclab/poly.hpp"

namespace arclab::specseq {

namespace {

// Moebius function for small arguments.
int moebius(int n) {
    if (n < 1) throw DomainError("moebius: argument must be positive");
    int mu = 1;
    for (int q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        n /= q;
        if (n % q == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

// Coefficients c_t of (1 - x)^{-e} for t = 0..tmax, via the exact recurrence
// c_t = c_{t-1} (e + t - 1) / t (each quotient is a binomial, so the division
// is exact; for e <= 0 the stream reaches 0 at t = |e| + 1 and stays there).
std::vector<BigInt> neg_binom_coeffs(const BigInt& e, int tmax) {
    std::vector<BigInt> c(static_cast<std::size_t>(tmax) + 1);
    c[0] = 1;
    for (int t = 1; t <= tmax; ++t) c[t] = c[t - 1] * (e + t - 1) / t;
    return c;
}

// table[u][v] = [U^u q^v] prod_{k=1..umax} (1 - q U^k)^{-e_k}.
std::vector<std::vector<BigInt>> pconf_table(const BigInt& N, bool n_even, int umax, int qmax) {
    std::vector<std::vector<BigInt>> a(static_cast<std::size_t>(umax) + 1,
                                       std::vector<BigInt>(static_cast<std::size_t>(qmax) + 1));
    a[0][0] = 1;
    if (umax == 0 || qmax == 0) return a;
    const auto e = e_seq(N, n_even, umax);
    for (int k = 1; k <= umax; ++k) {
        const int tmax = std::min(umax / k, qmax);
        if (tmax == 0) continue;
        const auto c = neg_binom_coeffs(e[static_cast<std::size_t>(k - 1)], tmax);
        std::vector<std::vector<BigInt>> b(static_cast<std::size_t>(umax) + 1,
                                           std::vector<BigInt>(static_cast<std::size_t>(qmax) + 1));
        for (int u = 0; u <= umax; ++u)
            for (int v = 0; v <= qmax; ++v) {
                const BigInt& src = a[u][v];
                if (src == 0) continue;
                for (int t = 0; t <= tmax && u + k * t <= umax && v + t <= qmax; ++t)
                    b[u + k * t][v + t] += src * c[t];
            }
        a = std::move(b);
    }
    return a;
}

int dim_sign(int m, int i, bool n_even) {
    const int parity = n_even ? (i & 1) : ((m + i) & 1);
    return parity ? -1 : 1;
}

poly::FqPoly poly_mod(const poly::FqPoly& a, const poly::FqPoly& f) {
    return poly::divmod(a, f).second;
}

// a^q mod f by square-and-multiply over F_q[T].
poly::FqPoly frobenius_mod(const poly::FqPoly& a, const poly::FqPoly& f) {
    poly::FqPoly acc = poly::FqPoly::constant(f.p, 1);
    poly::FqPoly base = a;
    long long e = f.p;
    while (e > 0) {
        if (e & 1) acc = poly_mod(acc * base, f);
        base = poly_mod(base * base, f);
        e >>= 1;
    }
    return acc;
}

// Number of distinct monic irreducible factors of a squarefree monic f,
// via distinct-degree splitting: gcd(T^{q^e} - T, f) collects exactly the
// degree-e part, which contributes deg/e factors.
int omega_squarefree(const poly::FqPoly& f_in) {
    poly::FqPoly f = f_in;
    const int q = f.p;
    int w = 0;
    poly::FqPoly h = poly_mod(poly::FqPoly(q, {0, 1}), f);  // T mod f
    for (int e = 1; f.deg() > 0; ++e) {
        if (2 * e > f.deg()) {  // leftover is a single irreducible factor
            ++w;
            break;
        }
        h = frobenius_mod(h, f);  // now h = T^{q^e} mod f
        poly::FqPoly diff = h - poly::FqPoly(q, {0, 1});
        if (diff.is_zero()) {  // every remaining factor has degree dividing e
            w += f.deg() / e;
            f = poly::FqPoly::constant(q, 1);
            break;
        }
        poly::FqPoly g = poly::poly_gcd(diff, f);
        if (g.deg() > 0) {
            w += g.deg() / e;
            f = poly::divmod(f, g).first;
            h = poly_mod(h, f);
        }
    }
    return w;
}

BigInt pow_big(const BigInt& x, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

// Exact Lagrange interpolation through (x_i, y_i), i = 0..n; coefficient
// vector of the degree-<= n polynomial, lowest degree first.
std::vector<BigRat> lagrange_coeffs(const std::vector<int>& xs, const std::vector<BigInt>& ys) {
    const std::size_t n = xs.size();
    std::vector<BigRat> out(n, BigRat(0));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<BigRat> basis{BigRat(1)};  // prod_{j != i} (x - x_j)
        BigRat denom(1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            std::vector<BigRat> next(basis.size() + 1, BigRat(0));
            for (std::size_t t = 0; t < basis.size(); ++t) {
                next[t + 1] += basis[t];
                next[t] -= basis[t] * xs[j];
            }
            basis = std::move(next);
            denom *= BigRat(xs[i] - xs[j]);
        }
        const BigRat scale = BigRat(ys[i]) / denom;
        for (std::size_t t = 0; t < basis.size(); ++t) out[t] += basis[t] * scale;
    }
    return out;
}

BigRat eval_rat(const std::vector<BigRat>& coeffs, int x) {
    BigRat acc(0);
    for (std::size_t t = coeffs.size(); t-- > 0;) acc = acc * x + coeffs[t];
    return acc;
}

}  // namespace

BigInt prim_dim(int m, int k) {
    if (m < 1 || k < 2) throw DomainError("prim_dim: need m >= 1 and k >= 2");
    const BigInt base = k - 1;
    BigInt num = pow_big(base, m + 1) + (((m + 1) & 1) ? -base : base);
    if (num % k != 0) throw std::logic_error("prim_dim: non-integral value");
    return num / k;
}

BigInt middle_betti(int n, int k) {
    if (n < 2) throw DomainError("middle_betti: need n >= 2");
    return prim_dim(n, k) + prim_dim(n - 1, k);
}

std::vector<BigInt> e_seq(const BigInt& N, bool n_even, int K) {
    if (K < 1) throw DomainError("e_seq: need K >= 1");
    if (N < 0) throw DomainError("e_seq: need N >= 0");
    const BigInt x = n_even ? N : -N;  // ((-1)^n N)
    std::vector<BigInt> e(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) {
        BigInt sum = 0;
        for (int dd = 1; dd <= k; ++dd) {
            if (k % dd) continue;
            const int mu = moebius(dd);
            if (mu == 0) continue;
            sum += mu * pow_big(x, k / dd);
        }
        if (sum % k != 0) throw std::logic_error("e_seq: necklace sum not divisible by k");
        e[static_cast<std::size_t>(k - 1)] = -sum / k;
    }
    return e;
}

bool product_check(const BigInt& N, bool n_even, int K) {
    const auto e = e_seq(N, n_even, K);
    std::vector<BigInt> p(static_cast<std::size_t>(K) + 1);
    p[0] = 1;
    for (int k = 1; k <= K; ++k) {
        const auto c = neg_binom_coeffs(e[static_cast<std::size_t>(k - 1)], K / k);
        std::vector<BigInt> next(static_cast<std::size_t>(K) + 1);
        for (int j = 0; j <= K; ++j) {
            if (p[j] == 0) continue;
            for (int t = 0; j + k * t <= K && t <= K / k; ++t) next[j + k * t] += p[j] * c[t];
        }
        p = std::move(next);
    }
    if (p[0] != 1) return false;
    if (K >= 1 && p[1] != (n_even ? -N : N)) return false;
    for (int j = 2; j <= K; ++j)
        if (p[j] != 0) return false;
    return true;
}

BigInt pconf_invariant_dim(int m, int i, bool n_even, const BigInt& N) {
    if (m < 0) throw DomainError("pconf_invariant_dim: need m >= 0");
    if (i < 0 || i > m) return 0;  // the generating function has q-degree <= U-degree
    const auto table = pconf_table(N, n_even, m, i);
    BigInt dim = dim_sign(m, i, n_even) * table[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)];
    if (dim < 0) throw std::logic_error("pconf_invariant_dim: sign convention violated");
    return dim;
}

BigInt E1Page::dim_at(int m, int s) const {
    for (const auto& entry : entries)
        if (entry.m == m && entry.s == s) return entry.dim;
    return 0;
}

int E1Page::twist_at(int m) const {
    if (m < 0 || m > d) throw DomainError("E1Page::twist_at: column out of range");
    return k * d - m - n * (d - m);
}

E1Page e1_page(int n, int k, int d) {
    if (n < 2 || k < 2 || d < 1) throw DomainError("e1_page: need n >= 2, k >= 2, d >= 1");
    E1Page page;
    page.n = n;
    page.k = k;
    page.d = d;
    page.N = middle_betti(n, k);
    const bool n_even = (n % 2 == 0);
    const auto table = pconf_table(page.N, n_even, d, d);
    page.entries.push_back({0, 0, BigInt(1), page.twist_at(0)});
    for (int m = 1; m <= d; ++m) {
        for (int s = -m * (n - 1) + 1; s <= -m * (n - 2); ++s) {
            const int i = i_from_s(m, s, n);
            BigInt dim = dim_sign(m, i, n_even) * table[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)];
            if (dim < 0) throw std::logic_error("e1_page: sign convention violated");
            page.entries.push_back({m, s, std::move(dim), page.twist_at(m)});
        }
    }
    return page;
}

std::vector<BigInt> pconf_character_oracle(int m, bool n_even, const BigInt& N,
                                           const std::vector<int>& primes) {
    if (m < 0) throw DomainError("pconf_character_oracle: need m >= 0");
    if (static_cast<int>(primes.size()) < m + 1)
        throw DomainError("pconf_character_oracle: need at least m+1 primes");
    for (int q : primes)
        if (!ff::is_prime(q)) throw DomainError("pconf_character_oracle: non-prime evaluation point");

    const BigInt x = n_even ? -N : N;  // ((-1)^{n-1} N)
    std::vector<BigInt> values;
    values.reserve(primes.size());
    for (int q : primes) {
        // Guard the enumeration of monic degree-m polynomials over F_q.
        double size = 1.0;
        for (int t = 0; t < m; ++t) size *= q;
        if (size > 1e8) throw GuardError("pconf_character_oracle: q^m enumeration too large");
        const long long total = [&] {
            long long s = 1;
            for (int t = 0; t < m; ++t) s *= q;
            return s;
        }();
        // Cache x^w for w = 0..m.
        std::vector<BigInt> xpow(static_cast<std::size_t>(m) + 1);
        xpow[0] = 1;
        for (int w = 1; w <= m; ++w) xpow[w] = xpow[w - 1] * x;

        BigInt sum = 0;
        std::vector<int> coeffs(static_cast<std::size_t>(m) + 1, 0);
        coeffs[static_cast<std::size_t>(m)] = 1;
        for (long long idx = 0; idx < total; ++idx) {
            long long rem = idx;
            for (int t = 0; t < m; ++t) {
                coeffs[static_cast<std::size_t>(t)] = static_cast<int>(rem % q);
                rem /= q;
            }
            poly::FqPoly f(q, coeffs);
            if (m > 0 && !poly::is_squarefree(f)) continue;
            const int w = (m == 0) ? 0 : omega_squarefree(f);
            sum += xpow[static_cast<std::size_t>(w)];
        }
        const bool negate = n_even && (m & 1);  // (-1)^{(n-1) m}
        values.push_back(negate ? -sum : sum);
    }

    // Interpolate from the first m+1 points; the rest must agree.
    std::vector<int> xs(primes.begin(), primes.begin() + (m + 1));
    std::vector<BigInt> ys(values.begin(), values.begin() + (m + 1));
    const auto rat = lagrange_coeffs(xs, ys);
    for (std::size_t j = static_cast<std::size_t>(m) + 1; j < primes.size(); ++j)
        if (eval_rat(rat, primes[j]) != BigRat(values[j]))
            throw DomainError("pconf_character_oracle: interpolation inconsistent across extra primes");
    std::vector<BigInt> out(static_cast<std::size_t>(m) + 1);
    for (std::size_t t = 0; t < out.size(); ++t) {
        if (boost::multiprecision::denominator(rat[t]) != 1)
            throw DomainError("pconf_character_oracle: non-integer interpolated coefficient");
        out[t] = boost::multiprecision::numerator(rat[t]);
    }
    return out;
}

std::vector<BigInt> oracle_dims(int m, bool n_even, const BigInt& N, const std::vector<int>& primes) {
    const auto coeffs = pconf_character_oracle(m, n_even, N, primes);
    std::vector<BigInt> dims(coeffs.size());
    for (int i = 0; i <= m; ++i) {
        const BigInt d = (((m - i) & 1) ? -1 : 1) * coeffs[static_cast<std::size_t>(i)];
        if (d < 0) throw std::logic_error("oracle_dims: negative dimension");
        dims[static_cast<std::size_t>(i)] = d;
    }
    return dims;
}

BigInt loop_betti(int j, int n, int k) {
    if (n < 4) throw DomainError("loop_betti: need n >= 4");
    if (j < 0 || k < 2) throw DomainError("loop_betti: need j >= 0 and k >= 2");
    const BigInt N = middle_betti(n, k);
    const int kmax = std::max(1, (j + 1) / (n - 2));  // beyond this the x-degree exceeds j
    const auto e = e_seq(N, n % 2 == 0, kmax);
    std::vector<BigInt> series(static_cast<std::size_t>(j) + 1);
    series[0] = 1;
    for (int kk = 1; kk <= kmax; ++kk) {
        const int step = kk * (n - 2) - 1;
        if (step > j) break;
        const int tmax = (step == 0) ? 0 : j / step;
        if (tmax == 0) continue;
        const int sgn = ((1 + kk * (n - 2)) % 2 == 0) ? 1 : -1;  // (-1)^{1 - kk(n-2)}
        const auto c = neg_binom_coeffs(e[static_cast<std::size_t>(kk - 1)], tmax);
        std::vector<BigInt> next(static_cast<std::size_t>(j) + 1);
        for (int u = 0; u <= j; ++u) {
            if (series[u] == 0) continue;
            int sg = 1;
            for (int t = 0; u + step * t <= j && t <= tmax; ++t) {
                next[u + step * t] += series[u] * c[t] * sg;
                sg *= sgn;
            }
        }
        series = std::move(next);
    }
    return series[static_cast<std::size_t>(j)];
}

bool row_consistency(int n, int k, int d) {
    if (n < 4) throw DomainError("row_consistency: need n >= 4");
    const E1Page page = e1_page(n, k, d);
    for (int j = 0; j <= d * (n - 3); ++j) {
        BigInt diag = 0;
        for (const auto& entry : page.entries)
            if (entry.m + entry.s == -j) diag += entry.dim;
        if (diag != loop_betti(j, n, k)) return false;
    }
    return true;
}

StableWindow stable_window(int d, int k, int n) {
    if (k < 3) throw DomainError("stable_window: need k >= 3");
    if (d < k - 1) throw DomainError("stable_window: need d >= k - 1");
    if (n < 1 || k >= 62) throw DomainError("stable_window: parameter out of range");
    const long long two_k = 1LL << k;
    const BigRat q = BigRat(BigInt(d / (k - 1))) * (BigRat(BigInt(n), BigInt(two_k)) - (k - 1));
    StableWindow w;
    w.theorem_threshold = -4 * (q - 1);
    w.minor_threshold = BigRat(2LL * d * n + 4) - 4 * q;
    w.n_range_ok = (n >= two_k * k);
    w.theorem_hypothesis_ok = (n > two_k * (k - 1));
    for (int m = 1; m <= d; ++m) w.cor_stable_gaps.emplace_back(1 - m * (n - 2), -m * (n - 3));
    return w;
}

std::vector<Differential> feasible_differentials(int n, int d) {
    if (n < 4) throw DomainError("feasible_differentials: need n >= 4");
    if (d < 1) throw DomainError("feasible_differentials: need d >= 1");
    std::vector<Differential> out;
    for (int m = 1; m <= d; ++m) {
        for (int s = -m * (n - 1) + 1; s <= -m * (n - 2); ++s) {
            for (int r = 2; m + r <= d; r += 2) {
                if (m < r * (n - 3) + 2) continue;
                const int tm = m + r, ts = s - r + 1;
                if (ts < -tm * (n - 1) + 1 || ts > -tm * (n - 2)) continue;
                out.push_back({m, s, r});
            }
        }
    }
    return out;
}

}  // namespace arclab::specseq
