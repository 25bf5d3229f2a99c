#include "arclab/poly.hpp"

#include <algorithm>
#include <cassert>

namespace arclab::poly {

using ff::add_mod;
using ff::inv_mod;
using ff::mul_mod;
using ff::normalize;
using ff::sub_mod;

static void trim(std::vector<int>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

FqPoly::FqPoly(int p_, std::vector<int> coeffs) : p(p_), c(std::move(coeffs)) {
    for (auto& x : c) x = normalize(x, p);
    trim(c);
}

int FqPoly::eval(int x) const {
    x = normalize(x, p);
    long long acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * x + *it) % p;
    return static_cast<int>(acc);
}

FqPoly FqPoly::from_roots(int p, const std::vector<int>& roots) {
    FqPoly f = FqPoly::constant(p, 1);
    for (int r : roots) f = f * FqPoly(p, {normalize(-r, p), 1});
    return f;
}

FqPoly operator+(const FqPoly& a, const FqPoly& b) {
    FqPoly out(a.p);
    out.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < out.c.size(); ++i)
        out.c[i] = add_mod(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)), a.p);
    trim(out.c);
    return out;
}

FqPoly operator-(const FqPoly& a, const FqPoly& b) {
    FqPoly out(a.p);
    out.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < out.c.size(); ++i)
        out.c[i] = sub_mod(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)), a.p);
    trim(out.c);
    return out;
}

FqPoly operator*(const FqPoly& a, const FqPoly& b) {
    if (a.is_zero() || b.is_zero()) return FqPoly::zero(a.p);
    FqPoly out(a.p);
    out.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            out.c[i + j] = static_cast<int>((out.c[i + j] + static_cast<long long>(a.c[i]) * b.c[j]) % a.p);
    }
    trim(out.c);
    return out;
}

FqPoly scale(const FqPoly& a, int s) {
    FqPoly out(a.p);
    s = normalize(s, a.p);
    if (s == 0) return out;
    out.c = a.c;
    for (auto& x : out.c) x = mul_mod(x, s, a.p);
    trim(out.c);
    return out;
}

FqPoly derivative(const FqPoly& a) {
    FqPoly out(a.p);
    if (a.deg() < 1) return out;
    out.c.resize(a.c.size() - 1);
    for (int i = 1; i <= a.deg(); ++i)
        out.c[i - 1] = mul_mod(a.c[i], i % a.p, a.p);
    trim(out.c);
    return out;
}

std::pair<FqPoly, FqPoly> divmod(const FqPoly& a, const FqPoly& b) {
    if (b.is_zero()) throw DomainError("divmod: division by zero polynomial");
    FqPoly q(a.p), r = a;
    if (a.deg() < b.deg()) return {q, r};
    q.c.assign(a.deg() - b.deg() + 1, 0);
    const int binv = inv_mod(b.lead(), a.p);
    while (!r.is_zero() && r.deg() >= b.deg()) {
        int s = r.deg() - b.deg();
        int f = mul_mod(r.lead(), binv, a.p);
        q.c[s] = f;
        for (int i = 0; i <= b.deg(); ++i)
            r.c[s + i] = sub_mod(r.c[s + i], mul_mod(f, b.c[i], a.p), a.p);
        trim(r.c);
    }
    trim(q.c);
    return {q, r};
}

FqPoly make_monic(const FqPoly& a) {
    if (a.is_zero() || a.is_monic()) return a;
    return scale(a, inv_mod(a.lead(), a.p));
}

std::string to_string(const FqPoly& a) {
    if (a.is_zero()) return "0";
    std::string s;
    for (int i = 0; i <= a.deg(); ++i) {
        if (a.c[i] == 0) continue;
        if (!s.empty()) s += '+';
        if (i == 0) {
            s += std::to_string(a.c[i]);
        } else {
            s += std::to_string(a.c[i]);
            s += "*T";
            if (i > 1) s += '^' + std::to_string(i);
        }
    }
    return s;
}

FqPoly poly_gcd(const FqPoly& a, const FqPoly& b) {
    if (a.is_zero() && b.is_zero()) throw DomainError("poly_gcd: gcd(0,0) undefined");
    FqPoly u = a, v = b;
    while (!v.is_zero()) {
        FqPoly r = divmod(u, v).second;
        u = v;
        v = r;
    }
    return make_monic(u);
}

bool is_squarefree(const FqPoly& f) {
    if (f.is_zero()) throw DomainError("is_squarefree: zero polynomial rejected");
    FqPoly fp = derivative(f);
    if (fp.is_zero()) return false;  // every exponent divisible by p
    return poly_gcd(f, fp).deg() == 0;
}

LaurentTail::LaurentTail(int p_, std::vector<int> b_) : p(p_), b(std::move(b_)) {
    for (auto& x : b) x = normalize(x, p);
}

bool LaurentTail::is_zero() const {
    return std::all_of(b.begin(), b.end(), [](int x) { return x == 0; });
}

LaurentTail tail_of(const FqPoly& h1, const FqPoly& h2, int kd) {
    if (h2.is_zero() || !h2.is_monic()) throw DomainError("tail_of: h2 must be monic");
    if (!h1.is_zero() && h1.deg() >= h2.deg()) throw DomainError("tail_of: need deg h1 < deg h2");
    const int p = h2.p, m = h2.deg();
    LaurentTail out(p, std::vector<int>(kd, 0));
    if (m == 0) return out;  // h1 = 0, h2 = 1: the zero tail
    // Long division: repeatedly multiply the remainder by T and reduce mod h2;
    // the coefficient peeled off at step r is b_r.
    std::vector<int> rem(static_cast<std::size_t>(m), 0);
    for (int i = 0; i <= h1.deg(); ++i) rem[i] = h1.c[i];
    for (int r = 1; r <= kd; ++r) {
        int lead = rem[m - 1];
        // rem <- rem * T - lead * h2 (degree stays < m)
        for (int i = m - 1; i >= 1; --i)
            rem[i] = sub_mod(rem[i - 1], mul_mod(lead, h2.c[i], p), p);
        rem[0] = sub_mod(0, mul_mod(lead, h2.c[0], p), p);
        out.b[r - 1] = lead;
    }
    return out;
}

// Reduced row echelon form in place; returns pivot column of each pivot row.
static std::vector<int> rref(std::vector<std::vector<int>>& M, int p) {
    std::vector<int> pivots;
    if (M.empty()) return pivots;
    const int rows = static_cast<int>(M.size());
    const int cols = static_cast<int>(M[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (M[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(M[r], M[piv]);
        const int inv = inv_mod(M[r][c], p);
        for (int j = c; j < cols; ++j) M[r][j] = mul_mod(M[r][j], inv, p);
        for (int i = 0; i < rows; ++i) {
            if (i == r || M[i][c] == 0) continue;
            const int f = M[i][c];
            for (int j = c; j < cols; ++j)
                M[i][j] = sub_mod(M[i][j], mul_mod(f, M[r][j], p), p);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Nonnegative part of alpha * h2 where alpha = sum b_r T^{-r}:
// coeff of T^s is sum_j h2[j] * b_{j-s}, j - s >= 1.
static FqPoly nonneg_part(const LaurentTail& b, const FqPoly& h2) {
    const int p = b.p;
    FqPoly out(p);
    if (h2.deg() < 1) return out;
    out.c.assign(static_cast<std::size_t>(h2.deg()), 0);
    for (int s = 0; s < h2.deg(); ++s) {
        long long acc = 0;
        for (int j = s + 1; j <= h2.deg(); ++j)
            acc += static_cast<long long>(h2.coeff(j)) * b.b[j - s - 1];
        out.c[s] = normalize(acc, p);
    }
    trim(out.c);
    return out;
}

// Strip common factors and normalize h2 monic; (0, h2) collapses to (0, 1).
static RationalApprox canonicalize(const FqPoly& h1_raw, const FqPoly& h2_raw) {
    const int p = h2_raw.p;
    FqPoly h1 = h1_raw, h2 = h2_raw;
    if (h1.is_zero()) {
        return {0, FqPoly::zero(p), FqPoly::constant(p, 1)};
    }
    FqPoly g = poly_gcd(h1, h2);
    if (g.deg() > 0) {
        h1 = divmod(h1, g).first;
        h2 = divmod(h2, g).first;
    }
    const int inv = inv_mod(h2.lead(), p);
    h2 = scale(h2, inv);
    h1 = scale(h1, inv);
    return {h2.deg(), h1, h2};
}

std::optional<RationalApprox> rational_reconstruct(const LaurentTail& b, int m) {
    const int kd = b.kd(), p = b.p;
    if (m < 0 || 2 * m > kd)
        throw DomainError("rational_reconstruct: level m must satisfy 0 <= m <= kd/2");
    // (kd-m) x (m+1) Hankel matrix M_ij = b_{i+j-1}.
    std::vector<std::vector<int>> M(static_cast<std::size_t>(kd - m),
                                    std::vector<int>(static_cast<std::size_t>(m + 1), 0));
    for (int i = 0; i < kd - m; ++i)
        for (int j = 0; j <= m; ++j) M[i][j] = b.b[i + j];
    std::vector<int> pivots = rref(M, p);
    if (static_cast<int>(pivots.size()) == m + 1) return std::nullopt;  // full column rank: off A_m
    // Kernel vector for the LAST free column f: x_f = 1, x_{pivot_r} = -M[r][f].
    // Its top nonzero coordinate has the highest index among the kernel basis,
    // giving the maximal-degree h2 before the gcd strip.
    int f = -1;
    {
        std::vector<bool> is_pivot(static_cast<std::size_t>(m + 1), false);
        for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
        for (int c = m; c >= 0; --c)
            if (!is_pivot[static_cast<std::size_t>(c)]) { f = c; break; }
    }
    std::vector<int> v(static_cast<std::size_t>(m + 1), 0);
    v[static_cast<std::size_t>(f)] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
        v[static_cast<std::size_t>(pivots[r])] = normalize(-M[r][static_cast<std::size_t>(f)], p);
    FqPoly h2_raw(p, v);
    FqPoly h1_raw = nonneg_part(b, h2_raw);
    return canonicalize(h1_raw, h2_raw);
}

std::optional<RationalApprox> xgcd_reconstruct(const LaurentTail& b, int m) {
    const int kd = b.kd(), p = b.p;
    if (m < 0 || 2 * m > kd)
        throw DomainError("xgcd_reconstruct: level m must satisfy 0 <= m <= kd/2");
    if (b.is_zero()) return RationalApprox{0, FqPoly::zero(p), FqPoly::constant(p, 1)};
    // B(T) = sum_r b_r T^{kd-r}; seek the first Euclid remainder of
    // (T^kd, B) with degree <= m-1: r = s*T^kd + t*B gives the pair
    // (h1, h2) = (-s, t) with h2*B - h1*T^kd of degree <= m-1.
    FqPoly B(p);
    {
        std::vector<int> c(static_cast<std::size_t>(kd), 0);
        for (int r = 1; r <= kd; ++r) c[kd - r] = b.b[r - 1];
        B = FqPoly(p, c);
    }
    FqPoly Tkd(p);
    {
        std::vector<int> c(static_cast<std::size_t>(kd + 1), 0);
        c[static_cast<std::size_t>(kd)] = 1;
        Tkd = FqPoly(p, c);
    }
    FqPoly r_prev = Tkd, r_cur = B;
    FqPoly s_prev = FqPoly::constant(p, 1), s_cur = FqPoly::zero(p);
    FqPoly t_prev = FqPoly::zero(p), t_cur = FqPoly::constant(p, 1);
    while (r_cur.deg() >= m) {
        auto [q, rem] = divmod(r_prev, r_cur);
        FqPoly s_next = s_prev - q * s_cur;
        FqPoly t_next = t_prev - q * t_cur;
        r_prev = r_cur; r_cur = rem;
        s_prev = s_cur; s_cur = s_next;
        t_prev = t_cur; t_cur = t_next;
    }
    if (t_cur.deg() > m) return std::nullopt;  // no degree-<=m approximant: off A_m
    FqPoly h2 = t_cur, h1 = scale(s_cur, -1);
    const int inv = inv_mod(h2.lead(), p);
    return canonicalize(scale(h1, inv), scale(h2, inv));
}

}  // namespace arclab::poly
