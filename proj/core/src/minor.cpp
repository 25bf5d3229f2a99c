#include "arclab/minor.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

#include "arclab/arcs.hpp"
#include "arclab/ff.hpp"
#include "arclab/gfq.hpp"
#include "arclab/parallel.hpp"

namespace arclab::minor {

namespace {

int factorial_mod(int v, int p) {
    int r = 1;
    for (int t = 2; t <= v; ++t) r = ff::mul_mod(r, t % p, p);
    return r;
}

long long ipow(long long b, int e) {
    long long r = 1;
    for (int t = 0; t < e; ++t) r *= b;
    return r;
}

// Rank of a small matrix over F_p by Gaussian elimination (rows destroyed).
int rank_mod_p(std::vector<std::vector<int>>& mat, int p) {
    const int rows = static_cast<int>(mat.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(mat[0].size());
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (mat[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(mat[rank], mat[pivot]);
        const int inv = ff::inv_mod(mat[rank][col], p);
        for (int r = rank + 1; r < rows; ++r) {
            if (mat[r][col] == 0) continue;
            const int f = ff::mul_mod(mat[r][col], inv, p);
            for (int cc = col; cc < cols; ++cc)
                mat[r][cc] = ff::sub_mod(mat[r][cc], ff::mul_mod(f, mat[rank][cc], p), p);
        }
        ++rank;
    }
    return rank;
}

// Rank over an arbitrary small field (BaseField / QuadField).
template <typename Field>
int rank_field(const Field& F, std::vector<std::vector<typename Field::Elt>>& mat) {
    const int rows = static_cast<int>(mat.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(mat[0].size());
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (!F.is_zero(mat[r][col])) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(mat[rank], mat[pivot]);
        const auto inv = F.inv(mat[rank][col]);
        for (int r = rank + 1; r < rows; ++r) {
            if (F.is_zero(mat[r][col])) continue;
            const auto f = F.mul(mat[r][col], inv);
            for (int cc = col; cc < cols; ++cc)
                mat[r][cc] = F.sub(mat[r][cc], F.mul(f, mat[rank][cc]));
        }
        ++rank;
    }
    return rank;
}

void check_guard_pow(int p, int e, std::uint64_t max_enum, const char* what) {
    double size = 1.0;
    for (int t = 0; t < e; ++t) {
        size *= p;
        if (size > static_cast<double>(max_enum)) throw GuardError(what);
    }
}

}  // namespace

SymForm make_sym_form(int p, int k, int n, const std::vector<expsum::Monomial>& terms) {
    ff::PrimeField{p};  // validates the modulus
    if (k < 2) throw DomainError("make_sym_form: need k >= 2");
    if (p <= k) throw DomainError("make_sym_form: need p > k so k! is invertible");
    if (n < 1) throw DomainError("make_sym_form: need n >= 1");

    std::map<std::vector<int>, long long> merged;
    for (const auto& mono : terms) {
        if (static_cast<int>(mono.exps.size()) != n)
            throw DomainError("make_sym_form: monomial arity mismatch");
        int total = 0;
        for (int e : mono.exps) {
            if (e < 0) throw DomainError("make_sym_form: negative exponent");
            total += e;
        }
        if (total != k) throw DomainError("make_sym_form: monomial degree must be exactly k");
        merged[mono.exps] += mono.coeff;
    }

    SymForm out;
    out.p = p;
    out.k = k;
    out.n = n;
    const int inv_kfact = ff::inv_mod(factorial_mod(k, p), p);
    for (const auto& [exps, coeff] : merged) {
        const int a = ff::normalize(coeff, p);
        if (a == 0) continue;
        int fac = 1;
        std::vector<int> key;
        key.reserve(static_cast<std::size_t>(k));
        for (int j = 0; j < n; ++j) {
            fac = ff::mul_mod(fac, factorial_mod(exps[static_cast<std::size_t>(j)], p), p);
            for (int t = 0; t < exps[static_cast<std::size_t>(j)]; ++t) key.push_back(j);
        }
        const int val = ff::mul_mod(ff::mul_mod(a, fac, p), inv_kfact, p);
        if (val != 0) out.c[key] = val;
    }
    return out;
}

SymForm sym_form(const expsum::MorInstance& inst) {
    return make_sym_form(inst.p, inst.k, inst.n, inst.f0);
}

PsiForms psi_forms(const SymForm& f0) {
    const int p = f0.p, k = f0.k, n = f0.n;
    if (p <= k) throw DomainError("psi_forms: need p > k");
    double tensor_size = 1.0;
    for (int t = 0; t < k - 1; ++t) tensor_size *= n;
    if (tensor_size > 1e6) throw GuardError("psi_forms: tensor too large");
    const std::size_t flat_total = static_cast<std::size_t>(tensor_size);

    PsiForms out;
    out.p = p;
    out.k = k;
    out.n = n;
    out.t.assign(static_cast<std::size_t>(n), std::vector<int>(flat_total, 0));
    const int kfact = factorial_mod(k, p);
    std::vector<int> key(static_cast<std::size_t>(k));
    for (std::size_t flat = 0; flat < flat_total; ++flat) {
        std::size_t rem = flat;
        for (int l = 0; l < k - 1; ++l) {
            key[static_cast<std::size_t>(l)] = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
        }
        for (int j = 0; j < n; ++j) {
            key[static_cast<std::size_t>(k - 1)] = j;
            std::vector<int> sorted = key;
            std::sort(sorted.begin(), sorted.end());
            const auto it = f0.c.find(sorted);
            if (it != f0.c.end()) out.t[static_cast<std::size_t>(j)][flat] = ff::mul_mod(kfact, it->second, p);
        }
    }
    return out;
}

long long count_system(const SymForm& f0, const poly::LaurentTail& b, int d,
                       std::uint64_t max_enum, unsigned threads) {
    const int p = f0.p, k = f0.k, n = f0.n;
    if (d < 1) throw DomainError("count_system: need d >= 1");
    if (b.p != p || b.kd() != k * d) throw DomainError("count_system: tail shape mismatch");
    check_guard_pow(p, (k - 1) * n * d, max_enum, "count_system: p^((k-1)nd) exceeds guard");

    const PsiForms psi = psi_forms(f0);
    const int D = n * d;                                  // block dimension
    const int rest_total = static_cast<int>(ipow(n, k - 2));   // ordered (k-2)-tuples of indices
    const int deg_total = static_cast<int>(ipow(d, k - 2));    // their degree tuples
    const long long stride = static_cast<long long>(ipow(n, k - 2));  // unknown slot offset
    const std::uint64_t y_total = static_cast<std::uint64_t>(ipow(p, (k - 2) * n * d));
    std::vector<long long> ppow(static_cast<std::size_t>(D) + 1, 1);
    for (int e = 1; e <= D; ++e) ppow[static_cast<std::size_t>(e)] = ppow[static_cast<std::size_t>(e - 1)] * p;

    auto body = [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) -> long long {
        long long acc = 0;
        std::vector<int> y(static_cast<std::size_t>((k - 2) * D));
        std::vector<int> jd(static_cast<std::size_t>(std::max(k - 2, 1)));
        std::vector<int> id(static_cast<std::size_t>(std::max(k - 2, 1)));
        std::vector<std::vector<int>> L(static_cast<std::size_t>(D), std::vector<int>(static_cast<std::size_t>(D)));
        for (std::uint64_t yidx = lo; yidx < hi; ++yidx) {
            std::uint64_t rem = yidx;
            for (auto& digit : y) {
                digit = static_cast<int>(rem % static_cast<std::uint64_t>(p));
                rem /= static_cast<std::uint64_t>(p);
            }
            for (auto& row : L) std::fill(row.begin(), row.end(), 0);
            for (int rest = 0; rest < rest_total; ++rest) {
                int rr = rest;
                for (int l = 0; l < k - 2; ++l) {
                    jd[static_cast<std::size_t>(l)] = rr % n;
                    rr /= n;
                }
                for (int degs = 0; degs < deg_total; ++degs) {
                    int dr = degs, si = 0, w = 1;
                    for (int l = 0; l < k - 2 && w != 0; ++l) {
                        id[static_cast<std::size_t>(l)] = dr % d;
                        dr /= d;
                        si += id[static_cast<std::size_t>(l)];
                        w = ff::mul_mod(w, y[static_cast<std::size_t>(l * D + jd[static_cast<std::size_t>(l)] * d + id[static_cast<std::size_t>(l)])], p);
                    }
                    if (w == 0) continue;
                    for (int jp = 0; jp < n; ++jp) {
                        const std::size_t flat = static_cast<std::size_t>(rest + jp * stride);
                        for (int j = 0; j < n; ++j) {
                            const int cc = psi.t[static_cast<std::size_t>(j)][flat];
                            if (cc == 0) continue;
                            const int wcc = ff::mul_mod(w, cc, p);
                            for (int ip = 0; ip < d; ++ip)
                                for (int i = 0; i < d; ++i) {
                                    const int bt = b.b[static_cast<std::size_t>(si + ip + i)];
                                    if (bt == 0) continue;
                                    auto& cell = L[static_cast<std::size_t>(j * d + i)][static_cast<std::size_t>(jp * d + ip)];
                                    cell = ff::add_mod(cell, ff::mul_mod(wcc, bt, p), p);
                                }
                        }
                    }
                }
            }
            auto work = L;
            acc += ppow[static_cast<std::size_t>(D - rank_mod_p(work, p))];
        }
        return acc;
    };
    return parallel_blocks<long long>(y_total, threads, 0, body,
                                      [](long long a, long long r) { return a + r; });
}

long long count_Nalpha(const SymForm& f0, const poly::LaurentTail& b, int d,
                       std::uint64_t max_enum, unsigned threads) {
    const int p = f0.p, k = f0.k, n = f0.n;
    if (d < 1) throw DomainError("count_Nalpha: need d >= 1");
    if (b.p != p || b.kd() != k * d) throw DomainError("count_Nalpha: tail shape mismatch");
    check_guard_pow(p, (k - 1) * n * d, max_enum, "count_Nalpha: p^((k-1)nd) exceeds guard");

    const PsiForms psi = psi_forms(f0);
    const int D = n * d;
    const int psi_deg = (k - 1) * (d - 1) + 1;  // coefficient count of Psi_j(u)
    const std::size_t flat_total = psi.t[0].size();
    const std::uint64_t total = static_cast<std::uint64_t>(ipow(p, (k - 1) * n * d));

    auto body = [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) -> long long {
        long long acc = 0;
        std::vector<int> u(static_cast<std::size_t>((k - 1) * D));
        std::vector<std::vector<int>> psival(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(psi_deg)));
        std::vector<int> prod, next;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            std::uint64_t rem = idx;
            for (auto& digit : u) {
                digit = static_cast<int>(rem % static_cast<std::uint64_t>(p));
                rem /= static_cast<std::uint64_t>(p);
            }
            for (auto& row : psival) std::fill(row.begin(), row.end(), 0);
            for (std::size_t flat = 0; flat < flat_total; ++flat) {
                std::size_t rr = flat;
                // prod = product over slots of the chosen component polynomial
                prod.assign(1, 1);
                bool zero = false;
                for (int l = 0; l < k - 1 && !zero; ++l) {
                    const int jl = static_cast<int>(rr % static_cast<std::size_t>(n));
                    rr /= static_cast<std::size_t>(n);
                    const int* comp = &u[static_cast<std::size_t>(l * D + jl * d)];
                    next.assign(prod.size() + static_cast<std::size_t>(d) - 1, 0);
                    for (std::size_t s = 0; s < prod.size(); ++s) {
                        if (prod[s] == 0) continue;
                        for (int t = 0; t < d; ++t)
                            next[s + static_cast<std::size_t>(t)] =
                                ff::add_mod(next[s + static_cast<std::size_t>(t)], ff::mul_mod(prod[s], comp[t], p), p);
                    }
                    prod.swap(next);
                    zero = std::all_of(prod.begin(), prod.end(), [](int v) { return v == 0; });
                }
                if (zero) continue;
                for (int j = 0; j < n; ++j) {
                    const int cc = psi.t[static_cast<std::size_t>(j)][flat];
                    if (cc == 0) continue;
                    for (std::size_t s = 0; s < prod.size(); ++s)
                        psival[static_cast<std::size_t>(j)][s] =
                            ff::add_mod(psival[static_cast<std::size_t>(j)][s], ff::mul_mod(cc, prod[s], p), p);
                }
            }
            bool ok = true;
            for (int r = 1; r <= d && ok; ++r)
                for (int j = 0; j < n && ok; ++j) {
                    int win = 0;
                    for (int s = 0; s < psi_deg; ++s)
                        win = ff::add_mod(win, ff::mul_mod(psival[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)],
                                                           b.b[static_cast<std::size_t>(r + s - 1)], p), p);
                    ok = (win == 0);
                }
            if (ok) ++acc;
        }
        return acc;
    };
    return parallel_blocks<long long>(total, threads, 0, body,
                                      [](long long a, long long r) { return a + r; });
}

namespace {

// #V over one field: fix the first k-2 argument blocks, then the conditions
// on the last block are linear; add q^{n - rank} per configuration.
template <typename Field>
long long vg_count_impl(const Field& F, const PsiForms& psi, std::uint64_t max_enum) {
    const int n = psi.n, k = psi.k;
    const std::uint64_t q = F.size();
    double size = 1.0;
    for (int t = 0; t < n * (k - 1); ++t) {
        size *= static_cast<double>(q);
        if (size > static_cast<double>(max_enum)) throw GuardError("vg_count: q^{n(k-1)} exceeds guard");
    }
    std::uint64_t outer = 1;
    for (int t = 0; t < n * (k - 2); ++t) outer *= q;
    const long long stride = ipow(n, k - 2);

    std::vector<std::vector<typename Field::Elt>> tf(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        tf[static_cast<std::size_t>(j)].reserve(psi.t[static_cast<std::size_t>(j)].size());
        for (int v : psi.t[static_cast<std::size_t>(j)]) tf[static_cast<std::size_t>(j)].push_back(F.from_base(v));
    }

    long long count = 0;
    std::vector<typename Field::Elt> y(static_cast<std::size_t>(std::max((k - 2) * n, 1)));
    std::vector<std::vector<typename Field::Elt>> M(static_cast<std::size_t>(n),
                                                    std::vector<typename Field::Elt>(static_cast<std::size_t>(n)));
    for (std::uint64_t yidx = 0; yidx < outer; ++yidx) {
        std::uint64_t rem = yidx;
        for (int t = 0; t < (k - 2) * n; ++t) {
            y[static_cast<std::size_t>(t)] = F.elt_at(rem % q);
            rem /= q;
        }
        for (auto& row : M) std::fill(row.begin(), row.end(), F.zero());
        for (long long rest = 0; rest < stride; ++rest) {
            long long rr = rest;
            auto w = F.one();
            bool zero = false;
            for (int l = 0; l < k - 2 && !zero; ++l) {
                const int jl = static_cast<int>(rr % n);
                rr /= n;
                w = F.mul(w, y[static_cast<std::size_t>(l * n + jl)]);
                zero = F.is_zero(w);
            }
            if (zero) continue;
            for (int jp = 0; jp < n; ++jp) {
                const std::size_t flat = static_cast<std::size_t>(rest + jp * stride);
                for (int j = 0; j < n; ++j) {
                    const auto& cc = tf[static_cast<std::size_t>(j)][flat];
                    if (F.is_zero(cc)) continue;
                    M[static_cast<std::size_t>(j)][static_cast<std::size_t>(jp)] =
                        F.add(M[static_cast<std::size_t>(j)][static_cast<std::size_t>(jp)], F.mul(w, cc));
                }
            }
        }
        auto work = M;
        const int rank = rank_field(F, work);
        long long cells = 1;
        for (int t = 0; t < n - rank; ++t) cells *= static_cast<long long>(q);
        count += cells;
    }
    return count;
}

}  // namespace

long long vg_count(const SymForm& g0, int r, std::uint64_t max_enum) {
    const PsiForms psi = psi_forms(g0);
    if (r == 1) {
        gfq::BaseField F(g0.p);
        return vg_count_impl(F, psi, max_enum);
    }
    if (r == 2) {
        gfq::QuadField F(g0.p);
        return vg_count_impl(F, psi, max_enum);
    }
    throw DomainError("vg_count: only F_p and F_{p^2} are supported");
}

WeylReport weyl_check(int p, int nvars, int k, const std::vector<expsum::Monomial>& terms,
                      std::uint64_t max_enum) {
    ff::PrimeField{p};  // validates the modulus
    if (k < 2 || p <= k) throw DomainError("weyl_check: need k >= 2 and p > k");
    if (nvars < 1) throw DomainError("weyl_check: need at least one variable");
    std::map<std::vector<int>, long long> merged;
    for (const auto& mono : terms) {
        if (static_cast<int>(mono.exps.size()) != nvars) throw DomainError("weyl_check: monomial arity mismatch");
        int total = 0;
        for (int e : mono.exps) {
            if (e < 0) throw DomainError("weyl_check: negative exponent");
            total += e;
        }
        if (total > k) throw DomainError("weyl_check: monomial degree above k");
        merged[mono.exps] += mono.coeff;
    }
    std::vector<expsum::Monomial> leading, clean;
    for (const auto& [exps, coeff] : merged) {
        const int a = ff::normalize(coeff, p);
        if (a == 0) continue;
        int total = 0;
        for (int e : exps) total += e;
        clean.push_back({exps, a});
        if (total == k) leading.push_back({exps, a});
    }
    // The zero polynomial is the trivial equality case; any other G must
    // have degree exactly k.
    if (leading.empty() && !clean.empty())
        throw DomainError("weyl_check: leading form vanishes; degree must be exactly k");
    check_guard_pow(p, nvars, max_enum, "weyl_check: p^N exceeds guard");

    // Exact value distribution of G over F_p^N.
    ff::CountVector cv(p);
    {
        const std::uint64_t total = static_cast<std::uint64_t>(ipow(p, nvars));
        std::vector<int> x(static_cast<std::size_t>(nvars));
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::uint64_t rem = idx;
            for (auto& xi : x) {
                xi = static_cast<int>(rem % static_cast<std::uint64_t>(p));
                rem /= static_cast<std::uint64_t>(p);
            }
            int val = 0;
            for (const auto& mono : clean) {
                int term = static_cast<int>(mono.coeff);
                for (int j = 0; j < nvars; ++j)
                    for (int e = 0; e < mono.exps[static_cast<std::size_t>(j)]; ++e)
                        term = ff::mul_mod(term, x[static_cast<std::size_t>(j)], p);
                val = ff::add_mod(val, term, p);
            }
            ++cv.counts[static_cast<std::size_t>(val)];
        }
    }

    WeylReport rep;
    rep.s_abs = std::abs(ff::charsum_eval(cv, 1));
    ff::CountVector cvneg(p);
    for (int t = 0; t < p; ++t) cvneg.counts[static_cast<std::size_t>((p - t) % p)] = cv.counts[static_cast<std::size_t>(t)];
    rep.s_neg_abs = std::abs(ff::charsum_eval(cvneg, 1));
    rep.s_sq = rep.s_abs * rep.s_abs;

    // Differenced phase sum over 2N variables, via the autocorrelation of cv.
    std::vector<long long> corr(static_cast<std::size_t>(p), 0);
    for (int s = 0; s < p; ++s)
        for (int t = 0; t < p; ++t)
            corr[static_cast<std::size_t>(ff::sub_mod(s, t, p))] += cv.counts[static_cast<std::size_t>(s)] * cv.counts[static_cast<std::size_t>(t)];
    std::complex<double> diff(0.0, 0.0);
    for (int t = 0; t < p; ++t) {
        const double ang = 2.0 * std::numbers::pi * t / p;
        diff += static_cast<double>(corr[static_cast<std::size_t>(t)]) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    rep.diff_sum = diff.real();

    rep.vg = vg_count(make_sym_form(p, k, nvars, leading), 1, max_enum);
    const int two_pow = 1 << (k - 1);
    rep.lhs = std::pow(rep.s_abs, two_pow);
    rep.rhs = std::pow(static_cast<double>(p), nvars * (two_pow - (k - 1))) * static_cast<double>(rep.vg);
    rep.conj_ok = std::abs(rep.s_abs - rep.s_neg_abs) <= 1e-6 * std::max(1.0, rep.s_abs);
    rep.shear_ok = std::abs(rep.s_sq - rep.diff_sum) <= 1e-6 * std::max(1.0, rep.s_sq) &&
                   std::abs(diff.imag()) <= 1e-6 * std::max(1.0, rep.s_sq);
    rep.weyl_ok = rep.lhs <= rep.rhs * (1.0 + 1e-9) + 1e-9;
    return rep;
}

LaurentMat make_laurent_mat(int p, int n, int prec, std::vector<std::vector<int>> entries) {
    ff::PrimeField{p};  // validates the modulus
    if (n < 1 || prec < 0) throw DomainError("make_laurent_mat: need n >= 1 and prec >= 0");
    if (static_cast<int>(entries.size()) != n * n) throw DomainError("make_laurent_mat: need n*n entries");
    for (auto& e : entries) {
        if (static_cast<int>(e.size()) != prec) throw DomainError("make_laurent_mat: entry length != prec");
        for (auto& v : e) v = ff::normalize(v, p);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (entries[static_cast<std::size_t>(i * n + j)] != entries[static_cast<std::size_t>(j * n + i)])
                throw DomainError("make_laurent_mat: matrix must be symmetric");
    LaurentMat out;
    out.p = p;
    out.n = n;
    out.prec = prec;
    out.g = std::move(entries);
    return out;
}

namespace {

int row_degree(const std::vector<poly::FqPoly>& row) {
    int deg = -1;
    for (const auto& e : row) deg = std::max(deg, e.deg());
    return deg;
}

int pivot_col(const std::vector<poly::FqPoly>& row, int deg) {
    for (int j = static_cast<int>(row.size()) - 1; j >= 0; --j)
        if (row[static_cast<std::size_t>(j)].deg() == deg) return j;
    return -1;
}

// t^shift * s * a
poly::FqPoly shift_scale(const poly::FqPoly& a, int shift, int s) {
    if (a.is_zero() || s == 0) return poly::FqPoly(a.p);
    std::vector<int> c(static_cast<std::size_t>(shift), 0);
    for (int v : a.c) c.push_back(ff::mul_mod(v, s, a.p));
    return poly::FqPoly(a.p, std::move(c));
}

// Weak Popov form: repeat simple transformations until all rows have
// distinct pivot (rightmost maximal-degree) columns.
void weak_popov(std::vector<std::vector<poly::FqPoly>>& rows, int p) {
    const int nrows = static_cast<int>(rows.size());
    for (long long guard = 0;; ++guard) {
        if (guard > 1000000) throw std::logic_error("weak_popov: no convergence");
        int r1 = -1, r2 = -1;
        std::vector<int> owner(rows[0].size(), -1);
        for (int r = 0; r < nrows; ++r) {
            const int deg = row_degree(rows[static_cast<std::size_t>(r)]);
            if (deg < 0) throw std::logic_error("weak_popov: zero row in a nonsingular basis");
            const int piv = pivot_col(rows[static_cast<std::size_t>(r)], deg);
            if (owner[static_cast<std::size_t>(piv)] < 0) {
                owner[static_cast<std::size_t>(piv)] = r;
            } else {
                r1 = r;
                r2 = owner[static_cast<std::size_t>(piv)];
                break;
            }
        }
        if (r1 < 0) return;
        int d1 = row_degree(rows[static_cast<std::size_t>(r1)]);
        int d2 = row_degree(rows[static_cast<std::size_t>(r2)]);
        if (d1 < d2) {
            std::swap(r1, r2);
            std::swap(d1, d2);
        }
        const int piv = pivot_col(rows[static_cast<std::size_t>(r2)], d2);
        const int lc1 = rows[static_cast<std::size_t>(r1)][static_cast<std::size_t>(piv)].lead();
        const int lc2 = rows[static_cast<std::size_t>(r2)][static_cast<std::size_t>(piv)].lead();
        const int f = ff::mul_mod(lc1, ff::inv_mod(lc2, p), p);
        for (std::size_t j = 0; j < rows[static_cast<std::size_t>(r1)].size(); ++j)
            rows[static_cast<std::size_t>(r1)][j] =
                rows[static_cast<std::size_t>(r1)][j] - shift_scale(rows[static_cast<std::size_t>(r2)][j], d1 - d2, f);
    }
}

// Truncated polynomial part of t^{a+c} gamma_{ij}.
poly::FqPoly window_poly(const LaurentMat& gamma, int i, int j, int ac) {
    std::vector<int> c(static_cast<std::size_t>(ac), 0);
    for (int r = 1; r <= std::min(gamma.prec, ac); ++r)
        c[static_cast<std::size_t>(ac - r)] = gamma.g[static_cast<std::size_t>(i * gamma.n + j)][static_cast<std::size_t>(r - 1)];
    return poly::FqPoly(gamma.p, std::move(c));
}

std::vector<int> minima_of(std::vector<std::vector<poly::FqPoly>>& rows, int p, int shift) {
    weak_popov(rows, p);
    std::vector<int> rho;
    rho.reserve(rows.size());
    for (const auto& row : rows) rho.push_back(row_degree(row) - shift);
    std::sort(rho.begin(), rho.end());
    return rho;
}

}  // namespace

LatticeReport lattice_minima(const LaurentMat& gamma, int a, int c) {
    if (a < 0 || c < 0) throw DomainError("lattice_minima: need a >= 0 and c >= 0");
    if (gamma.prec < a + c) throw DomainError("lattice_minima: precision below a + c");
    const int n = gamma.n, p = gamma.p, ac = a + c;
    std::vector<std::vector<poly::FqPoly>> rows(
        static_cast<std::size_t>(2 * n),
        std::vector<poly::FqPoly>(static_cast<std::size_t>(2 * n), poly::FqPoly(p)));
    std::vector<int> tac(static_cast<std::size_t>(ac) + 1, 0);
    tac.back() = 1;
    for (int i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = poly::FqPoly::constant(p, 1);
        for (int j = 0; j < n; ++j)
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + j)] = window_poly(gamma, i, j, ac);
        rows[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(n + i)] = poly::FqPoly(p, tac);
    }

    LatticeReport rep;
    rep.a = a;
    rep.c = c;
    rep.rho = minima_of(rows, p, a);
    long long exp = 0;
    for (int r : rep.rho) exp += std::max(0, -r);
    rep.lee = 1;
    for (long long t = 0; t < exp; ++t) {
        rep.lee *= p;
        if (rep.lee > 1000000000000000LL) throw GuardError("lattice_minima: Lee count overflow");
    }
    return rep;
}

std::vector<int> dual_minima(const LaurentMat& gamma, int a, int c) {
    if (a < 0 || c < 0) throw DomainError("dual_minima: need a >= 0 and c >= 0");
    if (gamma.prec < a + c) throw DomainError("dual_minima: precision below a + c");
    const int n = gamma.n, p = gamma.p, ac = a + c;
    std::vector<std::vector<poly::FqPoly>> rows(
        static_cast<std::size_t>(2 * n),
        std::vector<poly::FqPoly>(static_cast<std::size_t>(2 * n), poly::FqPoly(p)));
    std::vector<int> tac(static_cast<std::size_t>(ac) + 1, 0);
    tac.back() = 1;
    for (int i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = poly::FqPoly(p, tac);
        for (int j = 0; j < n; ++j)
            rows[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(j)] =
                scale(window_poly(gamma, i, j, ac), p - 1);  // minus the window block
        rows[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(n + i)] = poly::FqPoly::constant(p, 1);
    }
    return minima_of(rows, p, a);
}

long long lattice_brute_count(const LaurentMat& gamma, int a, int c, std::uint64_t max_enum) {
    if (c < 0) throw DomainError("lattice_brute_count: need c >= 0");
    if (a <= 0) return 1;  // only the zero vector has every degree < a
    if (c > 0 && gamma.prec < a + c - 1) throw DomainError("lattice_brute_count: precision below a + c - 1");
    const int n = gamma.n, p = gamma.p;
    check_guard_pow(p, n * a, max_enum, "lattice_brute_count: p^{na} exceeds guard");
    const std::uint64_t total = static_cast<std::uint64_t>(ipow(p, n * a));
    long long count = 0;
    std::vector<int> u(static_cast<std::size_t>(n * a));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rem = idx;
        for (auto& digit : u) {
            digit = static_cast<int>(rem % static_cast<std::uint64_t>(p));
            rem /= static_cast<std::uint64_t>(p);
        }
        bool ok = true;
        for (int j = 0; j < n && ok; ++j)
            for (int r = 1; r <= c && ok; ++r) {
                int acc = 0;
                for (int i = 0; i < n; ++i)
                    for (int s = 0; s < a; ++s) {
                        const int gcoef = gamma.g[static_cast<std::size_t>(j * n + i)][static_cast<std::size_t>(r + s - 1)];
                        if (gcoef)
                            acc = ff::add_mod(acc, ff::mul_mod(gcoef, u[static_cast<std::size_t>(i * a + s)], p), p);
                    }
                ok = (acc == 0);
            }
        if (ok) ++count;
    }
    return count;
}

ShrinkReport shrink_check(const LaurentMat& gamma, int a, int c, int s, std::uint64_t max_enum) {
    if (c <= 0) throw DomainError("shrink_check: need c > 0");
    if (s < 0) throw DomainError("shrink_check: need s >= 0");
    ShrinkReport rep;
    rep.n_ac = lattice_brute_count(gamma, a, c, max_enum);
    rep.n_shift = lattice_brute_count(gamma, a - s, c + s, max_enum);
    rep.ratio = static_cast<double>(rep.n_ac) / static_cast<double>(rep.n_shift);
    const int extra = a > c ? (a - c) / 2 : 0;
    rep.bound = std::pow(static_cast<double>(gamma.p), gamma.n * (s + extra));
    rep.pass = rep.ratio <= rep.bound * (1.0 + 1e-9);
    return rep;
}

MinorBoundReport minor_bound_check(const expsum::MorInstance& inst, int m, long long samples,
                                   std::uint64_t seed, std::uint64_t max_enum, unsigned threads) {
    const int p = inst.p, k = inst.k, n = inst.n, d = inst.d, kd = inst.kd();
    if (m < d || 2 * m > kd) throw DomainError("minor_bound_check: need d <= m <= kd/2");
    const SymForm f0 = sym_form(inst);

    MinorBoundReport rep;
    rep.m = m;
    rep.denom = std::pow(static_cast<double>(p), d * n * (k - 1) - n * (m / (k - 1)));

    // Everything sits at level <= ceil(kd/2); the complement of A_m is empty
    // once m reaches that, and the scan is vacuous.
    if (2 * m >= kd) return rep;

    std::vector<poly::LaurentTail> cands;
    if (samples > 0) {
        std::mt19937_64 rng(seed);
        for (long long t = 0; t < samples; ++t) {
            for (long long tries = 0;; ++tries) {
                if (tries > 1000000) throw GuardError("minor_bound_check: rejection sampling stalled");
                std::vector<int> bb(static_cast<std::size_t>(kd));
                for (auto& v : bb) v = static_cast<int>(rng() % static_cast<std::uint64_t>(p));
                poly::LaurentTail tail(p, std::move(bb));
                if (arcs::arc_level(tail) > m) {
                    cands.push_back(std::move(tail));
                    break;
                }
            }
        }
    } else {
        check_guard_pow(p, kd, max_enum, "minor_bound_check: p^{kd} exceeds guard");
        const std::uint64_t total = static_cast<std::uint64_t>(ipow(p, kd));
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            poly::LaurentTail tail = arcs::tail_from_index(p, kd, idx);
            // One representative per scaling class: leading nonzero entry 1
            // (N(alpha) is scaling-invariant: the equations scale together).
            int first = -1;
            for (int t = 0; t < kd; ++t)
                if (tail.b[static_cast<std::size_t>(t)] != 0) {
                    first = t;
                    break;
                }
            if (first < 0 || tail.b[static_cast<std::size_t>(first)] != 1) continue;
            if (arcs::arc_level(tail) > m) cands.push_back(std::move(tail));
        }
    }

    rep.tested = static_cast<long long>(cands.size());
    if (cands.empty()) return rep;
    std::vector<long long> counts(cands.size(), 0);
    parallel_blocks<int>(
        cands.size(), threads, 0,
        [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
            for (std::uint64_t t = lo; t < hi; ++t)
                counts[static_cast<std::size_t>(t)] = count_system(f0, cands[static_cast<std::size_t>(t)], d, max_enum, 1);
            return 0;
        },
        [](int acc, int) { return acc; });
    std::size_t best = 0;
    for (std::size_t t = 1; t < counts.size(); ++t)
        if (counts[t] > counts[best]) best = t;
    rep.max_count = counts[best];
    rep.argmax_b = cands[best].b;
    rep.max_ratio = static_cast<double>(rep.max_count) / rep.denom;
    return rep;
}

DimFitReport dimv_fit_report(const SymForm& f0, std::uint64_t max_enum) {
    DimFitReport rep;
    rep.n1 = vg_count(f0, 1, max_enum);
    rep.n2 = vg_count(f0, 2, max_enum);
    const double p = static_cast<double>(f0.p);
    rep.d_hat = std::max(0, static_cast<int>(std::llround(
                                std::log(static_cast<double>(rep.n2) / static_cast<double>(rep.n1)) / std::log(p))));
    rep.c1 = static_cast<double>(rep.n1) / std::pow(p, rep.d_hat);
    rep.c2 = static_cast<double>(rep.n2) / std::pow(p, 2.0 * rep.d_hat);
    rep.dim_ok = rep.d_hat <= (f0.k - 2) * f0.n;
    const double lo = std::min(rep.c1, rep.c2), hi = std::max(rep.c1, rep.c2);
    rep.langweil_ok = lo > 0 && hi / lo <= 2.0;
    return rep;
}

int dimv_fit(const SymForm& f0, std::uint64_t max_enum) { return dimv_fit_report(f0, max_enum).d_hat; }

}  // namespace arclab::minor
