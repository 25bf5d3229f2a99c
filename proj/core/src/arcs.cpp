#include "arclab/arcs.hpp"

#include <cmath>

#include "arclab/parallel.hpp"

namespace arclab::arcs {

using poly::FqPoly;
using poly::LaurentTail;

int hankel_rank(const LaurentTail& b, int m) {
    const int kd = b.kd(), p = b.p;
    if (m < 0 || m > kd) throw DomainError("hankel_rank: need 0 <= m <= kd");
    const int rows = kd - m, cols = m + 1;
    if (rows <= 0) return 0;
    std::vector<std::vector<int>> M(static_cast<std::size_t>(rows),
                                    std::vector<int>(static_cast<std::size_t>(cols)));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M[i][j] = b.b[i + j];
    // Plain Gaussian elimination; sizes are tiny.
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int i = rank; i < rows; ++i)
            if (M[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(M[rank], M[piv]);
        const int inv = ff::inv_mod(M[rank][c], p);
        for (int j = c; j < cols; ++j) M[rank][j] = ff::mul_mod(M[rank][j], inv, p);
        for (int i = rank + 1; i < rows; ++i) {
            if (M[i][c] == 0) continue;
            const int f = M[i][c];
            for (int j = c; j < cols; ++j)
                M[i][j] = ff::sub_mod(M[i][j], ff::mul_mod(f, M[rank][j], p), p);
        }
        ++rank;
    }
    return rank;
}

int arc_level(const LaurentTail& b) {
    // Upward scan; the level never exceeds ceil(kd/2) because for m >= kd/2
    // the matrix has at most m rows.
    for (int m = 0; m <= b.kd(); ++m)
        if (hankel_rank(b, m) <= m) return m;
    return b.kd();  // unreachable
}

std::optional<UmChart> in_Um(const LaurentTail& b) {
    const int kd = b.kd();
    const int m = arc_level(b);
    if (2 * m > kd) return std::nullopt;  // no canonical chart at/above the midpoint
    auto rec = poly::rational_reconstruct(b, m);
    if (!rec || rec->m_prime != m) return std::nullopt;
    return UmChart{rec->h1, rec->h2};
}

poly::LaurentTail tail_from_index(int p, int kd, std::uint64_t idx) {
    std::vector<int> b(static_cast<std::size_t>(kd));
    for (int r = 0; r < kd; ++r) {
        b[r] = static_cast<int>(idx % static_cast<std::uint64_t>(p));
        idx /= static_cast<std::uint64_t>(p);
    }
    return poly::LaurentTail(p, std::move(b));
}

std::int64_t StrataTable::total() const {
    std::int64_t s = 0;
    for (const auto& r : rows) s += r.card_stratum;
    return s;
}

StrataTable enumerate_strata(int p, int kd, std::uint64_t max_enum, unsigned threads) {
    ff::PrimeField field(p);
    double sz = std::pow(static_cast<double>(p), kd);
    if (sz > static_cast<double>(max_enum))
        throw GuardError("enumerate_strata: p^kd exceeds the enumeration guard");
    std::uint64_t total = 1;
    for (int i = 0; i < kd; ++i) total *= static_cast<std::uint64_t>(p);

    const int max_level = (kd + 1) / 2;
    // Per-level tallies: strata cardinalities and empirical U_m membership
    // (the p^{2m} - p^{2m-1} chart-count formula is checked against the
    // latter by the tests, not assumed here).
    using Cnt = std::vector<std::int64_t>;
    Cnt zero(static_cast<std::size_t>(2 * (max_level + 1)), 0);
    auto body = [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
        Cnt local = zero;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            poly::LaurentTail b = tail_from_index(p, kd, idx);
            const int m = arc_level(b);
            ++local[static_cast<std::size_t>(m)];
            if (2 * m <= kd && in_Um(b))
                ++local[static_cast<std::size_t>(max_level + 1 + m)];
        }
        return local;
    };
    auto fold = [](Cnt acc, const Cnt& x) {
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += x[i];
        return acc;
    };
    Cnt tallies = parallel_blocks<Cnt>(total, threads, zero, body, fold);

    StrataTable table;
    table.p = p;
    table.kd = kd;
    for (int m = 0; m <= max_level; ++m) {
        StratumRow row;
        row.m = m;
        row.card_stratum = tallies[static_cast<std::size_t>(m)];
        row.card_Um = tallies[static_cast<std::size_t>(max_level + 1 + m)];
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace arclab::arcs
