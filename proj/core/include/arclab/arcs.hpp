#pragma once
// Major-arc stratification of F_p^{kd}: Hankel rank, arc levels, U_m chart
// membership, and exhaustive per-level census.

#include <cstdint>
#include <optional>
#include <vector>

#include "arclab/poly.hpp"

namespace arclab::arcs {

// Rank over F_p of the (kd-m) x (m+1) matrix M_ij = b_{i+j-1}, 0 <= m <= kd.
int hankel_rank(const poly::LaurentTail& b, int m);

// Minimal m with hankel_rank(b, m) <= m; always <= ceil(kd/2).
int arc_level(const poly::LaurentTail& b);

// Exact rational chart of a tail on the open stratum U_m.
struct UmChart {
    poly::FqPoly h1;
    poly::FqPoly h2;  // monic, deg h2 = m, gcd(h1,h2) = 1
    bool operator==(const UmChart& o) const = default;
};

// Returns the chart iff the minimal reconstruction at m = arc_level(b) is
// exact at that level (alpha = h1/h2 + O(T^{-kd-1})); empty otherwise.
// Levels above kd/2 have no canonical chart and yield empty.
std::optional<UmChart> in_Um(const poly::LaurentTail& b);

struct StratumRow {
    int m = 0;
    std::int64_t card_stratum = 0;  // #(A_m - A_{m-1})
    std::int64_t card_Um = 0;       // #U_m (0 for m > kd/2: never charted)
};

struct StrataTable {
    int p = 0, kd = 0;
    std::vector<StratumRow> rows;
    std::int64_t total() const;
};

// Exhaustive census of all p^kd tails. Guard: p^kd <= max_enum.
StrataTable enumerate_strata(int p, int kd, std::uint64_t max_enum = 100000000ULL,
                             unsigned threads = 1);

// Mixed-radix decoding: index -> (b_1..b_kd), b_1 least significant.
poly::LaurentTail tail_from_index(int p, int kd, std::uint64_t idx);

}  // namespace arclab::arcs
