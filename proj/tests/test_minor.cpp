#include <doctest.h>

#include <arclab/errors.hpp>
#include <arclab/expsum.hpp>
#include <arclab/minor.hpp>
#include <arclab/poly.hpp>

#include <map>
#include <random>
#include <vector>

using arclab::DomainError;
using arclab::GuardError;
using arclab::poly::LaurentTail;

namespace mn = arclab::minor;
namespace es = arclab::expsum;

namespace {

es::Monomial mono(std::vector<int> exps, long long coeff) { return {std::move(exps), coeff}; }

// x^3 + y^3 in two variables.
std::vector<es::Monomial> fermat2() { return {mono({3, 0}, 1), mono({0, 3}, 1)}; }

// The (p, k=3, n=2, d=2) instance x^3 + y^3 + 1 anchored at P = (1, p-1).
es::MorInstance fermat_d2(int p) {
    return es::make_instance(p, 3, 2, 2, {mono({3, 0}, 1), mono({0, 3}, 1), mono({0, 0}, 1)},
                             {1, p - 1});
}

LaurentTail random_tail(int p, int kd, std::mt19937_64& rng) {
    std::vector<int> b(static_cast<std::size_t>(kd));
    for (auto& v : b) v = static_cast<int>(rng() % static_cast<std::uint64_t>(p));
    return LaurentTail(p, std::move(b));
}

mn::LaurentMat random_sym_mat(int p, int n, int prec, std::mt19937_64& rng) {
    std::vector<std::vector<int>> g(static_cast<std::size_t>(n * n),
                                    std::vector<int>(static_cast<std::size_t>(prec)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            for (auto& v : g[static_cast<std::size_t>(i * n + j)])
                v = static_cast<int>(rng() % static_cast<std::uint64_t>(p));
            g[static_cast<std::size_t>(j * n + i)] = g[static_cast<std::size_t>(i * n + j)];
        }
    return mn::make_laurent_mat(p, n, prec, std::move(g));
}

}  // namespace

TEST_CASE("symmetric tensor: polarization coefficients") {
    // Diagonal form: c_{jjj} = coefficient itself.
    const auto f = mn::make_sym_form(7, 3, 2, fermat2());
    CHECK(f.c.at({0, 0, 0}) == 1);
    CHECK(f.c.at({1, 1, 1}) == 1);
    CHECK(f.c.size() == 2);

    // xyz: the all-distinct tuple carries 1/3! = inv(6).
    const auto g = mn::make_sym_form(7, 3, 3, {mono({1, 1, 1}, 1)});
    CHECK(g.c.at({0, 1, 2}) == 6);  // 6 = 1/6 mod 7
    CHECK(g.c.size() == 1);

    // x^2 y at k=3: prod e_j! = 2 -> c = 2/6 = 1/3 mod 7 = 5.
    const auto h = mn::make_sym_form(7, 3, 2, {mono({2, 1}, 1)});
    CHECK(h.c.at({0, 0, 1}) == 5);

    CHECK_THROWS_AS(mn::make_sym_form(3, 3, 2, fermat2()), DomainError);          // p <= k
    CHECK_THROWS_AS(mn::make_sym_form(7, 3, 2, {mono({2, 0}, 1)}), DomainError);  // degree != k
    CHECK_THROWS_AS(mn::make_sym_form(7, 3, 2, {mono({3, 0, 0}, 1)}), DomainError);  // arity
}

TEST_CASE("psi forms: worked examples") {
    // x^3 + y^3: Psi_j(h, h') = 6 h_j h'_j.
    const auto psi = mn::psi_forms(mn::make_sym_form(7, 3, 2, fermat2()));
    REQUIRE(psi.t.size() == 2);
    REQUIRE(psi.t[0].size() == 4);
    CHECK(psi.t[0][0] == 6);  // (j1,j2) = (0,0)
    CHECK(psi.t[0][1] == 0);
    CHECK(psi.t[0][2] == 0);
    CHECK(psi.t[0][3] == 0);
    CHECK(psi.t[1][3] == 6);  // (j1,j2) = (1,1)

    // xyz: Psi_1 = h_2 h'_3 + h_3 h'_2 (0-based: j=0 pairs (1,2) and (2,1)).
    const auto psix = mn::psi_forms(mn::make_sym_form(7, 3, 3, {mono({1, 1, 1}, 1)}));
    CHECK(psix.t[0][1 + 3 * 2] == 1);
    CHECK(psix.t[0][2 + 3 * 1] == 1);
    CHECK(psix.t[0][0] == 0);
    CHECK(psix.t[0][1 + 3 * 1] == 0);

    // Zero form -> zero forms.
    const auto psiz = mn::psi_forms(mn::make_sym_form(7, 3, 2, {}));
    for (const auto& row : psiz.t)
        for (int v : row) CHECK(v == 0);
}

TEST_CASE("count_system: guards, trivial values, frozen regression") {
    const auto f5 = mn::make_sym_form(5, 3, 2, fermat2());

    // b = 0: every equation vanishes.
    CHECK(mn::count_system(f5, LaurentTail(5, {0, 0, 0, 0, 0, 0}), 2) == 390625);  // 5^8

    // Frozen by exhaustive scan: all-ones tail.
    CHECK(mn::count_system(f5, LaurentTail(5, {1, 1, 1, 1, 1, 1}), 2) == 50625);

    // The zero tuple always solves: count >= 1.
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t)
        CHECK(mn::count_system(f5, random_tail(5, 6, rng), 2) >= 1);

    CHECK_THROWS_AS(mn::count_system(f5, LaurentTail(5, {1, 1, 1}), 2), DomainError);  // kd mismatch
    CHECK_THROWS_AS(mn::count_system(f5, LaurentTail(7, {1, 1, 1, 1, 1, 1}), 2), DomainError);
    CHECK_THROWS_AS(mn::count_system(f5, LaurentTail(5, {1, 1, 1, 1, 1, 1}), 2, 1000), GuardError);
}

TEST_CASE("count_Nalpha equals count_system") {
    const auto f5 = mn::make_sym_form(5, 3, 2, fermat2());
    CHECK(mn::count_Nalpha(f5, LaurentTail(5, {0, 0, 0, 0, 0, 0}), 2) == 390625);
    CHECK(mn::count_Nalpha(f5, LaurentTail(5, {1, 1, 1, 1, 1, 1}), 2, 100000000ULL, 4) == 50625);

    std::mt19937_64 rng(2024);
    for (int t = 0; t < 12; ++t) {
        const auto b = random_tail(5, 6, rng);
        CHECK(mn::count_Nalpha(f5, b, 2, 100000000ULL, 4) == mn::count_system(f5, b, 2));
    }

    // Same bridge on a non-diagonal leading form.
    const auto mixed = mn::make_sym_form(5, 3, 2, {mono({3, 0}, 1), mono({2, 1}, 2), mono({0, 3}, 4)});
    for (int t = 0; t < 6; ++t) {
        const auto b = random_tail(5, 6, rng);
        CHECK(mn::count_Nalpha(mixed, b, 2, 100000000ULL, 4) == mn::count_system(mixed, b, 2));
    }
}

TEST_CASE("vg_count: worked examples over both fields") {
    // G0 = x^3 in one variable: 6 y1 y2 = 0 is two lines: 2q - 1 points.
    const auto cube = mn::make_sym_form(5, 3, 1, {mono({3}, 1)});
    CHECK(mn::vg_count(cube, 1) == 9);    // 2*5 - 1
    CHECK(mn::vg_count(cube, 2) == 49);   // 2*25 - 1

    // G = 0: everything.
    const auto zero2 = mn::make_sym_form(5, 3, 2, {});
    CHECK(mn::vg_count(zero2, 1) == 625);  // q^{n(k-1)} = 5^4

    // k = 2 nondegenerate: kernel only.
    const auto quad = mn::make_sym_form(5, 2, 2, {mono({2, 0}, 1), mono({0, 2}, 1)});
    CHECK(mn::vg_count(quad, 1) == 1);
    // Degenerate rank-1 quadratic: kernel is a line.
    const auto quad1 = mn::make_sym_form(5, 2, 2, {mono({2, 0}, 1)});
    CHECK(mn::vg_count(quad1, 1) == 5);
    CHECK(mn::vg_count(quad1, 2) == 25);

    // Fermat cubic surface values used by the dimension fit.
    const auto f5 = mn::make_sym_form(5, 3, 2, fermat2());
    CHECK(mn::vg_count(f5, 1) == 81);    // (2q-1)^2 at q=5
    CHECK(mn::vg_count(f5, 2) == 2401);  // (2q-1)^2 at q=25

    CHECK_THROWS_AS(mn::vg_count(f5, 3), DomainError);
    CHECK_THROWS_AS(mn::vg_count(f5, 1, 100), GuardError);
}

TEST_CASE("weyl chain: examples and random cubics") {
    // G = x^3 over F_5: cubing permutes F_5, so S = 0; RHS = 5^2 * 9 = 225.
    {
        const auto rep = mn::weyl_check(5, 1, 3, {mono({3}, 1)});
        CHECK(rep.s_abs == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(rep.vg == 9);
        CHECK(rep.rhs == doctest::Approx(225.0));
        CHECK(rep.pass());
    }
    // G = x^3 over F_7: |S|^2 = 2p + something? just require the full chain.
    {
        const auto rep = mn::weyl_check(7, 1, 3, {mono({3}, 1)});
        CHECK(rep.pass());
        CHECK(rep.lhs <= rep.rhs);
    }
    // G = 0: equality of both sides.
    {
        const auto rep = mn::weyl_check(5, 2, 3, {});
        CHECK(rep.s_abs == doctest::Approx(25.0));
        CHECK(rep.lhs == doctest::Approx(rep.rhs));
        CHECK(rep.pass());
    }
    // Lower-order terms ride along; a pure lower-degree G is refused.
    CHECK(mn::weyl_check(5, 1, 3, {mono({3}, 1), mono({1}, 2), mono({0}, 3)}).pass());
    CHECK_THROWS_AS(mn::weyl_check(5, 1, 3, {mono({2}, 1)}), DomainError);
    CHECK_THROWS_AS(mn::weyl_check(3, 1, 3, {mono({3}, 1)}), DomainError);  // p <= k

    // Random cubic polynomials in up to 3 variables over p in {5, 7}.
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const int p = (trial % 2) ? 7 : 5;
        const int nv = 1 + static_cast<int>(rng() % 3);
        std::vector<es::Monomial> terms;
        // Random homogeneous cubic plus random lower-order noise.
        for (int t = 0; t < 4; ++t) {
            std::vector<int> exps(static_cast<std::size_t>(nv), 0);
            int left = 3;
            while (left > 0) {
                exps[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(nv))]++;
                --left;
            }
            terms.push_back(mono(std::move(exps), static_cast<long long>(rng() % static_cast<std::uint64_t>(p))));
        }
        {
            std::vector<int> exps(static_cast<std::size_t>(nv), 0);
            exps[0] = 1;
            terms.push_back(mono(std::move(exps), static_cast<long long>(rng() % static_cast<std::uint64_t>(p))));
        }
        std::map<std::vector<int>, long long> cubic_part;
        for (const auto& m : terms) {
            int tot = 0;
            for (int e : m.exps) tot += e;
            if (tot == 3) cubic_part[m.exps] += m.coeff;
        }
        bool has_cubic = false;
        for (const auto& [exps, cval] : cubic_part)
            if (cval % p != 0) has_cubic = true;
        if (!has_cubic) continue;
        const auto rep = mn::weyl_check(p, nv, 3, terms);
        CHECK(rep.conj_ok);
        CHECK(rep.shear_ok);
        CHECK(rep.weyl_ok);
    }
}

TEST_CASE("lattice minima: diagonal example, duality, Lee vs brute") {
    // gamma = 0, a=2, c=1, n=1: minima (-2, 1); Lee count = 5^2 = brute.
    {
        const auto zero = mn::make_laurent_mat(5, 1, 8, {std::vector<int>(8, 0)});
        const auto rep = mn::lattice_minima(zero, 2, 1);
        CHECK(rep.rho == std::vector<int>{-2, 1});
        CHECK(rep.lee == 25);
        CHECK(mn::lattice_brute_count(zero, 2, 1) == 25);
        const auto dual = mn::dual_minima(zero, 2, 1);
        REQUIRE(dual.size() == 2);
        // rho_i + rho'_{2n+1-i} = c - a = -1.
        CHECK(rep.rho[0] + dual[1] == -1);
        CHECK(rep.rho[1] + dual[0] == -1);
    }

    CHECK_THROWS_AS(mn::make_laurent_mat(5, 2, 3,
                                         {{1, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 0, 0}}),
                    DomainError);  // not symmetric
    {
        const auto zero = mn::make_laurent_mat(5, 1, 2, {std::vector<int>(2, 0)});
        CHECK_THROWS_AS(mn::lattice_minima(zero, 2, 1), DomainError);  // prec < a+c
    }

    // Random symmetric gamma: duality exact, Lee == brute, across a,c <= 3.
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 2);
        const auto gamma = random_sym_mat(5, n, 8, rng);
        const int a = static_cast<int>(rng() % 4);
        const int c = static_cast<int>(rng() % 4);
        const auto rep = mn::lattice_minima(gamma, a, c);
        REQUIRE(static_cast<int>(rep.rho.size()) == 2 * n);
        for (std::size_t t = 1; t < rep.rho.size(); ++t) CHECK(rep.rho[t - 1] <= rep.rho[t]);
        const auto dual = mn::dual_minima(gamma, a, c);
        for (int i = 0; i < 2 * n; ++i)
            CHECK(rep.rho[static_cast<std::size_t>(i)] + dual[static_cast<std::size_t>(2 * n - 1 - i)] == c - a);
        CHECK(rep.lee == mn::lattice_brute_count(gamma, a, c));
    }
}

TEST_CASE("shrinking ratio bound") {
    // gamma = 0: ratio exactly q^{ns}; equality against the bound when a <= c.
    const auto zero = mn::make_laurent_mat(5, 1, 8, {std::vector<int>(8, 0)});
    {
        const auto rep = mn::shrink_check(zero, 2, 2, 1);
        CHECK(rep.n_ac == 25);
        CHECK(rep.n_shift == 5);
        CHECK(rep.ratio == doctest::Approx(5.0));
        CHECK(rep.bound == doctest::Approx(5.0));
        CHECK(rep.pass);
    }
    {
        const auto rep = mn::shrink_check(zero, 2, 3, 0);  // s = 0: both counts equal
        CHECK(rep.n_ac == rep.n_shift);
        CHECK(rep.pass);
    }
    CHECK_THROWS_AS(mn::shrink_check(zero, 2, 0, 1), DomainError);   // c > 0 required
    CHECK_THROWS_AS(mn::shrink_check(zero, 2, 2, -1), DomainError);  // s >= 0 required

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 2);
        const auto gamma = random_sym_mat(5, n, 8, rng);
        const int a = static_cast<int>(rng() % 4);
        const int c = 1 + static_cast<int>(rng() % 3);
        const int s = static_cast<int>(rng() % 4);
        CHECK(mn::shrink_check(gamma, a, c, s).pass);
    }
}

TEST_CASE("minor-arc bound report") {
    const auto inst5 = fermat_d2(5);

    // m = 3 = kd/2: the complement of A_3 is empty; vacuous report.
    {
        const auto rep = mn::minor_bound_check(inst5, 3);
        CHECK(rep.tested == 0);
        CHECK(rep.max_count == 0);
        CHECK(rep.max_ratio == 0.0);
    }

    // m = 2: full scan over scaling classes of level-3 tails.
    {
        const auto rep = mn::minor_bound_check(inst5, 2, 0, 0, 100000000ULL, 4);
        CHECK(rep.tested == 3750);  // 15000 level-3 tails / (p-1)
        CHECK(rep.max_count >= 1);
        CHECK(rep.denom == doctest::Approx(15625.0));  // 5^{8-2}
        CHECK(rep.max_ratio == doctest::Approx(static_cast<double>(rep.max_count) / 15625.0));
        CHECK(static_cast<int>(rep.argmax_b.size()) == 6);
    }

    // Sampled mode: reproducible for a fixed seed, tested == samples.
    {
        const auto r1 = mn::minor_bound_check(inst5, 2, 40, 123, 100000000ULL, 2);
        const auto r2 = mn::minor_bound_check(inst5, 2, 40, 123, 100000000ULL, 8);
        CHECK(r1.tested == 40);
        CHECK(r1.max_count == r2.max_count);
        CHECK(r1.argmax_b == r2.argmax_b);
    }

    CHECK_THROWS_AS(mn::minor_bound_check(inst5, 1), DomainError);  // m < d
    CHECK_THROWS_AS(mn::minor_bound_check(inst5, 4), DomainError);  // m > kd/2
}

TEST_CASE("dimension fit via two fields") {
    const auto f5 = mn::make_sym_form(5, 3, 2, fermat2());
    const auto rep = mn::dimv_fit_report(f5);
    CHECK(rep.n1 == 81);
    CHECK(rep.n2 == 2401);
    CHECK(rep.d_hat == 2);
    CHECK(rep.dim_ok);       // 2 <= (k-2) n = 2
    CHECK(rep.langweil_ok);  // 81/25 vs 2401/625: factor 1.19
    CHECK(mn::dimv_fit(f5) == 2);

    // Zero form: V is everything, dimension (k-1)n ... the fit still reports
    // n(k-1) and the (k-2)n bound correctly flags it as out of range.
    const auto zero = mn::make_sym_form(5, 3, 2, {});
    const auto repz = mn::dimv_fit_report(zero);
    CHECK(repz.d_hat == 4);
    CHECK_FALSE(repz.dim_ok);
}
