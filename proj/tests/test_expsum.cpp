#include <doctest.h>

#include <arclab/arcs.hpp>
#include <arclab/errors.hpp>
#include <arclab/expsum.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

using namespace arclab::expsum;
using arclab::DomainError;
using arclab::InstanceError;
using arclab::ff::CountVector;
using arclab::poly::FqPoly;
using arclab::poly::LaurentTail;

namespace {

Monomial mono(std::vector<int> exps, long long coeff) { return {std::move(exps), coeff}; }

// f = x^3 + y^3 + z^3 + 1 with degree-1 parameterizations over F_7.
const MorInstance& cubic_p7_d1() {
  static MorInstance inst = make_instance(
      7, 3, 3, 1,
      {mono({3, 0, 0}, 1), mono({0, 3, 0}, 1), mono({0, 0, 3}, 1), mono({0, 0, 0}, 1)},
      {1, 6, 0});
  return inst;
}

// f = x^3 + y^3 + 1 with degree-2 parameterizations.
const MorInstance& fermat_d2(int p) {
  static MorInstance i5 = make_instance(
      5, 3, 2, 2, {mono({3, 0}, 1), mono({0, 3}, 1), mono({0, 0}, 1)}, {1, 4});
  static MorInstance i7 = make_instance(
      7, 3, 2, 2, {mono({3, 0}, 1), mono({0, 3}, 1), mono({0, 0}, 1)}, {1, 6});
  return p == 5 ? i5 : i7;
}

// f = x^3 + y^3 + z^3 + 1 with degree-2 parameterizations over F_5.
const MorInstance& cubic_p5_d2() {
  static MorInstance inst = make_instance(
      5, 3, 3, 2,
      {mono({3, 0, 0}, 1), mono({0, 3, 0}, 1), mono({0, 0, 3}, 1), mono({0, 0, 0}, 1)},
      {1, 4, 0});
  return inst;
}

const Histogram& hist_p7_d1() {
  static Histogram h = build_histogram(cubic_p7_d1());
  return h;
}

const Histogram& hist_d2(int p) {
  static Histogram h5 = build_histogram(fermat_d2(5));
  static Histogram h7 = build_histogram(fermat_d2(7));
  return p == 5 ? h5 : h7;
}

const Histogram& hist_p5_d2_n3() {
  static Histogram h = build_histogram(cubic_p5_d2());
  return h;
}

LaurentTail tail(int p, std::vector<int> b) { return LaurentTail(p, std::move(b)); }

}  // namespace

TEST_CASE("instance validation accepts the reference instances") {
  CHECK(cubic_p7_d1().kd() == 3);
  CHECK(fermat_d2(5).kd() == 6);
  CHECK(fermat_d2(7).dn() == 4);
  CHECK(cubic_p5_d2().dn() == 6);
}

TEST_CASE("instance validation rejects hypothesis violations") {
  // p must exceed k.
  CHECK_THROWS_AS(make_instance(3, 3, 2, 1, {mono({3, 0}, 1), mono({0, 3}, 1), mono({0, 0}, 1)}, {1, 2}),
                  InstanceError);
  // The affine surface x^3 + y^3 = 0 is singular at the origin.
  CHECK_THROWS_AS(make_instance(5, 3, 2, 1, {mono({3, 0}, 1), mono({0, 3}, 1)}, {1, 4}),
                  InstanceError);
  // The leading form x^3 + y^3 + xyz is projectively singular at (0,0,1).
  CHECK_THROWS_AS(make_instance(7, 3, 3, 1,
                                {mono({3, 0, 0}, 1), mono({0, 3, 0}, 1), mono({1, 1, 1}, 1),
                                 mono({0, 0, 0}, 1)},
                                {1, 6, 0}),
                  InstanceError);
  // P must lie on the leading-form zero locus.
  CHECK_THROWS_AS(make_instance(5, 3, 2, 2, {mono({3, 0}, 1), mono({0, 3}, 1), mono({0, 0}, 1)}, {1, 1}),
                  InstanceError);
  // P = 0 is not a projective point.
  CHECK_THROWS_AS(make_instance(5, 3, 2, 2, {mono({3, 0}, 1), mono({0, 3}, 1), mono({0, 0}, 1)}, {0, 0}),
                  InstanceError);
  // Malformed shapes are a domain error, not a hypothesis failure.
  CHECK_THROWS_AS(make_instance(5, 3, 2, 2, {mono({4, 0}, 1), mono({0, 3}, 1)}, {1, 4}),
                  DomainError);
  CHECK_THROWS_AS(make_instance(5, 3, 2, 2, {mono({3, 0, 0}, 1)}, {1, 4}), DomainError);
}

TEST_CASE("coefficient map on worked points") {
  // a = 0: f(T, -T, 0) = 1, so the coefficient vector is (1, 0, 0).
  CHECK(coeff_map(cubic_p7_d1(), std::vector<int>{0, 0, 0}) == std::vector<int>{1, 0, 0});
  // a = (1,0,0): (T+1)^3 - T^3 + 1 = 3T^2 + 3T + 2.
  CHECK(coeff_map(cubic_p7_d1(), std::vector<int>{1, 0, 0}) == std::vector<int>{2, 3, 3});
  CHECK_THROWS_AS(coeff_map(cubic_p7_d1(), std::vector<int>{1, 0}), DomainError);
}

TEST_CASE("histogram totals and the Mor count") {
  CHECK(hist_p7_d1().total == 343);
  CHECK(count_mor(hist_p7_d1()) == 21);
  std::int64_t cell_sum = 0;
  for (const auto& [idx, cnt] : hist_p7_d1().cells) cell_sum += cnt;
  CHECK(cell_sum == 343);

  // The degree-2 Fermat family admits no solutions: (g1+g2) would have to be
  // a constant c with 3c the T^4 coefficient of the identity, forcing c = 0,
  // which contradicts the constant term 1.
  CHECK(count_mor(hist_d2(5)) == 0);
  CHECK(count_mor(hist_d2(7)) == 0);
  CHECK(hist_d2(5).total == 625);
  CHECK(hist_d2(7).total == 2401);

  CHECK(count_mor(hist_p5_d2_n3()) == 25);
}

TEST_CASE("histogram construction is thread-count independent") {
  Histogram h1 = build_histogram(fermat_d2(5), kDefaultGuard, 1);
  Histogram h8 = build_histogram(fermat_d2(5), kDefaultGuard, 8);
  CHECK(h1.counts == h8.counts);
  CHECK(h1.cells == h8.cells);
}

TEST_CASE("sweep basics and cross-validation") {
  const Histogram& h = hist_p7_d1();
  SweepResult sw = sweep(h);
  CHECK(sw.S[0].real() == doctest::Approx(343.0).epsilon(1e-9));
  CHECK(sw.S[0].imag() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sweep_crosscheck(h, sw, 100, 42) < 1e-6);

  const Histogram& h5 = hist_d2(5);
  SweepResult sw5 = sweep(h5);
  CHECK(sw5.S[0].real() == doctest::Approx(625.0).epsilon(1e-9));
  CHECK(sweep_crosscheck(h5, sw5, 100, 42) < 1e-6);
}

TEST_CASE("sweep is bit-identical across thread counts") {
  SweepResult a = sweep(hist_d2(5), kDefaultGuard, 1);
  SweepResult b = sweep(hist_d2(5), kDefaultGuard, 2);
  SweepResult c = sweep(hist_d2(5), kDefaultGuard, 8);
  REQUIRE(a.S.size() == b.S.size());
  bool same_ab = true;
  bool same_ac = true;
  for (std::size_t i = 0; i < a.S.size(); ++i) {
    // Bit-identical, not approximately equal.
    if (!(a.S[i].real() == b.S[i].real() && a.S[i].imag() == b.S[i].imag())) same_ab = false;
    if (!(a.S[i].real() == c.S[i].real() && a.S[i].imag() == c.S[i].imag())) same_ac = false;
  }
  CHECK(same_ab);
  CHECK(same_ac);
}

TEST_CASE("orthogonality aggregate matches the closed form exactly") {
  OrthogonalityResult r1 = check_orthogonality(hist_p7_d1());
  CHECK(r1.pass);
  CHECK(r1.mor_count == 21);
  // Every target receives 7^2 * (343 - 21); target 0 additionally 7^3 * 21.
  CHECK(r1.aggregate.counts[0] == 49 * (343 - 21) + 343 * 21);
  CHECK(r1.aggregate.counts[3] == 49 * (343 - 21));

  CHECK(check_orthogonality(hist_d2(5)).pass);
  CHECK(check_orthogonality(hist_d2(7)).pass);
  CHECK(check_orthogonality(hist_p5_d2_n3()).pass);
}

TEST_CASE("infinity vanishing on uncharted strata") {
  InfinityReport r1 = check_infinity_vanishing(fermat_d2(5), hist_d2(5), 1);
  CHECK(r1.pass);
  CHECK(r1.tested == 4);  // #(A_1 - A_0) - #U_1 = 24 - 20
  InfinityReport r2 = check_infinity_vanishing(fermat_d2(5), hist_d2(5), 2);
  CHECK(r2.pass);
  CHECK(r2.tested == 100);  // 600 - 500
  CHECK_THROWS_AS(check_infinity_vanishing(fermat_d2(5), hist_d2(5), 3), DomainError);

  // Same property at a point of the n = 3 instance: (1,0,0,0,0,1) has level 2
  // and no chart, and its value distribution is exactly uniform.
  CountVector cv = cv_of_b(hist_p5_d2_n3(), tail(5, {1, 0, 0, 0, 0, 1}));
  CHECK(arclab::ff::is_uniform(cv));
}

TEST_CASE("uniformity genuinely fails above level d") {
  // b = (0,0,0,1,0,0) has level 3 > d = 2; the hypothesis m <= d is sharp.
  CountVector cv = cv_of_b(hist_d2(5), tail(5, {0, 0, 0, 1, 0, 0}));
  CHECK(arclab::arcs::arc_level(tail(5, {0, 0, 0, 1, 0, 0})) == 3);
  CHECK_FALSE(arclab::ff::is_uniform(cv));
  CHECK(cv.counts == std::vector<std::int64_t>{145, 120, 120, 120, 120});
}

TEST_CASE("some charted point carries a nonuniform distribution") {
  // The level-1 chart of 1/(T-1) carries the main term. Note p matters:
  // cubing is a bijection mod 5, which flattens every level-1 distribution
  // of the Fermat cubic, so the contrast point lives over F_7. At b=(1,1,1)
  // the value is f(g_a(1)), distributed as #X slices: counts[0] = 90.
  CountVector cv = cv_of_b(hist_p7_d1(), tail(7, {1, 1, 1}));
  CHECK_FALSE(arclab::ff::is_uniform(cv));
  CHECK(cv.counts[0] == 90);
}

TEST_CASE("residue sums at degree-one moduli") {
  const MorInstance& inst = fermat_d2(5);
  // m = 1, h2 = T - x, h1 = h: the distribution of h*f(a) is x-independent.
  for (int h = 1; h < 5; ++h) {
    CountVector at0 = residue_sum(inst, FqPoly(5, {h}), FqPoly(5, {0, 1}));
    for (int x = 1; x < 5; ++x) {
      CountVector atx = residue_sum(inst, FqPoly(5, {h}), FqPoly(5, {-x, 1}));
      CHECK(atx == at0);
    }
  }
  CHECK_THROWS_AS(residue_sum(inst, FqPoly(5, {0, 1}), FqPoly(5, {0, 1})), DomainError);
  CHECK_THROWS_AS(residue_sum(inst, FqPoly(5), FqPoly(5, {0, 1})), DomainError);

  // m = 0 chart (0, 1): the trivial quotient contributes a unit point mass.
  CountVector cv0 = residue_sum(inst, FqPoly(5), FqPoly(5, {1}));
  CHECK(cv0 == arclab::ff::delta0(5));
}

TEST_CASE("main term report") {
  MaintermReport r5 = check_mainterm(fermat_d2(5));
  CHECK(r5.pass);
  CHECK(r5.x_independent);
  CHECK(r5.counts_match);
  CHECK(r5.points_on_X == 5);
  CHECK(std::abs(r5.psi_value) < 1e-9);  // 5*5 - 25 = 0
  CHECK(r5.expected_psi == doctest::Approx(0.0));

  MaintermReport r7 = check_mainterm(fermat_d2(7));
  CHECK(r7.pass);
  CHECK(r7.points_on_X == 6);
  CHECK(r7.expected_psi == doctest::Approx(-7.0));  // 7*6 - 49

  MaintermReport r1 = check_mainterm(cubic_p7_d1());
  CHECK(r1.pass);
}

TEST_CASE("residue reduction at charted tails") {
  const MorInstance& inst = fermat_d2(5);
  const Histogram& h = hist_d2(5);
  // Chart of 1/(T-1) at level 1: scaling factor 5^{n(d-m)} = 25.
  CHECK(check_residue_reduction(inst, h, tail(5, {1, 1, 1, 1, 1, 1})));
  // Chart of 1/T^2 at level m = d = 2: factor 1, direct equality.
  CHECK(check_residue_reduction(inst, h, tail(5, {0, 1, 0, 0, 0, 0})));
  // The zero tail: CV = p^{dn} delta_0.
  CHECK(check_residue_reduction(inst, h, tail(5, {0, 0, 0, 0, 0, 0})));
  CountVector cv0 = cv_of_b(h, tail(5, {0, 0, 0, 0, 0, 0}));
  CHECK(cv0.counts[0] == 625);
  // Uncharted tails are rejected.
  CHECK_THROWS_AS(check_residue_reduction(inst, h, tail(5, {1, 0, 0, 0, 0, 1})), DomainError);
}

TEST_CASE("power vanishing at square moduli") {
  const MorInstance& inst = fermat_d2(5);
  for (int x = 0; x < 5; ++x) {
    // (T - x)^2
    FqPoly h2 = FqPoly(5, {x * x, -2 * x, 1});
    CHECK(check_power_vanishing(inst, h2));
  }
  CHECK_THROWS_AS(check_power_vanishing(inst, FqPoly(5, {0, 1})), DomainError);  // squarefree
  CHECK_THROWS_AS(check_power_vanishing(inst, FqPoly(5, {1})), DomainError);     // constant
}

TEST_CASE("factorisation multiplicativity") {
  const MorInstance& i7 = cubic_p7_d1();
  FqPoly l1(7, {-1, 1});  // T - 1
  FqPoly l2(7, {-2, 1});  // T - 2
  CHECK(check_factorisation(i7, l1, l2));
  CHECK(check_factorisation(i7, l2, l1));       // symmetry
  CHECK(check_factorisation(i7, l1, FqPoly(7, {1})));  // unit modulus: identity
  CHECK_THROWS_AS(check_factorisation(i7, l1, l1), DomainError);

  const MorInstance& i5 = fermat_d2(5);
  CHECK(check_factorisation(i5, FqPoly(5, {-1, 1}), FqPoly(5, {-2, 1})));
}

TEST_CASE("stratum sums assemble both ways") {
  const MorInstance& inst = fermat_d2(5);
  const Histogram& h = hist_d2(5);
  SweepResult sw = sweep(h);
  for (int m = 0; m <= 2; ++m) {
    StratumSumResult r = stratum_sum(inst, h, sw, m);
    CHECK(r.pass);
  }
  CHECK_THROWS_AS(stratum_sum(inst, h, sw, 3), DomainError);

  // Partition: summing the direct sides over every level recovers
  // p^{kd} * count_mor (here 0).
  std::complex<double> total{0.0, 0.0};
  for (int m = 0; m <= 3; ++m) total += stratum_direct(h, sw, m);
  CHECK(std::abs(total) < 1e-5);
}

TEST_CASE("stratum partition with a nonzero Mor count") {
  const Histogram& h = hist_p7_d1();
  SweepResult sw = sweep(h);
  std::complex<double> total{0.0, 0.0};
  for (int m = 0; m <= 2; ++m) total += stratum_direct(h, sw, m);
  double expect = 343.0 * 21.0;
  CHECK(std::abs(total - std::complex<double>(expect, 0.0)) < 1e-6 * expect);

  const MorInstance& inst = cubic_p7_d1();
  StratumSumResult r0 = stratum_sum(inst, h, sw, 0);
  CHECK(r0.pass);
  StratumSumResult r1 = stratum_sum(inst, h, sw, 1);
  CHECK(r1.pass);
}
