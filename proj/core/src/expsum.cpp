#include <arclab/expsum.hpp>

#include <arclab/parallel.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

namespace arclab::expsum {

using ff::CountVector;
using poly::FqPoly;
using poly::LaurentTail;

std::uint64_t checked_pow(int p, int e, std::uint64_t max_enum) {
  if (p < 2 || e < 0) throw DomainError("checked_pow: bad base or exponent");
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > max_enum / static_cast<std::uint64_t>(p)) {
      throw GuardError("enumeration size exceeds the configured guard");
    }
    r *= static_cast<std::uint64_t>(p);
  }
  if (r > max_enum) throw GuardError("enumeration size exceeds the configured guard");
  return r;
}

std::vector<Monomial> partial(const std::vector<Monomial>& terms, int j, int p) {
  std::vector<Monomial> out;
  for (const Monomial& t : terms) {
    int e = t.exps[static_cast<std::size_t>(j)];
    if (e == 0) continue;
    long long c = ff::normalize(t.coeff * e, p);
    if (c == 0) continue;
    Monomial dt = t;
    dt.coeff = c;
    dt.exps[static_cast<std::size_t>(j)] -= 1;
    out.push_back(std::move(dt));
  }
  return out;
}

namespace {

// Scan F^n for a nonzero common zero of all listed derivative forms
// (projective singularity of the leading form), or for a point where the
// polynomial and all its derivatives vanish (affine singularity).
template <typename Field>
bool has_projective_singularity(const Field& fld, const std::vector<std::vector<Monomial>>& grads,
                                int n, std::uint64_t max_enum) {
  std::uint64_t npts = 1;
  for (int j = 0; j < n; ++j) {
    if (npts > max_enum / fld.size()) throw GuardError("smoothness scan exceeds guard");
    npts *= fld.size();
  }
  std::vector<typename Field::Elt> x(static_cast<std::size_t>(n));
  for (std::uint64_t idx = 1; idx < npts; ++idx) {  // skip the origin
    std::uint64_t v = idx;
    for (int j = 0; j < n; ++j) {
      x[static_cast<std::size_t>(j)] = fld.elt_at(v % fld.size());
      v /= fld.size();
    }
    bool all_zero = true;
    for (const auto& g : grads) {
      if (!fld.is_zero(eval_terms(fld, g, x))) {
        all_zero = false;
        break;
      }
    }
    if (all_zero) return true;
  }
  return false;
}

template <typename Field>
bool has_affine_singularity(const Field& fld, const std::vector<Monomial>& f,
                            const std::vector<std::vector<Monomial>>& grads, int n,
                            std::uint64_t max_enum) {
  std::uint64_t npts = 1;
  for (int j = 0; j < n; ++j) {
    if (npts > max_enum / fld.size()) throw GuardError("smoothness scan exceeds guard");
    npts *= fld.size();
  }
  std::vector<typename Field::Elt> x(static_cast<std::size_t>(n));
  for (std::uint64_t idx = 0; idx < npts; ++idx) {
    std::uint64_t v = idx;
    for (int j = 0; j < n; ++j) {
      x[static_cast<std::size_t>(j)] = fld.elt_at(v % fld.size());
      v /= fld.size();
    }
    if (!fld.is_zero(eval_terms(fld, f, x))) continue;
    bool all_zero = true;
    for (const auto& g : grads) {
      if (!fld.is_zero(eval_terms(fld, g, x))) {
        all_zero = false;
        break;
      }
    }
    if (all_zero) return true;
  }
  return false;
}

std::vector<std::vector<Monomial>> gradient(const std::vector<Monomial>& terms, int n, int p) {
  std::vector<std::vector<Monomial>> g;
  g.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) g.push_back(partial(terms, j, p));
  return g;
}

// Evaluate the monomial list at polynomial arguments.
FqPoly eval_terms_poly(int p, const std::vector<Monomial>& terms, const std::vector<FqPoly>& x) {
  FqPoly acc(p);
  for (const Monomial& t : terms) {
    FqPoly prod(p, {ff::normalize(t.coeff, p)});
    for (std::size_t j = 0; j < t.exps.size(); ++j) {
      for (int e = 0; e < t.exps[static_cast<std::size_t>(j)]; ++e) prod = prod * x[j];
    }
    acc = acc + prod;
  }
  return acc;
}

void decode_base_p(std::uint64_t idx, int p, std::vector<int>& out) {
  for (auto& v : out) {
    v = static_cast<int>(idx % static_cast<std::uint64_t>(p));
    idx /= static_cast<std::uint64_t>(p);
  }
}

}  // namespace

MorInstance make_instance(int p, int k, int n, int d, std::vector<Monomial> f,
                          std::vector<int> P, std::uint64_t max_enum) {
  ff::PrimeField fp(p);
  if (p <= k) throw InstanceError("instance requires p > k");
  if (k < 2) throw InstanceError("instance requires k >= 2");
  if (n < 1) throw InstanceError("instance requires n >= 1");
  if (d < 1) throw InstanceError("instance requires d >= 1");
  if (static_cast<int>(P.size()) != n) throw DomainError("P must have n coordinates");

  // Reduce coefficients, merge duplicate exponent vectors, drop zeros.
  std::map<std::vector<int>, long long> merged;
  for (const Monomial& t : f) {
    if (static_cast<int>(t.exps.size()) != n) throw DomainError("monomial arity != n");
    int total = 0;
    for (int e : t.exps) {
      if (e < 0) throw DomainError("negative exponent");
      total += e;
    }
    if (total > k) throw DomainError("monomial degree exceeds k");
    merged[t.exps] = ff::normalize(merged[t.exps] + t.coeff, p);
  }
  MorInstance inst;
  inst.p = p;
  inst.k = k;
  inst.n = n;
  inst.d = d;
  for (auto& [exps, coeff] : merged) {
    if (coeff == 0) continue;
    int total = 0;
    for (int e : exps) total += e;
    inst.f.push_back({exps, coeff});
    if (total == k) inst.f0.push_back({exps, coeff});
  }
  if (inst.f0.empty()) throw InstanceError("leading form is zero: f has degree < k");

  inst.P.resize(static_cast<std::size_t>(n));
  bool p_nonzero = false;
  for (int j = 0; j < n; ++j) {
    inst.P[static_cast<std::size_t>(j)] = ff::normalize(P[static_cast<std::size_t>(j)], p);
    p_nonzero = p_nonzero || inst.P[static_cast<std::size_t>(j)] != 0;
  }
  if (!p_nonzero) throw InstanceError("P must be a nonzero point");

  gfq::BaseField base(p);
  if (!base.is_zero(eval_terms(base, inst.f0, inst.P))) {
    throw InstanceError("leading form does not vanish at P");
  }
  auto grad_f0 = gradient(inst.f0, n, p);
  bool grad_nonzero = false;
  for (const auto& g : grad_f0) {
    if (!base.is_zero(eval_terms(base, g, inst.P))) grad_nonzero = true;
  }
  if (!grad_nonzero) throw InstanceError("gradient of the leading form vanishes at P");

  auto grad_f = gradient(inst.f, n, p);
  gfq::QuadField quad(p);
  if (has_projective_singularity(base, grad_f0, n, max_enum) ||
      has_projective_singularity(quad, grad_f0, n, max_enum)) {
    throw InstanceError("leading form defines a singular projective hypersurface");
  }
  if (has_affine_singularity(base, inst.f, grad_f, n, max_enum) ||
      has_affine_singularity(quad, inst.f, grad_f, n, max_enum)) {
    throw InstanceError("f defines a singular affine hypersurface");
  }
  return inst;
}

std::vector<int> coeff_map(const MorInstance& inst, std::span<const int> a) {
  if (static_cast<int>(a.size()) != inst.dn()) throw DomainError("coeff_map: a must have dn entries");
  std::vector<FqPoly> g;
  g.reserve(static_cast<std::size_t>(inst.n));
  for (int j = 0; j < inst.n; ++j) {
    std::vector<int> c(static_cast<std::size_t>(inst.d) + 1, 0);
    for (int i = 0; i < inst.d; ++i) c[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(j * inst.d + i)];
    c[static_cast<std::size_t>(inst.d)] = inst.P[static_cast<std::size_t>(j)];
    g.emplace_back(inst.p, std::move(c));
  }
  FqPoly val = eval_terms_poly(inst.p, inst.f, g);
  if (val.deg() >= inst.kd()) throw std::logic_error("coeff_map: degree bound kd-1 violated");
  std::vector<int> c(static_cast<std::size_t>(inst.kd()), 0);
  for (int r = 0; r <= val.deg(); ++r) c[static_cast<std::size_t>(r)] = val.c[static_cast<std::size_t>(r)];
  return c;
}

Histogram build_histogram(const MorInstance& inst, std::uint64_t max_enum, unsigned threads) {
  std::uint64_t na = checked_pow(inst.p, inst.dn(), max_enum);
  std::uint64_t nc = checked_pow(inst.p, inst.kd(), max_enum);
  Histogram h;
  h.p = inst.p;
  h.kd = inst.kd();
  h.total = static_cast<std::int64_t>(na);
  h.counts.assign(static_cast<std::size_t>(nc), 0);

  auto index_of = [&](const std::vector<int>& c) {
    std::uint64_t idx = 0;
    std::uint64_t pw = 1;
    for (int r = 0; r < inst.kd(); ++r) {
      idx += pw * static_cast<std::uint64_t>(c[static_cast<std::size_t>(r)]);
      pw *= static_cast<std::uint64_t>(inst.p);
    }
    return idx;
  };

  threads = clamp_threads(threads);
  if (threads <= 1) {
    std::vector<int> a(static_cast<std::size_t>(inst.dn()));
    for (std::uint64_t idx = 0; idx < na; ++idx) {
      decode_base_p(idx, inst.p, a);
      h.counts[static_cast<std::size_t>(index_of(coeff_map(inst, a)))] += 1;
    }
  } else {
    // Exact integer increments commute, so atomic accumulation is
    // deterministic for any schedule.
    std::unique_ptr<std::atomic<std::int64_t>[]> acc(new std::atomic<std::int64_t>[nc]);
    for (std::uint64_t i = 0; i < nc; ++i) acc[i].store(0, std::memory_order_relaxed);
    parallel_blocks<int>(
        na, threads, 0,
        [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
          std::vector<int> a(static_cast<std::size_t>(inst.dn()));
          for (std::uint64_t idx = lo; idx < hi; ++idx) {
            decode_base_p(idx, inst.p, a);
            acc[index_of(coeff_map(inst, a))].fetch_add(1, std::memory_order_relaxed);
          }
          return 0;
        },
        [](int x, int) { return x; });
    for (std::uint64_t i = 0; i < nc; ++i) h.counts[static_cast<std::size_t>(i)] = acc[i].load();
  }

  for (std::uint64_t i = 0; i < nc; ++i) {
    if (h.counts[static_cast<std::size_t>(i)] != 0) h.cells.emplace_back(i, h.counts[static_cast<std::size_t>(i)]);
  }
  return h;
}

std::int64_t count_mor(const Histogram& hist) { return hist.counts.at(0); }

SweepResult sweep(const Histogram& hist, std::uint64_t max_enum, unsigned threads) {
  std::uint64_t nc = checked_pow(hist.p, hist.kd, max_enum);
  SweepResult sw;
  sw.p = hist.p;
  sw.kd = hist.kd;
  sw.S.assign(static_cast<std::size_t>(nc), {0.0, 0.0});
  for (std::uint64_t i = 0; i < nc; ++i) {
    sw.S[static_cast<std::size_t>(i)] = {static_cast<double>(hist.counts[static_cast<std::size_t>(i)]), 0.0};
  }

  const int p = hist.p;
  std::vector<std::complex<double>> psi(static_cast<std::size_t>(p));
  for (int t = 0; t < p; ++t) {
    psi[static_cast<std::size_t>(t)] = std::polar(1.0, 2.0 * std::numbers::pi * t / p);
  }

  std::uint64_t stride = 1;
  for (int axis = 0; axis < hist.kd; ++axis) {
    std::uint64_t nlines = nc / static_cast<std::uint64_t>(p);
    parallel_blocks<int>(
        nlines, threads, 0,
        [&, stride](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
          std::vector<std::complex<double>> in(static_cast<std::size_t>(p));
          std::vector<std::complex<double>> out(static_cast<std::size_t>(p));
          for (std::uint64_t line = lo; line < hi; ++line) {
            std::uint64_t base = (line / stride) * stride * static_cast<std::uint64_t>(p) + line % stride;
            for (int t = 0; t < p; ++t) in[static_cast<std::size_t>(t)] = sw.S[static_cast<std::size_t>(base + static_cast<std::uint64_t>(t) * stride)];
            for (int b = 0; b < p; ++b) {
              std::complex<double> s{0.0, 0.0};
              for (int t = 0; t < p; ++t) s += in[static_cast<std::size_t>(t)] * psi[static_cast<std::size_t>((b * t) % p)];
              out[static_cast<std::size_t>(b)] = s;
            }
            for (int b = 0; b < p; ++b) sw.S[static_cast<std::size_t>(base + static_cast<std::uint64_t>(b) * stride)] = out[static_cast<std::size_t>(b)];
          }
          return 0;
        },
        [](int x, int) { return x; });
    stride *= static_cast<std::uint64_t>(p);
  }
  return sw;
}

CountVector cv_of_b(const Histogram& hist, const LaurentTail& b) {
  if (b.p != hist.p) throw DomainError("cv_of_b: field mismatch");
  if (static_cast<int>(b.b.size()) != hist.kd) throw DomainError("cv_of_b: tail length != kd");
  CountVector cv(hist.p);
  for (const auto& [cidx, cnt] : hist.cells) {
    std::uint64_t v = cidx;
    int t = 0;
    for (int r = 0; r < hist.kd; ++r) {
      int digit = static_cast<int>(v % static_cast<std::uint64_t>(hist.p));
      v /= static_cast<std::uint64_t>(hist.p);
      t = ff::add_mod(t, ff::mul_mod(b.b[static_cast<std::size_t>(r)], digit, hist.p), hist.p);
    }
    cv.counts[static_cast<std::size_t>(t)] += cnt;
  }
  return cv;
}

std::complex<double> psi_sum(const CountVector& cv) { return ff::charsum_eval(cv, 1); }

double sweep_crosscheck(const Histogram& hist, const SweepResult& sw, int samples,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uint64_t nc = sw.S.size();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::uint64_t idx = rng() % nc;
    LaurentTail b = arcs::tail_from_index(hist.p, hist.kd, idx);
    std::complex<double> exact = psi_sum(cv_of_b(hist, b));
    double rel = std::abs(sw.S[static_cast<std::size_t>(idx)] - exact) / std::max(1.0, std::abs(exact));
    worst = std::max(worst, rel);
  }
  return worst;
}

OrthogonalityResult check_orthogonality(const Histogram& hist) {
  const int p = hist.p;
  OrthogonalityResult res;
  res.mor_count = count_mor(hist);
  res.aggregate = CountVector(p);

  // Empirical route: for each occupied cell c, count b with b.c = t for every
  // t by digit-by-digit dynamic programming over the kd coordinates of b.
  for (const auto& [cidx, cnt] : hist.cells) {
    std::vector<std::int64_t> u(static_cast<std::size_t>(p), 0);
    u[0] = 1;
    std::uint64_t v = cidx;
    for (int r = 0; r < hist.kd; ++r) {
      int digit = static_cast<int>(v % static_cast<std::uint64_t>(p));
      v /= static_cast<std::uint64_t>(p);
      std::vector<std::int64_t> nu(static_cast<std::size_t>(p), 0);
      for (int t = 0; t < p; ++t) {
        if (u[static_cast<std::size_t>(t)] == 0) continue;
        for (int bv = 0; bv < p; ++bv) {
          int t2 = ff::add_mod(t, ff::mul_mod(bv, digit, p), p);
          nu[static_cast<std::size_t>(t2)] += u[static_cast<std::size_t>(t)];
        }
      }
      u = std::move(nu);
    }
    for (int t = 0; t < p; ++t) res.aggregate.counts[static_cast<std::size_t>(t)] += cnt * u[static_cast<std::size_t>(t)];
  }

  // Closed form: every nonzero cell spreads p^{kd-1} to each target; the
  // zero cell (the Mor count) lands entirely on t = 0.
  std::int64_t pkd1 = 1;
  for (int i = 0; i < hist.kd - 1; ++i) pkd1 *= p;
  res.expected = CountVector(p);
  for (int t = 0; t < p; ++t) {
    res.expected.counts[static_cast<std::size_t>(t)] = pkd1 * (hist.total - res.mor_count);
  }
  res.expected.counts[0] += pkd1 * static_cast<std::int64_t>(p) * res.mor_count;
  res.pass = res.aggregate == res.expected;
  return res;
}

InfinityReport check_infinity_vanishing(const MorInstance& inst, const Histogram& hist, int m,
                                        unsigned threads) {
  if (m < 0 || m > inst.d) throw DomainError("infinity vanishing requires 0 <= m <= d");
  std::uint64_t nc = hist.counts.size();
  struct Block {
    std::int64_t tested = 0;
    std::vector<LaurentTail> violators;
  };
  Block out = parallel_blocks<Block>(
      nc, threads, Block{},
      [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
        Block blk;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
          LaurentTail b = arcs::tail_from_index(hist.p, hist.kd, idx);
          if (arcs::arc_level(b) != m) continue;
          if (arcs::in_Um(b).has_value()) continue;
          blk.tested += 1;
          if (!ff::is_uniform(cv_of_b(hist, b))) blk.violators.push_back(b);
        }
        return blk;
      },
      [](Block acc, Block blk) {
        acc.tested += blk.tested;
        for (auto& v : blk.violators) acc.violators.push_back(std::move(v));
        return acc;
      });
  InfinityReport rep;
  rep.m = m;
  rep.tested = out.tested;
  rep.violators = std::move(out.violators);
  rep.pass = rep.violators.empty();
  return rep;
}

CountVector residue_sum(const MorInstance& inst, const FqPoly& h1, const FqPoly& h2) {
  if (h1.p != inst.p || h2.p != inst.p) throw DomainError("residue_sum: field mismatch");
  int m = h2.deg();
  if (m < 0 || !h2.is_monic()) throw DomainError("residue_sum: h2 must be monic");
  if (h1.deg() >= m) throw DomainError("residue_sum: deg h1 < deg h2 required");
  if (h1.deg() >= 0) {
    if (poly::poly_gcd(h1, h2).deg() != 0) throw DomainError("residue_sum: h1, h2 must be coprime");
  } else if (m > 0) {
    throw DomainError("residue_sum: h1 = 0 is only coprime to constants");
  }

  CountVector cv(inst.p);
  if (m == 0) {
    cv.counts[0] = 1;  // the quotient ring is trivial; the residue is 0
    return cv;
  }
  std::uint64_t npts = checked_pow(inst.p, m * inst.n, kDefaultGuard);
  std::vector<int> digits(static_cast<std::size_t>(m * inst.n));
  std::vector<FqPoly> args;
  args.reserve(static_cast<std::size_t>(inst.n));
  for (std::uint64_t idx = 0; idx < npts; ++idx) {
    decode_base_p(idx, inst.p, digits);
    args.clear();
    for (int j = 0; j < inst.n; ++j) {
      std::vector<int> c(digits.begin() + j * m, digits.begin() + (j + 1) * m);
      args.emplace_back(inst.p, std::move(c));
    }
    FqPoly fa = eval_terms_poly(inst.p, inst.f, args);
    FqPoly r = poly::divmod(h1 * poly::divmod(fa, h2).second, h2).second;
    cv.counts[static_cast<std::size_t>(r.coeff(m - 1))] += 1;
  }
  return cv;
}

CountVector aggregate_at(const MorInstance& inst, const FqPoly& l) {
  if (l.p != inst.p) throw DomainError("aggregate_at: field mismatch");
  int m = l.deg();
  if (m < 0 || !l.is_monic()) throw DomainError("aggregate_at: modulus must be monic");
  CountVector total(inst.p);
  std::uint64_t nh = checked_pow(inst.p, m, kDefaultGuard);
  std::vector<int> digits(static_cast<std::size_t>(std::max(m, 1)));
  for (std::uint64_t idx = 0; idx < nh; ++idx) {
    decode_base_p(idx, inst.p, digits);
    std::vector<int> c(digits.begin(), digits.begin() + m);
    FqPoly h1(inst.p, std::move(c));
    if (h1.deg() >= 0) {
      if (poly::poly_gcd(h1, l).deg() != 0) continue;
    } else if (m > 0) {
      continue;  // h1 = 0 is not coprime to a positive-degree modulus
    }
    CountVector rs = residue_sum(inst, h1, l);
    for (int t = 0; t < inst.p; ++t) total.counts[static_cast<std::size_t>(t)] += rs.counts[static_cast<std::size_t>(t)];
  }
  return total;
}

bool check_residue_reduction(const MorInstance& inst, const Histogram& hist,
                             const LaurentTail& b) {
  int m = arcs::arc_level(b);
  if (m > inst.d) throw DomainError("residue reduction requires level <= d");
  auto chart = arcs::in_Um(b);
  if (!chart.has_value()) throw DomainError("residue reduction requires a charted tail");
  CountVector direct = cv_of_b(hist, b);
  CountVector rs = residue_sum(inst, chart->h1, chart->h2);
  std::int64_t factor = 1;
  for (int i = 0; i < inst.n * (inst.d - m); ++i) factor *= inst.p;
  for (int t = 0; t < inst.p; ++t) {
    if (direct.counts[static_cast<std::size_t>(t)] != factor * rs.counts[static_cast<std::size_t>(t)]) return false;
  }
  return true;
}

bool check_power_vanishing(const MorInstance& inst, const FqPoly& h2) {
  if (h2.deg() < 1) throw DomainError("power vanishing: modulus must be nonconstant");
  if (poly::is_squarefree(h2)) throw DomainError("power vanishing applies to non-squarefree moduli");
  return ff::is_uniform(aggregate_at(inst, h2));
}

bool check_factorisation(const MorInstance& inst, const FqPoly& l1, const FqPoly& l2) {
  if (!l1.is_monic() || !l2.is_monic()) throw DomainError("factorisation: moduli must be monic");
  if (l1.deg() > 0 && l2.deg() > 0 && poly::poly_gcd(l1, l2).deg() != 0) {
    throw DomainError("factorisation: moduli must be coprime");
  }
  CountVector lhs = aggregate_at(inst, l1 * l2);
  CountVector rhs = ff::convolve(aggregate_at(inst, l1), aggregate_at(inst, l2));
  return lhs == rhs;
}

MaintermReport check_mainterm(const MorInstance& inst) {
  MaintermReport rep;
  const int p = inst.p;
  std::vector<CountVector> aggs;
  aggs.reserve(static_cast<std::size_t>(p));
  for (int x = 0; x < p; ++x) {
    aggs.push_back(aggregate_at(inst, FqPoly(p, {ff::sub_mod(0, x, p), 1})));
  }
  rep.x_independent = true;
  for (int x = 1; x < p; ++x) {
    if (!(aggs[static_cast<std::size_t>(x)] == aggs[0])) rep.x_independent = false;
  }
  rep.aggregate = aggs[0];

  std::uint64_t npts = checked_pow(p, inst.n, kDefaultGuard);
  gfq::BaseField base(p);
  std::vector<int> x(static_cast<std::size_t>(inst.n));
  for (std::uint64_t idx = 0; idx < npts; ++idx) {
    decode_base_p(idx, p, x);
    if (base.is_zero(eval_terms(base, inst.f, x))) rep.points_on_X += 1;
  }

  std::int64_t pn = static_cast<std::int64_t>(npts);
  rep.counts_match = rep.aggregate.counts[0] == (p - 1) * rep.points_on_X;
  for (int t = 1; t < p; ++t) {
    if (rep.aggregate.counts[static_cast<std::size_t>(t)] != pn - rep.points_on_X) rep.counts_match = false;
  }
  rep.psi_value = psi_sum(rep.aggregate);
  rep.expected_psi = static_cast<double>(p * rep.points_on_X - pn);
  double err = std::abs(rep.psi_value - std::complex<double>(rep.expected_psi, 0.0));
  rep.pass = rep.x_independent && rep.counts_match && err <= 1e-6 * (1.0 + std::abs(rep.expected_psi));
  return rep;
}

std::complex<double> stratum_direct(const Histogram& hist, const SweepResult& sw, int m) {
  std::complex<double> sum{0.0, 0.0};
  for (std::uint64_t idx = 0; idx < sw.S.size(); ++idx) {
    LaurentTail b = arcs::tail_from_index(hist.p, hist.kd, idx);
    if (arcs::arc_level(b) == m) sum += sw.S[static_cast<std::size_t>(idx)];
  }
  return sum;
}

StratumSumResult stratum_sum(const MorInstance& inst, const Histogram& hist,
                             const SweepResult& sw, int m) {
  if (m < 0 || m > inst.d) throw DomainError("stratum_sum requires 0 <= m <= d");
  StratumSumResult res;
  res.m = m;
  res.direct = stratum_direct(hist, sw, m);

  double factor = 1.0;
  for (int i = 0; i < inst.n * (inst.d - m); ++i) factor *= inst.p;
  std::complex<double> assembled{0.0, 0.0};
  if (m == 0) {
    assembled = psi_sum(residue_sum(inst, FqPoly(inst.p), FqPoly(inst.p, {1})));
  } else {
    std::uint64_t nh2 = checked_pow(inst.p, m, kDefaultGuard);
    std::vector<int> digits(static_cast<std::size_t>(m));
    for (std::uint64_t idx = 0; idx < nh2; ++idx) {
      decode_base_p(idx, inst.p, digits);
      std::vector<int> c(digits.begin(), digits.end());
      c.push_back(1);
      FqPoly h2(inst.p, std::move(c));
      if (!poly::is_squarefree(h2)) continue;  // such charts contribute zero
      assembled += psi_sum(aggregate_at(inst, h2));
    }
  }
  res.assembled = assembled * factor;
  res.pass = std::abs(res.direct - res.assembled) <= 1e-6 * (1.0 + std::abs(res.assembled));
  return res;
}

}  // namespace arclab::expsum
