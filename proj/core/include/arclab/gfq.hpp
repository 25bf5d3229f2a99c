// Finite-field element arithmetic beyond the prime field: F_{p^2} as
// F_p[x]/(irreducible monic quadratic), plus a thin prime-field wrapper so
// enumeration code can be written once against a common field interface.
#pragma once

#include <arclab/errors.hpp>
#include <arclab/ff.hpp>

#include <cstdint>

namespace arclab::gfq {

// F_p with the same element/enumeration interface as QuadField.
class BaseField {
 public:
  using Elt = int;

  explicit BaseField(int p) : p_(p) {
    if (!ff::is_prime(p)) throw DomainError("BaseField: p must be prime");
  }

  int p() const { return p_; }
  std::uint64_t size() const { return static_cast<std::uint64_t>(p_); }
  Elt zero() const { return 0; }
  Elt one() const { return 1; }
  Elt from_base(long long v) const { return ff::normalize(v, p_); }
  Elt elt_at(std::uint64_t idx) const { return static_cast<int>(idx % static_cast<std::uint64_t>(p_)); }
  bool is_zero(Elt a) const { return a == 0; }
  Elt add(Elt a, Elt b) const { return ff::add_mod(a, b, p_); }
  Elt sub(Elt a, Elt b) const { return ff::sub_mod(a, b, p_); }
  Elt neg(Elt a) const { return ff::sub_mod(0, a, p_); }
  Elt mul(Elt a, Elt b) const { return ff::mul_mod(a, b, p_); }
  Elt inv(Elt a) const { return ff::inv_mod(a, p_); }

 private:
  int p_;
};

// F_{p^2} = F_p[x]/(x^2 + bx + c), where (b, c) is the first pair, scanning
// b ascending then c ascending, that makes the quadratic irreducible.
class QuadField {
 public:
  struct Elt {
    int a0 = 0;  // constant coordinate
    int a1 = 0;  // x coordinate
    friend bool operator==(const Elt&, const Elt&) = default;
  };

  explicit QuadField(int p) : p_(p) {
    if (!ff::is_prime(p)) throw DomainError("QuadField: p must be prime");
    bool found = false;
    for (int b = 0; b < p && !found; ++b) {
      for (int c = 0; c < p && !found; ++c) {
        bool has_root = false;
        for (int x = 0; x < p; ++x) {
          if ((static_cast<long long>(x) * x + static_cast<long long>(b) * x + c) % p == 0) {
            has_root = true;
            break;
          }
        }
        if (!has_root) {
          mod_b_ = b;
          mod_c_ = c;
          found = true;
        }
      }
    }
    if (!found) throw DomainError("QuadField: no irreducible quadratic found");
  }

  int p() const { return p_; }
  int modulus_b() const { return mod_b_; }
  int modulus_c() const { return mod_c_; }
  std::uint64_t size() const { return static_cast<std::uint64_t>(p_) * static_cast<std::uint64_t>(p_); }
  Elt zero() const { return {0, 0}; }
  Elt one() const { return {1, 0}; }
  Elt from_base(long long v) const { return {ff::normalize(v, p_), 0}; }
  Elt elt_at(std::uint64_t idx) const {
    auto q = static_cast<std::uint64_t>(p_);
    return {static_cast<int>(idx % q), static_cast<int>((idx / q) % q)};
  }
  bool is_zero(Elt a) const { return a.a0 == 0 && a.a1 == 0; }
  Elt add(Elt a, Elt b) const { return {ff::add_mod(a.a0, b.a0, p_), ff::add_mod(a.a1, b.a1, p_)}; }
  Elt sub(Elt a, Elt b) const { return {ff::sub_mod(a.a0, b.a0, p_), ff::sub_mod(a.a1, b.a1, p_)}; }
  Elt neg(Elt a) const { return {ff::sub_mod(0, a.a0, p_), ff::sub_mod(0, a.a1, p_)}; }

  // (a0 + a1 x)(b0 + b1 x) with x^2 = -mod_b x - mod_c.
  Elt mul(Elt a, Elt b) const {
    int t0 = ff::mul_mod(a.a0, b.a0, p_);
    int t1 = ff::add_mod(ff::mul_mod(a.a0, b.a1, p_), ff::mul_mod(a.a1, b.a0, p_), p_);
    int t2 = ff::mul_mod(a.a1, b.a1, p_);
    int r0 = ff::sub_mod(t0, ff::mul_mod(mod_c_, t2, p_), p_);
    int r1 = ff::sub_mod(t1, ff::mul_mod(mod_b_, t2, p_), p_);
    return {r0, r1};
  }

  Elt pow(Elt a, std::uint64_t e) const {
    Elt r = one();
    while (e != 0) {
      if (e & 1u) r = mul(r, a);
      a = mul(a, a);
      e >>= 1u;
    }
    return r;
  }

  Elt inv(Elt a) const {
    if (is_zero(a)) throw DomainError("QuadField: inverse of zero");
    return pow(a, size() - 2);
  }

 private:
  int p_ = 0;
  int mod_b_ = 0;
  int mod_c_ = 0;
};

}  // namespace arclab::gfq
