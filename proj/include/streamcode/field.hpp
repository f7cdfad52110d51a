#ifndef STREAMCODE_FIELD_HPP
#define STREAMCODE_FIELD_HPP

// Arithmetic in GF(2^m) and in quadratic towers GF(q^2) = GF(q)[x]/(x^2+x+c).
//
// Elements are stored as bit-packed coordinate vectors (`Symbol`). For a
// plain field the bits are the polynomial-basis coefficients; for a tower
// field the low `m` bits hold the coordinate over 1 and the next `m` bits the
// coordinate over x, so an element lies in the embedded base field exactly
// when its high half is zero.

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace streamcode {

using Symbol = std::uint32_t;

class FieldSpec;
using FieldPtr = std::shared_ptr<const FieldSpec>;

/// Default primitive reduction polynomials, indexed by degree (bit i = x^i).
inline constexpr std::array<std::uint32_t, 17> kDefaultPolynomials = {
    0x0,     0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x83,  0x11D,
    0x211,   0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};

class FieldSpec {
 public:
  /// GF(2^m) reduced by `poly`, which must be irreducible of degree m.
  static FieldPtr binary(int m, std::uint32_t poly) {
    if (m < 1 || m > 16) throw std::invalid_argument("field degree must be in [1, 16]");
    if ((poly >> m) != 1u) throw std::invalid_argument("reduction polynomial degree mismatch");
    if (!is_irreducible_gf2(poly, m)) throw std::invalid_argument("reduction polynomial is not irreducible");
    auto f = std::shared_ptr<FieldSpec>(new FieldSpec());
    f->m_ = m;
    f->bits_ = m;
    f->poly_ = poly;
    f->build_tables();
    return f;
  }

  /// GF(q^2) over `base` using x^2 + x + c with the smallest admissible c.
  static FieldPtr quadratic(const FieldPtr& base) {
    if (!base) throw std::invalid_argument("null base field");
    if (base->is_tower()) throw std::invalid_argument("base of a quadratic extension must be a plain GF(2^m)");
    std::vector<bool> is_hit(base->order(), false);
    for (Symbol y = 0; y < base->order(); ++y) is_hit[base->add(base->mul(y, y), y)] = true;
    Symbol c = 0;
    while (is_hit[c]) ++c;  // x^2+x+c is irreducible iff c is not of the form y^2+y
    return quadratic(base, c);
  }

  static FieldPtr quadratic(const FieldPtr& base, Symbol c) {
    if (!base || base->is_tower()) throw std::invalid_argument("base of a quadratic extension must be a plain GF(2^m)");
    if (c >= base->order()) throw std::invalid_argument("tower constant outside base field");
    for (Symbol y = 0; y < base->order(); ++y) {
      if (base->add(base->mul(y, y), y) == c)
        throw std::invalid_argument("x^2 + x + c is reducible over the base field");
    }
    auto f = std::shared_ptr<FieldSpec>(new FieldSpec());
    f->m_ = 2;
    f->bits_ = 2 * base->bits();
    f->poly_ = c;
    f->base_ = base;
    if (f->bits_ <= 16) f->build_tables();
    return f;
  }

  /// Extension degree over the immediate base (m for GF(2^m), 2 for towers).
  int degree() const { return m_; }
  /// Total number of bits per element; the field order is 2^bits.
  int bits() const { return bits_; }
  std::uint64_t order() const { return std::uint64_t{1} << bits_; }
  /// Bitmask polynomial for plain fields; the constant c for towers.
  std::uint32_t reduction_polynomial() const { return poly_; }
  const FieldPtr& base() const { return base_; }
  bool is_tower() const { return base_ != nullptr; }

  /// Tower polynomial packed as c | 1<<m | 1<<2m (coefficients of 1, x, x^2).
  std::uint64_t packed_polynomial() const {
    if (!is_tower()) return poly_;
    const int m = base_->bits();
    return std::uint64_t{poly_} | (std::uint64_t{1} << m) | (std::uint64_t{1} << (2 * m));
  }

  bool contains(Symbol v) const { return std::uint64_t{v} < order(); }

  Symbol add(Symbol a, Symbol b) const { return a ^ b; }

  Symbol mul(Symbol a, Symbol b) const {
    if (a == 0 || b == 0) return 0;
    if (!exp_.empty()) return exp_[log_[a] + log_[b]];
    return slow_mul(a, b);
  }

  Symbol inv(Symbol a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    if (!exp_.empty()) return exp_[(order() - 1 - log_[a]) % (order() - 1)];
    // Tower without tables: conjugate of x is x + 1, so (a0 + a1 x)^-1 = conj / norm.
    const int m = base_->bits();
    const Symbol mask = (Symbol{1} << m) - 1;
    const Symbol a0 = a & mask, a1 = a >> m;
    const Symbol c0 = base_->add(a0, a1), c1 = a1;
    const Symbol norm = base_->add(base_->mul(a0, c0), base_->mul(base_->mul(a1, a1), poly_));
    const Symbol ninv = base_->inv(norm);
    return base_->mul(c0, ninv) | (base_->mul(c1, ninv) << m);
  }

  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

  Symbol pow(Symbol a, std::int64_t e) const {
    if (e < 0) {
      a = inv(a);
      e = -e;
    }
    Symbol result = 1;
    while (e > 0) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }

  /// Embeds a base-field element into this tower (identity on the first coordinate).
  Symbol embed(Symbol base_value) const {
    if (!is_tower()) throw std::logic_error("embed requires a tower field");
    if (!base_->contains(base_value)) throw std::invalid_argument("value outside base field");
    return base_value;
  }

  /// True iff v lies in the embedded copy of the base field.
  bool in_base(Symbol v) const {
    if (!is_tower()) throw std::logic_error("in_base requires a tower field");
    return (v >> base_->bits()) == 0;
  }

  /// The class of x in a tower field, an element outside the base.
  Symbol extension_generator() const {
    if (!is_tower()) throw std::logic_error("extension generator requires a tower field");
    return Symbol{1} << base_->bits();
  }

  bool operator==(const FieldSpec& other) const {
    if (this == &other) return true;
    if (m_ != other.m_ || bits_ != other.bits_ || poly_ != other.poly_) return false;
    if (is_tower() != other.is_tower()) return false;
    return !is_tower() || *base_ == *other.base_;
  }

  std::string describe() const {
    std::string s = "GF(2^" + std::to_string(bits_) + ")";
    if (is_tower()) s += " over " + base_->describe();
    return s;
  }

 private:
  FieldSpec() = default;

  // Trial division by every polynomial of degree 1..m/2.
  static bool is_irreducible_gf2(std::uint32_t poly, int m) {
    auto degree_of = [](std::uint32_t p) {
      int d = -1;
      while (p) {
        p >>= 1;
        ++d;
      }
      return d;
    };
    for (std::uint32_t d = 2; d < (std::uint32_t{1} << (m / 2 + 1)); ++d) {
      std::uint32_t r = poly;
      const int dd = degree_of(d);
      while (r && degree_of(r) >= dd) r ^= d << (degree_of(r) - dd);
      if (r == 0) return false;
    }
    return true;
  }

  Symbol slow_mul(Symbol a, Symbol b) const {
    if (!is_tower()) {
      std::uint32_t r = 0, x = a, y = b;
      while (y) {
        if (y & 1) r ^= x;
        y >>= 1;
        x <<= 1;
        if (x >> m_) x ^= poly_;
      }
      return r;
    }
    // (a0 + a1 x)(b0 + b1 x) with x^2 = x + c.
    const int m = base_->bits();
    const Symbol mask = (Symbol{1} << m) - 1;
    const Symbol a0 = a & mask, a1 = a >> m, b0 = b & mask, b1 = b >> m;
    const Symbol hh = base_->mul(a1, b1);
    const Symbol lo = base_->add(base_->mul(a0, b0), base_->mul(hh, poly_));
    const Symbol hi = base_->add(base_->add(base_->mul(a0, b1), base_->mul(a1, b0)), hh);
    return lo | (hi << m);
  }

  // Log/antilog tables from the first element whose powers cover all nonzero
  // elements. Failure to find one means the modulus is reducible.
  void build_tables() {
    const std::uint64_t n = order() - 1;
    std::vector<Symbol> exp(2 * n);
    for (Symbol g = 1; g <= n; ++g) {
      if (n > 1 && g == 1) continue;
      Symbol x = 1;
      bool full = true;
      for (std::uint64_t i = 0; i < n; ++i) {
        exp[i] = x;
        x = slow_mul(x, g);
        if (x == 1 && i + 1 < n) {
          full = false;
          break;
        }
      }
      if (!full || x != 1) continue;
      for (std::uint64_t i = 0; i < n; ++i) exp[n + i] = exp[i];
      std::vector<std::uint32_t> log(order(), 0);
      std::vector<bool> seen(order(), false);
      for (std::uint64_t i = 0; i < n; ++i) {
        if (seen[exp[i]]) throw std::invalid_argument("reduction polynomial is not irreducible");
        seen[exp[i]] = true;
        log[exp[i]] = static_cast<std::uint32_t>(i);
      }
      exp_ = std::move(exp);
      log_ = std::move(log);
      return;
    }
    throw std::invalid_argument("reduction polynomial is not irreducible");
  }

  int m_ = 0;
  int bits_ = 0;
  std::uint32_t poly_ = 0;
  FieldPtr base_;
  std::vector<Symbol> exp_;
  std::vector<std::uint32_t> log_;
};

/// GF(2^m) with the default reduction polynomial for m.
inline FieldPtr make_field(int m) {
  if (m < 1 || m > 16) throw std::invalid_argument("field degree must be in [1, 16]");
  return FieldSpec::binary(m, kDefaultPolynomials[static_cast<std::size_t>(m)]);
}

inline FieldPtr make_quadratic_extension(const FieldPtr& base) { return FieldSpec::quadratic(base); }

/// Smallest m with 2^m >= lower_bound.
inline int degree_for_order(std::uint64_t lower_bound) {
  int m = 1;
  while ((std::uint64_t{1} << m) < lower_bound) ++m;
  return m;
}

inline bool same_field(const FieldPtr& a, const FieldPtr& b) { return a && b && *a == *b; }

/// A field element carrying its field, for checked arithmetic at API edges.
/// Bulk code (matrices, codecs) works on raw `Symbol`s and a shared field.
class FieldElement {
 public:
  FieldElement(FieldPtr field, Symbol value) : field_(std::move(field)), value_(value) {
    if (!field_) throw std::invalid_argument("null field");
    if (!field_->contains(value_)) throw std::invalid_argument("value outside field");
  }

  static FieldElement zero(const FieldPtr& f) { return {f, 0}; }
  static FieldElement one(const FieldPtr& f) { return {f, 1}; }

  Symbol value() const { return value_; }
  const FieldPtr& field() const { return field_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement operator+(const FieldElement& o) const {
    check(o);
    return {field_, field_->add(value_, o.value_)};
  }
  FieldElement operator-(const FieldElement& o) const { return *this + o; }
  FieldElement operator*(const FieldElement& o) const {
    check(o);
    return {field_, field_->mul(value_, o.value_)};
  }
  FieldElement operator/(const FieldElement& o) const {
    check(o);
    return {field_, field_->div(value_, o.value_)};
  }
  FieldElement inv() const { return {field_, field_->inv(value_)}; }
  FieldElement pow(std::int64_t e) const { return {field_, field_->pow(value_, e)}; }

  bool operator==(const FieldElement& o) const { return same_field(field_, o.field_) && value_ == o.value_; }

 private:
  void check(const FieldElement& o) const {
    if (!same_field(field_, o.field_)) throw std::invalid_argument("field mismatch");
  }

  FieldPtr field_;
  Symbol value_;
};

/// Membership in `sub`, which must be either e's own field or the base of e's tower.
inline bool is_in_subfield(const FieldElement& e, const FieldPtr& sub) {
  const auto& f = e.field();
  if (same_field(f, sub)) return true;
  if (f->is_tower() && same_field(f->base(), sub)) return f->in_base(e.value());
  throw std::invalid_argument("subfield is unrelated to the element's field");
}

}  // namespace streamcode

#endif  // STREAMCODE_FIELD_HPP
