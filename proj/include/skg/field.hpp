#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace skg::gf {

/// Arithmetic for a finite field GF(q), q = p^e <= 2^16.
///
/// Elements are encoded as integers in [0, q). For prime fields the encoding
/// is the residue itself; for extension fields it is the base-p digit string
/// of the polynomial representative (lowest degree first). The reduction
/// modulus is the monic irreducible polynomial of degree e over GF(p) with
/// the smallest integer encoding, so the representation is identical across
/// runs and platforms (the table for common fields is listed in the README).
class Field {
 public:
  static Field prime(std::uint32_t p);
  static Field extension(std::uint32_t p, std::uint32_t e);
  /// Factors q and dispatches; throws std::invalid_argument when q is not a
  /// prime power or exceeds 2^16.
  static Field of_order(std::uint32_t q);

  std::uint32_t order() const { return t_->q; }
  std::uint32_t characteristic() const { return t_->p; }
  std::uint32_t degree() const { return t_->e; }
  /// Integer encoding of the reduction modulus (p^e + lower coefficients);
  /// equals p for prime fields.
  std::uint64_t modulus() const { return t_->modulus; }

  bool operator==(const Field& o) const { return t_->q == o.t_->q; }
  bool operator!=(const Field& o) const { return !(*this == o); }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t k) const;

  /// dst -= f * src (elementwise over the row), the elimination kernel.
  void row_submul(std::uint16_t* dst, const std::uint16_t* src, std::size_t n,
                  std::uint32_t f) const;
  /// dst += f * src.
  void row_addmul(std::uint16_t* dst, const std::uint16_t* src, std::size_t n,
                  std::uint32_t f) const;
  /// dst *= f.
  void row_scale(std::uint16_t* dst, std::size_t n, std::uint32_t f) const;

 private:
  enum class Kind : std::uint8_t { kPrime, kChar2Ext, kGeneralExt };

  struct Tables {
    std::uint32_t q = 0, p = 0, e = 0;
    std::uint64_t modulus = 0;
    Kind kind = Kind::kPrime;
    std::vector<std::uint16_t> log;  // index: element, defined for nonzero
    std::vector<std::uint16_t> exp;  // length 2(q-1), avoids mod in mul
  };

  explicit Field(std::shared_ptr<const Tables> t) : t_(std::move(t)) {}
  static std::shared_ptr<const Tables> build(std::uint32_t p, std::uint32_t e);

  std::shared_ptr<const Tables> t_;
};

inline std::uint32_t Field::add(std::uint32_t a, std::uint32_t b) const {
  const Tables& t = *t_;
  if (t.p == 2) return a ^ b;
  if (t.e == 1) {
    std::uint32_t s = a + b;
    return s >= t.q ? s - t.q : s;
  }
  // digit-wise mod-p addition
  std::uint32_t r = 0, m = 1;
  while (a || b) {
    std::uint32_t d = a % t.p + b % t.p;
    if (d >= t.p) d -= t.p;
    r += d * m;
    a /= t.p;
    b /= t.p;
    m *= t.p;
  }
  return r;
}

inline std::uint32_t Field::neg(std::uint32_t a) const {
  const Tables& t = *t_;
  if (t.p == 2) return a;
  if (t.e == 1) return a == 0 ? 0 : t.q - a;
  std::uint32_t r = 0, m = 1;
  while (a) {
    std::uint32_t d = a % t.p;
    r += (d == 0 ? 0 : t.p - d) * m;
    a /= t.p;
    m *= t.p;
  }
  return r;
}

inline std::uint32_t Field::sub(std::uint32_t a, std::uint32_t b) const {
  return add(a, neg(b));
}

inline std::uint32_t Field::mul(std::uint32_t a, std::uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  const Tables& t = *t_;
  return t.exp[std::uint32_t(t.log[a]) + t.log[b]];
}

inline std::uint32_t Field::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("division by zero in GF(q)");
  const Tables& t = *t_;
  return t.exp[(t.q - 1) - t.log[a]];
}

inline std::uint32_t Field::div(std::uint32_t a, std::uint32_t b) const {
  return mul(a, inv(b));
}

inline std::uint32_t Field::pow(std::uint32_t a, std::uint64_t k) const {
  if (k == 0) return 1;
  if (a == 0) return 0;
  const Tables& t = *t_;
  std::uint64_t lg = (std::uint64_t(t.log[a]) * (k % (t.q - 1))) % (t.q - 1);
  return t.exp[lg];
}

}  // namespace skg::gf
