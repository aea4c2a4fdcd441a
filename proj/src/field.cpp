#include "skg/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace skg::gf {
namespace {

// Polynomial helpers over GF(p), used only while building field tables.
// Coefficients are stored lowest degree first.
using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Reduces r in place by a monic modulus.
void poly_reduce(Poly& r, const Poly& mod, std::uint32_t p) {
  const std::size_t deg = mod.size() - 1;
  if (r.size() > deg) {
    for (std::size_t i = r.size(); i-- > deg;) {
      std::uint32_t c = r[i];
      if (c == 0) continue;
      r[i] = 0;
      const std::size_t shift = i - deg;
      for (std::size_t j = 0; j < deg; ++j) {
        std::uint32_t t = std::uint32_t(std::uint64_t(c) * mod[j] % p);
        r[shift + j] = (r[shift + j] + p - t) % p;
      }
    }
    r.resize(deg);
  }
  trim(r);
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& mod, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = std::uint32_t((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
  }
  poly_reduce(r, mod, p);
  return r;
}

Poly poly_powp(Poly a, const Poly& mod, std::uint32_t p) {
  // a^p mod `mod` by square-and-multiply on the exponent p
  Poly result{1};
  std::uint32_t k = p;
  while (k) {
    if (k & 1) result = poly_mulmod(result, a, mod, p);
    k >>= 1;
    if (k) a = poly_mulmod(a, a, mod, p);
  }
  return result;
}

Poly poly_mod(Poly a, const Poly& mod, std::uint32_t p) {
  poly_reduce(a, mod, p);
  return a;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // make b monic
    std::uint32_t lead = b.back();
    if (lead != 1) {
      // inverse of lead mod p
      std::uint64_t inv = 1, base = lead, k = p - 2;
      while (k) {
        if (k & 1) inv = inv * base % p;
        base = base * base % p;
        k >>= 1;
      }
      for (auto& c : b) c = std::uint32_t(std::uint64_t(c) * inv % p);
    }
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<std::uint32_t> prime_divisors(std::uint32_t n) {
  std::vector<std::uint32_t> ps;
  for (std::uint32_t d = 2; std::uint64_t(d) * d <= n; ++d)
    if (n % d == 0) {
      ps.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

// Rabin irreducibility test for a monic polynomial of degree e over GF(p).
bool is_irreducible(const Poly& f, std::uint32_t p, std::uint32_t e) {
  Poly x{0, 1};
  Poly xe = poly_mod(x, f, p);
  // x^(p^e) mod f
  Poly frob = xe;
  for (std::uint32_t i = 0; i < e; ++i) frob = poly_powp(frob, f, p);
  Poly diff = frob;
  diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
  diff[1] = (diff[1] + p - 1) % p;
  trim(diff);
  if (!diff.empty()) return false;
  for (std::uint32_t d : prime_divisors(e)) {
    Poly g = xe;
    for (std::uint32_t i = 0; i < e / d; ++i) g = poly_powp(g, f, p);
    g.resize(std::max<std::size_t>(g.size(), 2), 0);
    g[1] = (g[1] + p - 1) % p;
    trim(g);
    Poly gc = poly_gcd(f, g, p);
    if (!(gc.size() == 1 && gc[0] != 0)) return false;
  }
  return true;
}

Poly decode_poly(std::uint64_t enc, std::uint32_t p) {
  Poly c;
  while (enc) {
    c.push_back(std::uint32_t(enc % p));
    enc /= p;
  }
  return c;
}

std::uint32_t encode_poly(const Poly& c, std::uint32_t p) {
  std::uint64_t r = 0, m = 1;
  for (std::uint32_t d : c) {
    r += d * m;
    m *= p;
  }
  return std::uint32_t(r);
}

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; std::uint64_t(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

std::shared_ptr<const Field::Tables> Field::build(std::uint32_t p, std::uint32_t e) {
  std::uint64_t q64 = 1;
  for (std::uint32_t i = 0; i < e; ++i) q64 *= p;
  if (q64 > 65536) throw std::invalid_argument("field order exceeds 2^16");
  const std::uint32_t q = std::uint32_t(q64);

  auto t = std::make_shared<Tables>();
  t->q = q;
  t->p = p;
  t->e = e;
  t->kind = e == 1 ? Kind::kPrime : (p == 2 ? Kind::kChar2Ext : Kind::kGeneralExt);

  Poly mod;  // monic modulus, coefficients low->high, degree e
  if (e == 1) {
    t->modulus = p;
  } else {
    // smallest monic irreducible of degree e by integer encoding
    std::uint64_t lead = q64;  // encoding of x^e
    for (std::uint64_t c = 1;; ++c) {
      Poly f = decode_poly(lead + c, p);
      if (f.size() != e + 1) throw std::logic_error("no irreducible found");
      if (is_irreducible(f, p, e)) {
        mod = f;
        t->modulus = lead + c;
        break;
      }
    }
  }

  auto mul_raw = [&](std::uint32_t a, std::uint32_t b) -> std::uint32_t {
    if (e == 1) return std::uint32_t(std::uint64_t(a) * b % p);
    Poly r = poly_mulmod(decode_poly(a, p), decode_poly(b, p), mod, p);
    return encode_poly(r, p);
  };

  // smallest generator of the multiplicative group, by encoding order
  t->log.assign(q, 0);
  t->exp.assign(q == 1 ? 1 : 2 * (q - 1), 0);
  if (q == 2) {
    t->exp.assign(2, 1);
    t->log[1] = 0;
    return t;
  }
  for (std::uint32_t g = 2; g < q; ++g) {
    std::uint32_t v = 1;
    std::uint32_t i = 0;
    bool full = true;
    for (; i < q - 1; ++i) {
      t->exp[i] = std::uint16_t(v);
      t->log[v] = std::uint16_t(i);
      v = mul_raw(v, g);
      if (v == 1 && i + 1 < q - 1) {
        full = false;
        break;
      }
    }
    if (full && v == 1) {
      for (std::uint32_t j = 0; j < q - 1; ++j) t->exp[q - 1 + j] = t->exp[j];
      return t;
    }
  }
  throw std::logic_error("no multiplicative generator found");
}

Field Field::prime(std::uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("characteristic must be prime");
  return of_order(p);
}

Field Field::extension(std::uint32_t p, std::uint32_t e) {
  if (!is_prime(p)) throw std::invalid_argument("characteristic must be prime");
  if (e == 0) throw std::invalid_argument("degree must be positive");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < e; ++i) q *= p;
  if (q > 65536) throw std::invalid_argument("field order exceeds 2^16");
  return of_order(std::uint32_t(q));
}

Field Field::of_order(std::uint32_t q) {
  if (q < 2 || q > 65536) throw std::invalid_argument("field order must be in [2, 2^16]");
  std::uint32_t p = 0;
  for (std::uint32_t d = 2; std::uint64_t(d) * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0) p = q;
  std::uint32_t e = 0;
  std::uint64_t m = 1;
  while (m < q) {
    m *= p;
    ++e;
  }
  if (m != q) throw std::invalid_argument("field order must be a prime power");

  static std::mutex cache_mutex;
  static std::map<std::uint32_t, std::shared_ptr<const Tables>> cache;
  {
    std::lock_guard<std::mutex> lk(cache_mutex);
    auto it = cache.find(q);
    if (it != cache.end()) return Field(it->second);
  }
  auto t = build(p, e);
  std::lock_guard<std::mutex> lk(cache_mutex);
  auto [it, ok] = cache.emplace(q, std::move(t));
  (void)ok;
  return Field(it->second);
}

void Field::row_submul(std::uint16_t* dst, const std::uint16_t* src, std::size_t n,
                       std::uint32_t f) const {
  if (f == 0 || n == 0) return;
  const Tables& t = *t_;
  const std::uint16_t* lg = t.log.data();
  const std::uint16_t* ex = t.exp.data();
  switch (t.kind) {
    case Kind::kChar2Ext: {
      const std::uint32_t lf = lg[f];
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint16_t v = src[j];
        if (v) dst[j] ^= ex[lf + lg[v]];
      }
      break;
    }
    case Kind::kPrime: {
      if (t.p == 2) {
        for (std::size_t j = 0; j < n; ++j) dst[j] ^= src[j];
        break;
      }
      const std::uint32_t lf = lg[f];
      const std::uint32_t p = t.p;
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint16_t v = src[j];
        if (v) {
          std::uint32_t s = dst[j] + p - ex[lf + lg[v]];
          if (s >= p) s -= p;
          dst[j] = std::uint16_t(s);
        }
      }
      break;
    }
    case Kind::kGeneralExt:
      for (std::size_t j = 0; j < n; ++j)
        dst[j] = std::uint16_t(sub(dst[j], mul(f, src[j])));
      break;
  }
}

void Field::row_addmul(std::uint16_t* dst, const std::uint16_t* src, std::size_t n,
                       std::uint32_t f) const {
  if (t_->p == 2) {
    row_submul(dst, src, n, f);  // characteristic 2: add == sub
    return;
  }
  row_submul(dst, src, n, neg(f));
}

void Field::row_scale(std::uint16_t* dst, std::size_t n, std::uint32_t f) const {
  if (f == 1) return;
  if (f == 0) {
    std::fill(dst, dst + n, std::uint16_t(0));
    return;
  }
  const Tables& t = *t_;
  const std::uint32_t lf = t.log[f];
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint16_t v = dst[j];
    if (v) dst[j] = t.exp[lf + t.log[v]];
  }
}

}  // namespace skg::gf
