#include "froblab/fp_poly.hpp"

#include <algorithm>

namespace froblab::fp {

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0;
  std::int64_t new_t = 1;
  auto r = static_cast<std::int64_t>(p);
  auto new_r = static_cast<std::int64_t>(a % p);
  if (new_r == 0) throw ValidationError("inverse of zero modulo " + std::to_string(p));
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

long degree(const Poly& a) { return static_cast<long>(a.size()) - 1; }

Poly add(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t s = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
    r[i] = s >= p ? s - p : s;
  }
  trim(r);
  return r;
}

Poly sub(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t s = (i < a.size() ? a[i] : 0) + p - (i < b.size() ? b[i] : 0);
    r[i] = s >= p ? s - p : s;
  }
  trim(r);
  return r;
}

Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

Poly scale(const Poly& a, std::uint64_t c, std::uint64_t p) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c % p;
  trim(r);
  return r;
}

Poly monic(const Poly& a, std::uint64_t p) {
  if (a.empty() || a.back() == 1) return a;
  return scale(a, inv_mod(a.back(), p), p);
}

Poly derivative(const Poly& a, std::uint64_t p) {
  if (a.size() <= 1) return {};
  Poly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * (i % p) % p;
  trim(r);
  return r;
}

void divmod(const Poly& a, const Poly& b, std::uint64_t p, Poly& q, Poly& r) {
  if (b.empty()) throw ValidationError("polynomial division by zero");
  r = a;
  if (a.size() < b.size()) {
    q.clear();
    return;
  }
  const std::size_t db = b.size() - 1;
  const std::uint64_t inv = inv_mod(b.back(), p);
  q.assign(a.size() - db, 0);
  for (std::size_t i = r.size(); i-- > db;) {
    std::uint64_t c = r[i] * inv % p;
    if (c == 0) continue;
    q[i - db] = c;
    const std::uint64_t neg = p - c;
    for (std::size_t j = 0; j <= db; ++j) r[i - db + j] = (r[i - db + j] + neg * b[j]) % p;
  }
  r.resize(db);
  trim(r);
  trim(q);
}

Poly rem(const Poly& a, const Poly& b, std::uint64_t p) {
  if (b.empty()) throw ValidationError("polynomial division by zero");
  if (a.size() < b.size()) return a;
  Poly r = a;
  const std::size_t db = b.size() - 1;
  const std::uint64_t inv = inv_mod(b.back(), p);
  for (std::size_t i = r.size(); i-- > db;) {
    std::uint64_t c = r[i] * inv % p;
    if (c == 0) continue;
    const std::uint64_t neg = p - c;
    for (std::size_t j = 0; j <= db; ++j) r[i - db + j] = (r[i - db + j] + neg * b[j]) % p;
  }
  r.resize(db);
  trim(r);
  return r;
}

Poly quo(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly q;
  Poly r;
  divmod(a, b, p, q, r);
  return q;
}

Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) { return rem(mul(a, b, p), m, p); }

Poly powmod(const Poly& base, std::uint64_t e, const Poly& m, std::uint64_t p) {
  Poly r = rem(Poly{1}, m, p);
  Poly b = rem(base, m, p);
  while (e) {
    if (e & 1) r = mulmod(r, b, m, p);
    b = mulmod(b, b, m, p);
    e >>= 1;
  }
  return r;
}

Poly powmod(const Poly& base, const BigInt& e, const Poly& m, std::uint64_t p) {
  Poly r = rem(Poly{1}, m, p);
  Poly b = rem(base, m, p);
  const std::size_t bits = e == 0 ? 0 : boost::multiprecision::msb(e) + 1;
  for (std::size_t i = bits; i-- > 0;) {
    r = mulmod(r, r, m, p);
    if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) r = mulmod(r, b, m, p);
  }
  return r;
}

}  // namespace froblab::fp
