#include "froblab/ff_core.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

#include "field_data.hpp"
#include "froblab/fp_poly.hpp"
#include "froblab/log_field.hpp"

namespace froblab {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool irreducible_over_fp(const fp::Poly& f, std::uint64_t p) {
  const long k = fp::degree(f);
  fp::Poly h = fp::x();
  for (long d = 1; 2 * d <= k; ++d) {
    h = fp::powmod(h, p, f, p);
    fp::Poly g = fp::gcd(f, fp::sub(h, fp::x(), p), p);
    if (fp::degree(g) > 0) return false;
  }
  return true;
}

std::vector<std::uint32_t> smallest_irreducible(std::uint64_t p, unsigned k) {
  if (k == 1) return {0, 1};
  // Digits d[0..k-1] are the coefficients of t^0..t^{k-1}; d[0] is the most
  // significant position of the search order.
  // A constant term of 0 would make t a factor, so the scan starts at d[0] = 1.
  std::vector<std::uint64_t> d(k, 0);
  d[0] = 1;
  while (true) {
    fp::Poly f(d.begin(), d.end());
    f.push_back(1);
    if (irreducible_over_fp(f, p)) return std::vector<std::uint32_t>(f.begin(), f.end());
    unsigned pos = k;
    while (pos > 0) {
      --pos;
      if (++d[pos] < p) break;
      d[pos] = 0;
      if (pos == 0) throw Error("no irreducible polynomial found");
    }
  }
}

std::string trim_copy(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::string t = trim_copy(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ValidationError("malformed " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t PrimePower::value() const {
  std::uint64_t v = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (v > std::numeric_limits<std::uint64_t>::max() / p)
      throw ValidationError("prime power " + label() + " does not fit in 64 bits");
    v *= p;
  }
  return v;
}

PrimePower make_prime_power(std::uint64_t p, unsigned e) {
  if (!is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
  if (e == 0) throw ValidationError("prime power exponent must be >= 1");
  PrimePower q{p, e};
  (void)q.value();
  return q;
}

int power_exponent(std::uint64_t q, std::uint64_t p) {
  if (p < 2 || q < p) return -1;
  int j = 0;
  while (q % p == 0) {
    q /= p;
    ++j;
  }
  return q == 1 ? j : -1;
}

PrimePower to_prime_power(std::uint64_t q) {
  if (q < 2) throw ValidationError(std::to_string(q) + " is not a prime power");
  std::uint64_t p = q;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  int e = power_exponent(q, p);
  if (e < 1) throw ValidationError(std::to_string(q) + " is not a prime power");
  return make_prime_power(p, static_cast<unsigned>(e));
}

PrimePower parse_prime_power(std::string_view text) {
  auto caret = text.find('^');
  if (caret == std::string_view::npos) return to_prime_power(parse_u64(text, "prime power"));
  std::uint64_t p = parse_u64(text.substr(0, caret), "prime power base");
  std::uint64_t e = parse_u64(text.substr(caret + 1), "prime power exponent");
  if (e == 0 || e > 64) throw ValidationError("bad prime power exponent in '" + std::string(text) + "'");
  return make_prime_power(p, static_cast<unsigned>(e));
}

// ---------------------------------------------------------------------------
// FieldData

namespace detail {

FieldData::FieldData(std::uint64_t p_, unsigned k_, std::vector<std::uint32_t> modulus_)
    : p(p_), k(k_), modulus(std::move(modulus_)) {
  size = 1;
  for (unsigned i = 0; i < k; ++i) size *= p;
  label = std::to_string(p) + "^" + std::to_string(k);

  // (t^i)^p = t^{ip}; computed by powering inside this field.
  frob_columns.assign(static_cast<std::size_t>(k) * k, 0);
  for (unsigned i = 0; i < k; ++i) {
    Coeffs base{};
    if (k == 1) {
      base[0] = (i == 0) ? 1 : 0;
    } else {
      base[i] = 1;
    }
    Coeffs acc{};
    acc[0] = 1;
    std::uint64_t e = p;
    Coeffs b = base;
    while (e) {
      if (e & 1) mul(acc, b, acc);
      mul(b, b, b);
      e >>= 1;
    }
    for (unsigned r = 0; r < k; ++r) frob_columns[static_cast<std::size_t>(i) * k + r] = acc[r];
  }
}

void FieldData::add(const Coeffs& a, const Coeffs& b, Coeffs& out) const {
  for (unsigned i = 0; i < k; ++i) {
    std::uint64_t s = std::uint64_t{a[i]} + b[i];
    out[i] = static_cast<std::uint32_t>(s >= p ? s - p : s);
  }
}

void FieldData::sub(const Coeffs& a, const Coeffs& b, Coeffs& out) const {
  for (unsigned i = 0; i < k; ++i) {
    std::uint64_t s = std::uint64_t{a[i]} + p - b[i];
    out[i] = static_cast<std::uint32_t>(s >= p ? s - p : s);
  }
}

void FieldData::neg(const Coeffs& a, Coeffs& out) const {
  for (unsigned i = 0; i < k; ++i) out[i] = a[i] == 0 ? 0 : static_cast<std::uint32_t>(p - a[i]);
}

void FieldData::mul(const Coeffs& a, const Coeffs& b, Coeffs& out) const {
  if (k == 1) {
    out[0] = static_cast<std::uint32_t>(std::uint64_t{a[0]} * b[0] % p);
    return;
  }
  std::array<std::uint64_t, 2 * kMaxExtensionDegree> prod{};
  for (unsigned i = 0; i < k; ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < k; ++j) {
      prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
    }
  }
  for (unsigned i = 2 * k - 2; i >= k; --i) {
    std::uint64_t c = prod[i];
    if (c == 0) continue;
    for (unsigned j = 0; j < k; ++j) {
      std::uint64_t m = modulus[j];
      if (m == 0) continue;
      prod[i - k + j] = (prod[i - k + j] + c * (p - m)) % p;
    }
  }
  for (unsigned i = 0; i < k; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
}

void FieldData::apply_linear(const std::vector<std::uint32_t>& cols, const Coeffs& a, Coeffs& out) const {
  std::array<std::uint64_t, kMaxExtensionDegree> acc{};
  for (unsigned i = 0; i < k; ++i) {
    if (a[i] == 0) continue;
    const std::uint32_t* col = &cols[static_cast<std::size_t>(i) * k];
    for (unsigned r = 0; r < k; ++r) acc[r] = (acc[r] + std::uint64_t{a[i]} * col[r]) % p;
  }
  for (unsigned r = 0; r < k; ++r) out[r] = static_cast<std::uint32_t>(acc[r]);
}

const LogField* FieldData::log_field(const FieldCtx& self) const {
  if (size > LogField::kMaxSize) return nullptr;
  std::call_once(log_once_, [&] { log_ = std::make_unique<LogField>(self); });
  return log_.get();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// FieldCtx

FieldCtx make_field(std::uint64_t p, int k) {
  if (k <= 0) throw ValidationError("extension degree must be >= 1, got " + std::to_string(k));
  if (static_cast<unsigned>(k) > kMaxExtensionDegree)
    throw ValidationError("extension degree " + std::to_string(k) + " exceeds " +
                          std::to_string(kMaxExtensionDegree));
  if (!is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
  if (p >= kMaxCharacteristic) throw ValidationError("characteristic must be below 2^31");

  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, int>, std::unique_ptr<detail::FieldData>> registry;
  std::lock_guard lock(mu);
  auto& slot = registry[{p, k}];
  if (!slot) {
    slot = std::make_unique<detail::FieldData>(p, static_cast<unsigned>(k),
                                               smallest_irreducible(p, static_cast<unsigned>(k)));
  }
  return FieldCtx(slot.get());
}

FieldCtx parse_field(std::string_view label) {
  auto caret = label.find('^');
  if (caret == std::string_view::npos) return make_field(parse_u64(label, "field"), 1);
  std::uint64_t p = parse_u64(label.substr(0, caret), "field characteristic");
  std::uint64_t k = parse_u64(label.substr(caret + 1), "field degree");
  if (k == 0 || k > kMaxExtensionDegree) throw ValidationError("bad field degree in '" + std::string(label) + "'");
  return make_field(p, static_cast<int>(k));
}

std::uint64_t FieldCtx::characteristic() const { return data_->p; }
unsigned FieldCtx::degree() const { return data_->k; }
const BigInt& FieldCtx::size() const { return data_->size; }

std::uint64_t FieldCtx::size_u64() const {
  if (data_->size > std::numeric_limits<std::uint64_t>::max())
    throw BudgetExceeded("field " + data_->label + " is too large to enumerate");
  return static_cast<std::uint64_t>(data_->size);
}

std::span<const std::uint32_t> FieldCtx::modulus() const { return data_->modulus; }
std::string FieldCtx::label() const { return data_ ? data_->label : "<unbound>"; }

FieldElement FieldCtx::zero() const { return FieldElement(data_, {}); }

FieldElement FieldCtx::one() const {
  FieldElement::Coeffs c{};
  c[0] = 1;
  return FieldElement(data_, c);
}

FieldElement FieldCtx::from_int(std::int64_t v) const {
  auto p = static_cast<std::int64_t>(data_->p);
  std::int64_t r = v % p;
  if (r < 0) r += p;
  FieldElement::Coeffs c{};
  c[0] = static_cast<std::uint32_t>(r);
  return FieldElement(data_, c);
}

FieldElement FieldCtx::from_bigint(const BigInt& v) const {
  BigInt r = v % data_->p;
  if (r < 0) r += data_->p;
  FieldElement::Coeffs c{};
  c[0] = static_cast<std::uint32_t>(r);
  return FieldElement(data_, c);
}

FieldElement FieldCtx::from_coeffs(std::span<const std::uint64_t> in) const {
  if (in.size() > data_->k) throw ValidationError("too many coefficients for field " + data_->label);
  FieldElement::Coeffs c{};
  for (std::size_t i = 0; i < in.size(); ++i) c[i] = static_cast<std::uint32_t>(in[i] % data_->p);
  return FieldElement(data_, c);
}

FieldElement FieldCtx::gen() const {
  FieldElement::Coeffs c{};
  if (data_->k > 1) c[1] = 1;
  return FieldElement(data_, c);
}

FieldElement FieldCtx::element_at(std::uint64_t index) const {
  FieldElement::Coeffs c{};
  for (unsigned i = 0; i < data_->k && index; ++i) {
    c[i] = static_cast<std::uint32_t>(index % data_->p);
    index /= data_->p;
  }
  if (index) throw ValidationError("element index out of range for " + data_->label);
  return FieldElement(data_, c);
}

std::uint64_t FieldCtx::index_of(const FieldElement& e) const {
  std::uint64_t idx = 0;
  for (unsigned i = data_->k; i-- > 0;) idx = idx * data_->p + e.raw()[i];
  return idx;
}

const LogField* FieldCtx::log_field() const { return data_->log_field(*this); }

// ---------------------------------------------------------------------------
// FieldElement

std::span<const std::uint32_t> FieldElement::coeffs() const { return {c_.data(), data_->k}; }

bool FieldElement::is_zero() const {
  for (unsigned i = 0; i < data_->k; ++i)
    if (c_[i]) return false;
  return true;
}

bool FieldElement::is_one() const {
  if (c_[0] != 1) return false;
  for (unsigned i = 1; i < data_->k; ++i)
    if (c_[i]) return false;
  return true;
}

bool FieldElement::in_prime_field() const {
  for (unsigned i = 1; i < data_->k; ++i)
    if (c_[i]) return false;
  return true;
}

namespace {
void require_same(const FieldElement& a, const FieldElement& b) {
  if (a.ctx() != b.ctx())
    throw ValidationError("mixing elements of " + a.ctx().label() + " and " + b.ctx().label());
}
}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same(*this, o);
  FieldElement r(data_, {});
  data_->add(c_, o.c_, r.c_);
  return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  require_same(*this, o);
  FieldElement r(data_, {});
  data_->sub(c_, o.c_, r.c_);
  return r;
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same(*this, o);
  FieldElement r(data_, {});
  data_->mul(c_, o.c_, r.c_);
  return r;
}

FieldElement FieldElement::operator/(const FieldElement& o) const { return *this * o.inverse(); }

FieldElement FieldElement::operator-() const {
  FieldElement r(data_, {});
  data_->neg(c_, r.c_);
  return r;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw ValidationError("division by zero in " + data_->label);
  if (data_->k == 1) {
    Coeffs c{};
    c[0] = static_cast<std::uint32_t>(fp::inv_mod(c_[0], data_->p));
    return FieldElement(data_, c);
  }
  return pow(data_->size - 2);
}

FieldElement FieldElement::pow(std::uint64_t e) const {
  FieldElement r = FieldCtx(data_).one();
  FieldElement b = *this;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

FieldElement FieldElement::pow(const BigInt& e) const {
  if (e < 0) return inverse().pow(BigInt(-e));
  FieldElement r = FieldCtx(data_).one();
  const std::size_t bits = e == 0 ? 0 : boost::multiprecision::msb(e) + 1;
  for (std::size_t i = bits; i-- > 0;) {
    r *= r;
    if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) r *= *this;
  }
  return r;
}

std::string FieldElement::to_string() const {
  if (!data_) return "<unbound>";
  std::string out;
  for (unsigned i = data_->k; i-- > 0;) {
    if (c_[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (i == 0) {
      out += std::to_string(c_[i]);
    } else {
      if (c_[i] != 1) out += std::to_string(c_[i]) + "*";
      out += i == 1 ? "t" : "t^" + std::to_string(i);
    }
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Frobenius

namespace {
unsigned frobenius_steps(const detail::FieldData& d, std::uint64_t q) {
  int j = power_exponent(q, d.p);
  if (j < 1)
    throw ValidationError(std::to_string(q) + " is not a power of the characteristic " + std::to_string(d.p));
  return static_cast<unsigned>(j) % d.k;
}
}  // namespace

FieldElement frobenius(const FieldElement& e, std::uint64_t q) {
  const auto& d = *e.ctx().data();
  unsigned steps = frobenius_steps(d, q);
  FieldElement::Coeffs c = e.raw();
  for (unsigned s = 0; s < steps; ++s) d.apply_linear(d.frob_columns, c, c);
  return FieldElement(&d, c);
}

FrobeniusMap::FrobeniusMap(const FieldCtx& ctx, std::uint64_t q) : ctx_(ctx), q_(q), k_(ctx.degree()) {
  const auto& d = *ctx.data();
  unsigned steps = frobenius_steps(d, q);
  columns_.assign(static_cast<std::size_t>(k_) * k_, 0);
  for (unsigned i = 0; i < k_; ++i) {
    FieldElement::Coeffs c{};
    c[i] = 1;
    for (unsigned s = 0; s < steps; ++s) d.apply_linear(d.frob_columns, c, c);
    for (unsigned r = 0; r < k_; ++r) columns_[static_cast<std::size_t>(i) * k_ + r] = c[r];
  }
}

FieldElement FrobeniusMap::operator()(const FieldElement& e) const {
  if (e.ctx() != ctx_) throw ValidationError("FrobeniusMap applied to an element of another field");
  FieldElement::Coeffs out{};
  ctx_.data()->apply_linear(columns_, e.raw(), out);
  return FieldElement(ctx_.data(), out);
}

// ---------------------------------------------------------------------------
// Enumeration

ElementRange::iterator::iterator(const FieldCtx& ctx, std::uint64_t index)
    : index_(index), p_(static_cast<std::uint32_t>(ctx.characteristic())), k_(ctx.degree()) {
  if (index < ctx.size()) {
    current_ = ctx.element_at(index);
  } else {
    current_ = ctx.zero();
  }
}

ElementRange::iterator& ElementRange::iterator::operator++() {
  ++index_;
  auto c = current_.raw();
  for (unsigned i = 0; i < k_; ++i) {
    if (++c[i] < p_) break;
    c[i] = 0;
  }
  current_ = FieldElement(current_.ctx().data(), c);
  return *this;
}

std::vector<ElementRange> ElementRange::chunks(std::size_t n) const {
  std::vector<ElementRange> out;
  if (n == 0) n = 1;
  std::uint64_t total = size();
  std::uint64_t per = total / n;
  std::uint64_t extra = total % n;
  std::uint64_t at = begin_;
  for (std::size_t i = 0; i < n && at < end_; ++i) {
    std::uint64_t len = per + (i < extra ? 1 : 0);
    if (len == 0) continue;
    out.emplace_back(ctx_, at, at + len);
    at += len;
  }
  return out;
}

ElementRange enumerate(const FieldCtx& ctx, std::uint64_t budget) {
  if (ctx.size() > budget)
    throw BudgetExceeded("enumerating " + ctx.label() + " exceeds the budget of " + std::to_string(budget) +
                         " steps");
  return ElementRange(ctx, 0, ctx.size_u64());
}

}  // namespace froblab
