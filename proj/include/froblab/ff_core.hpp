#pragma once

#include <array>
#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "froblab/errors.hpp"

namespace froblab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr unsigned kMaxExtensionDegree = 32;
inline constexpr std::uint64_t kMaxCharacteristic = std::uint64_t{1} << 31;
inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// q = p^e with p prime and e >= 1.
struct PrimePower {
  std::uint64_t p = 0;
  unsigned e = 0;

  /// p^e; throws ValidationError if it does not fit in 64 bits.
  std::uint64_t value() const;
  std::string label() const { return std::to_string(p) + "^" + std::to_string(e); }

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

PrimePower make_prime_power(std::uint64_t p, unsigned e);
/// Factors q as p^e; throws ValidationError when q is not a prime power.
PrimePower to_prime_power(std::uint64_t q);
/// Accepts "p^e" or a plain integer.
PrimePower parse_prime_power(std::string_view text);
/// Exponent j with q = p^j, or -1.
int power_exponent(std::uint64_t q, std::uint64_t p);

namespace detail {
class FieldData;
}
class FieldElement;
class LogField;

/// Handle to an interned finite field F_{p^k}.
///
/// Fields are created once per (p, k) and never destroyed, so handles and the
/// elements that point into them stay valid for the life of the process.
/// Equality is identity of the underlying field.
class FieldCtx {
 public:
  FieldCtx() = default;

  std::uint64_t characteristic() const;
  unsigned degree() const;
  const BigInt& size() const;
  /// Throws BudgetExceeded if the size does not fit in 64 bits.
  std::uint64_t size_u64() const;
  /// Monic modulus, k + 1 coefficients, low to high.
  std::span<const std::uint32_t> modulus() const;
  std::string label() const;
  bool is_prime_field() const { return degree() == 1; }
  bool valid() const { return data_ != nullptr; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(std::int64_t v) const;
  FieldElement from_bigint(const BigInt& v) const;
  /// Coefficients in the basis 1, t, ..., t^{k-1}, each reduced mod p.
  FieldElement from_coeffs(std::span<const std::uint64_t> c) const;
  /// The class of t (equal to 0 in a prime field, whose modulus is t).
  FieldElement gen() const;

  /// Element whose coefficient vector is the base-p expansion of index
  /// (coefficient of t^0 is the least significant digit).
  FieldElement element_at(std::uint64_t index) const;
  std::uint64_t index_of(const FieldElement& e) const;

  /// Log/Zech tables, built on first use; nullptr for fields above LogField::kMaxSize.
  const LogField* log_field() const;

  friend bool operator==(const FieldCtx& a, const FieldCtx& b) { return a.data_ == b.data_; }

  const detail::FieldData* data() const { return data_; }
  explicit FieldCtx(const detail::FieldData* d) : data_(d) {}

 private:
  const detail::FieldData* data_ = nullptr;
};

/// F_{p^k} with the lexicographically smallest monic irreducible modulus
/// (coefficients compared from t^0 upward). Idempotent. For k = 1 the modulus is t.
FieldCtx make_field(std::uint64_t p, int k);
/// Parses "p^k" (or a plain prime, meaning k = 1).
FieldCtx parse_field(std::string_view label);

class FieldElement {
 public:
  using Coeffs = std::array<std::uint32_t, kMaxExtensionDegree>;

  FieldElement() = default;
  FieldElement(const detail::FieldData* d, const Coeffs& c) : data_(d), c_(c) {}

  FieldCtx ctx() const { return FieldCtx(data_); }
  std::span<const std::uint32_t> coeffs() const;
  const Coeffs& raw() const { return c_; }

  bool is_zero() const;
  bool is_one() const;
  bool in_prime_field() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  /// Throws ValidationError on zero.
  FieldElement inverse() const;
  /// Square-and-multiply; pow(0) == 1 for every element.
  FieldElement pow(std::uint64_t e) const;
  FieldElement pow(const BigInt& e) const;

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.data_ == b.data_ && a.c_ == b.c_;
  }

  std::string to_string() const;

 private:
  const detail::FieldData* data_ = nullptr;
  Coeffs c_{};
};

/// e^q for q a power of the characteristic. Realized as the F_p-linear
/// p-power map applied log_p(q) mod k times.
FieldElement frobenius(const FieldElement& e, std::uint64_t q);

/// Precomputed matrix of x -> x^q on one field, for hot loops.
class FrobeniusMap {
 public:
  FrobeniusMap(const FieldCtx& ctx, std::uint64_t q);
  FieldElement operator()(const FieldElement& e) const;
  std::uint64_t q() const { return q_; }

 private:
  FieldCtx ctx_;
  std::uint64_t q_;
  unsigned k_;
  std::vector<std::uint32_t> columns_;  // k x k, column i = image of t^i
};

/// All elements of a field (or a contiguous index slice of them), in
/// odometer order of coefficient vectors.
class ElementRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = FieldElement;
    using difference_type = std::ptrdiff_t;
    using pointer = const FieldElement*;
    using reference = const FieldElement&;

    iterator() = default;
    iterator(const FieldCtx& ctx, std::uint64_t index);
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator t = *this;
      ++*this;
      return t;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

   private:
    FieldElement current_;
    std::uint64_t index_ = 0;
    std::uint32_t p_ = 0;
    unsigned k_ = 0;
  };

  ElementRange(FieldCtx ctx, std::uint64_t begin, std::uint64_t end)
      : ctx_(ctx), begin_(begin), end_(end) {}

  iterator begin() const { return iterator(ctx_, begin_); }
  iterator end() const { return iterator(ctx_, end_); }
  std::uint64_t size() const { return end_ - begin_; }
  std::uint64_t first_index() const { return begin_; }

  /// Splits into at most n disjoint contiguous slices covering the range.
  std::vector<ElementRange> chunks(std::size_t n) const;

 private:
  FieldCtx ctx_;
  std::uint64_t begin_;
  std::uint64_t end_;
};

/// Throws BudgetExceeded when the field has more than budget elements.
ElementRange enumerate(const FieldCtx& ctx, std::uint64_t budget = kDefaultBudget);

}  // namespace froblab
