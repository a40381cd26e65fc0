#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace froblab {

/// Integer extended by an absorbing minus infinity.
///
/// Used for variable orders of difference polynomials (an absent variable has
/// order -inf) and for degrees of the zero polynomial.
class ExtInt {
 public:
  constexpr ExtInt() = default;
  constexpr ExtInt(std::int64_t v) : value_(v), finite_(true) {}  // NOLINT(implicit)

  static constexpr ExtInt neg_inf() { return ExtInt(); }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_neg_inf() const { return !finite_; }

  /// Only meaningful when finite.
  constexpr std::int64_t value() const { return value_; }

  friend constexpr ExtInt operator+(ExtInt a, ExtInt b) {
    if (!a.finite_ || !b.finite_) return neg_inf();
    return ExtInt(a.value_ + b.value_);
  }
  ExtInt& operator+=(ExtInt o) { return *this = *this + o; }

  friend constexpr bool operator==(ExtInt a, ExtInt b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(ExtInt a, ExtInt b) {
    if (!a.finite_ || !b.finite_) return a.finite_ <=> b.finite_;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const { return finite_ ? std::to_string(value_) : "-inf"; }

 private:
  std::int64_t value_ = 0;
  bool finite_ = false;
};

inline std::ostream& operator<<(std::ostream& os, ExtInt v) { return os << v.to_string(); }

}  // namespace froblab
