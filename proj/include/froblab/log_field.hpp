#pragma once

#include <cstdint>
#include <vector>

#include "froblab/ff_core.hpp"

namespace froblab {

/// Discrete-log representation of a small field F_Q.
///
/// Nonzero elements are stored as exponents of a fixed primitive element g;
/// kZero stands for 0. Multiplication and powering are modular integer
/// arithmetic on exponents, addition goes through the Zech table
/// zech[n] = log(1 + g^n). Frobenius x -> x^q becomes multiplication of the
/// exponent by q.
class LogField {
 public:
  using Log = std::uint32_t;
  static constexpr Log kZero = 0xFFFFFFFFu;
  static constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 21;

  explicit LogField(const FieldCtx& ctx);

  const FieldCtx& ctx() const { return ctx_; }
  std::uint32_t size() const { return size_; }
  /// Order of the multiplicative group, size() - 1.
  std::uint32_t order() const { return order_; }
  std::uint32_t generator_index() const { return exp_.empty() ? 0 : exp_[order_ == 1 ? 0 : 1]; }

  Log from_index(std::uint32_t index) const { return log_[index]; }
  std::uint32_t to_index(Log a) const { return a == kZero ? 0 : exp_[a]; }
  Log from_element(const FieldElement& e) const;
  FieldElement to_element(Log a) const;
  Log from_int(std::int64_t v) const;

  static constexpr Log one() { return 0; }

  Log mul(Log a, Log b) const {
    if (a == kZero || b == kZero) return kZero;
    std::uint32_t s = a + b;
    return s >= order_ ? s - order_ : s;
  }
  Log add(Log a, Log b) const {
    if (a == kZero) return b;
    if (b == kZero) return a;
    std::uint32_t n = b >= a ? b - a : b + order_ - a;
    Log z = zech_[n];
    if (z == kZero) return kZero;
    std::uint32_t s = a + z;
    return s >= order_ ? s - order_ : s;
  }
  Log neg(Log a) const { return mul(a, neg_one_); }
  Log sub(Log a, Log b) const { return add(a, neg(b)); }
  Log inverse(Log a) const { return a == 0 ? 0 : order_ - a; }

  /// a^e with 0^0 = 1.
  Log pow(Log a, std::uint64_t e) const {
    if (e == 0) return one();
    if (a == kZero) return kZero;
    return static_cast<Log>((static_cast<std::uint64_t>(a) * (e % order_)) % order_);
  }
  /// Exponent already reduced mod order(); positive says whether the
  /// unreduced exponent was nonzero (so that 0^e and 0^0 differ).
  Log pow_reduced(Log a, std::uint32_t e_mod, bool positive) const {
    if (!positive) return one();
    if (a == kZero) return kZero;
    return static_cast<Log>((static_cast<std::uint64_t>(a) * e_mod) % order_);
  }

 private:
  FieldCtx ctx_;
  std::uint32_t size_ = 0;
  std::uint32_t order_ = 0;
  std::uint32_t p_ = 0;
  Log neg_one_ = 0;
  std::vector<std::uint32_t> exp_;  // exp_[l] = index of g^l
  std::vector<Log> log_;            // log_[index]
  std::vector<Log> zech_;
};

}  // namespace froblab
