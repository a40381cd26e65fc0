#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "froblab/ff_core.hpp"

namespace froblab {

/// (scale, count) pairs with strictly increasing scales, e.g. (q, N(q)) or (q^m, a_m).
struct CountSeries {
  std::vector<std::pair<BigInt, BigInt>> entries;
  std::string meta;

  void validate() const;
};

struct LeadingFit {
  double d_hat = 0;
  /// d_hat rounded when within 0.15 of an integer, otherwise d_hat.
  double d_used = 0;
  bool d_rounded = false;
  double c_hat = 0;
  /// count - c_hat * scale^d_used, one per entry.
  std::vector<double> residuals;
};

/// Least-squares log-log slope and median leading constant. Needs >= 3 positive counts.
LeadingFit fit_leading(const CountSeries& series);

struct BandCheck {
  bool pass = false;
  double worst_ratio = 0;
};

/// |count - c q^d| <= C_band q^(d - 1/2) on every entry.
BandCheck langweil_band_check(const CountSeries& series, int d, double c, double C_band);

/// a_n = sum_{i=1..L} coeffs[i-1] a_{n-i} for every n >= transient + L.
struct Recurrence {
  std::vector<Rational> coeffs;
  std::size_t transient = 0;
  std::size_t order() const { return coeffs.size(); }
};

/// Shortest recurrence with transient <= L found by exact Berlekamp-Massey,
/// trying transients 0..len/4. None when L would exceed len/3.
std::optional<Recurrence> detect_recurrence(std::span<const BigInt> a);

/// Next term after the history (at least L terms).
Rational predict_next(const Recurrence& rec, std::span<const Rational> history);
BigInt predict_next(const Recurrence& rec, std::span<const BigInt> history);

/// Minimal connection polynomial of a rational sequence: returns c with
/// a_n = sum c_i a_{n-i} for all n >= c.size() within the input.
std::vector<Rational> berlekamp_massey(std::span<const Rational> a);

}  // namespace froblab
