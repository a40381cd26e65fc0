#include "froblab/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace froblab {

namespace {

double log_of(const BigInt& v) {
  // cpp_int -> double overflows only past ~1e308; split off powers of two first.
  if (v <= 0) throw ValidationError("log of a nonpositive value");
  const std::size_t bits = boost::multiprecision::msb(v) + 1;
  if (bits < 1000) return std::log(v.convert_to<double>());
  const std::size_t shift = bits - 64;
  BigInt top = v >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

double to_double(const BigInt& v) { return v.convert_to<double>(); }

}  // namespace

void CountSeries::validate() const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first <= 0) throw ValidationError("series scales must be positive");
    if (entries[i].second < 0) throw ValidationError("series counts must be nonnegative");
    if (i > 0 && entries[i].first <= entries[i - 1].first)
      throw ValidationError("series scales must be strictly increasing");
  }
}

LeadingFit fit_leading(const CountSeries& series) {
  series.validate();
  std::vector<std::pair<double, double>> pts;
  for (const auto& [scale, count] : series.entries)
    if (count > 0) pts.emplace_back(log_of(scale), log_of(count));
  if (pts.size() < 3)
    throw ValidationError("fit_leading needs at least 3 entries with positive counts, got " + std::to_string(pts.size()));
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0) throw ValidationError("fit_leading needs at least two distinct scales");

  LeadingFit fit;
  fit.d_hat = sxy / sxx;
  const double nearest = std::round(fit.d_hat);
  fit.d_rounded = std::abs(fit.d_hat - nearest) <= 0.15;
  fit.d_used = fit.d_rounded ? nearest : fit.d_hat;

  std::vector<double> ratios;
  for (const auto& [scale, count] : series.entries)
    if (count > 0) ratios.push_back(std::exp(log_of(count) - fit.d_used * log_of(scale)));
  std::sort(ratios.begin(), ratios.end());
  const std::size_t n = ratios.size();
  fit.c_hat = n % 2 ? ratios[n / 2] : (ratios[n / 2 - 1] + ratios[n / 2]) / 2;
  for (const auto& [scale, count] : series.entries)
    fit.residuals.push_back(to_double(count) - fit.c_hat * std::exp(fit.d_used * log_of(scale)));
  return fit;
}

BandCheck langweil_band_check(const CountSeries& series, int d, double c, double C_band) {
  series.validate();
  if (d < 0) throw ValidationError("band check needs d >= 0");
  BandCheck out;
  out.pass = true;
  for (const auto& [scale, count] : series.entries) {
    const double q = to_double(scale);
    const double dev = std::abs(to_double(count) - c * std::pow(q, d));
    const double ratio = dev / std::pow(q, d - 0.5);
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (dev > C_band * std::pow(q, d - 0.5)) out.pass = false;
  }
  return out;
}

std::vector<Rational> berlekamp_massey(std::span<const Rational> a) {
  // C(x) = 1 + c_1 x + ... ; the recurrence is a_n = -sum c_i a_{n-i}.
  std::vector<Rational> C{1}, B{1};
  std::size_t L = 0;
  std::size_t m = 1;
  Rational b = 1;
  for (std::size_t n = 0; n < a.size(); ++n) {
    Rational disc = a[n];
    for (std::size_t i = 1; i <= L && i < C.size(); ++i) disc += C[i] * a[n - i];
    if (disc == 0) {
      ++m;
      continue;
    }
    std::vector<Rational> T = C;
    const Rational coef = disc / b;
    if (C.size() < B.size() + m) C.resize(B.size() + m, 0);
    for (std::size_t i = 0; i < B.size(); ++i) C[i + m] -= coef * B[i];
    if (2 * L <= n) {
      L = n + 1 - L;
      B = std::move(T);
      b = disc;
      m = 1;
    } else {
      ++m;
    }
  }
  C.resize(L + 1, 0);
  std::vector<Rational> out;
  for (std::size_t i = 1; i <= L; ++i) out.push_back(-C[i]);
  return out;
}

std::optional<Recurrence> detect_recurrence(std::span<const BigInt> a) {
  if (a.empty()) throw ValidationError("detect_recurrence of an empty sequence");
  const std::size_t len = a.size();
  std::vector<Rational> r(a.begin(), a.end());
  std::optional<Recurrence> best;
  for (std::size_t t = 0; t <= len / 4; ++t) {
    std::span<const Rational> tail(r.data() + t, len - t);
    auto coeffs = berlekamp_massey(tail);
    const std::size_t L = coeffs.size();
    if (t > L) continue;
    if (3 * L > len) continue;
    if (!best || L < best->order()) best = Recurrence{std::move(coeffs), t};
  }
  return best;
}

Rational predict_next(const Recurrence& rec, std::span<const Rational> history) {
  const std::size_t L = rec.order();
  if (history.size() < L)
    throw ValidationError("history of " + std::to_string(history.size()) + " terms is shorter than the order " +
                          std::to_string(L));
  Rational acc = 0;
  for (std::size_t i = 1; i <= L; ++i) acc += rec.coeffs[i - 1] * history[history.size() - i];
  return acc;
}

BigInt predict_next(const Recurrence& rec, std::span<const BigInt> history) {
  std::vector<Rational> h(history.begin(), history.end());
  Rational v = predict_next(rec, std::span<const Rational>(h));
  if (boost::multiprecision::denominator(v) != 1)
    throw PropertyViolation("recurrence predicts a non-integer term " + v.str());
  return boost::multiprecision::numerator(v);
}

}  // namespace froblab
