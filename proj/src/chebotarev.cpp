#include "froblab/chebotarev.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <thread>

#include "froblab/errors.hpp"
#include "froblab/fp_poly.hpp"
#include "froblab/poly.hpp"

namespace froblab {

namespace {

constexpr std::uint64_t kMaxScanPrime = (1ull << 31) - 1;

BigInt bareiss_det(std::vector<std::vector<BigInt>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace

IntUniPoly::IntUniPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntUniPoly IntUniPoly::derivative() const {
  std::vector<BigInt> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<unsigned>(i));
  return IntUniPoly(std::move(d));
}

std::vector<std::uint64_t> IntUniPoly::mod_p(std::uint64_t p) const {
  std::vector<std::uint64_t> out;
  out.reserve(c_.size());
  const BigInt P = p;
  for (const auto& c : c_) {
    BigInt r = c % P;
    if (r < 0) r += P;
    out.push_back(static_cast<std::uint64_t>(r));
  }
  fp::trim(out);
  return out;
}

std::string IntUniPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const BigInt& c = c_[i];
    if (c == 0) continue;
    BigInt a = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    std::string mono = i == 0 ? "" : i == 1 ? var : var + "^" + std::to_string(i);
    if (mono.empty()) out += a.str();
    else if (a == 1) out += mono;
    else out += a.str() + "*" + mono;
  }
  return out;
}

IntUniPoly parse_int_unipoly(std::string_view text, const std::string& var) {
  IntPoly ip = parse_integer_poly(text, VariableNames{std::vector<std::string>{var}});
  std::vector<BigInt> c;
  for (const auto& [e, v] : ip) {
    const std::size_t d = e.empty() ? 0 : static_cast<std::size_t>(e[0]);
    if (c.size() <= d) c.resize(d + 1, 0);
    c[d] += v;
  }
  return IntUniPoly(std::move(c));
}

BigInt resultant(const IntUniPoly& a, const IntUniPoly& b) {
  if (a.degree() < 0 || b.degree() < 0) return 0;
  const std::size_t m = static_cast<std::size_t>(a.degree()), n = static_cast<std::size_t>(b.degree());
  const std::size_t N = m + n;
  if (N == 0) return 1;
  std::vector<std::vector<BigInt>> s(N, std::vector<BigInt>(N, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= m; ++j) s[i][i + j] = a.coeffs()[m - j];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= n; ++j) s[n + i][i + j] = b.coeffs()[n - j];
  return bareiss_det(std::move(s));
}

BigInt discriminant(const IntUniPoly& g) {
  const long n = g.degree();
  if (n < 1) throw ValidationError("discriminant needs degree at least 1");
  BigInt r = resultant(g, g.derivative()) / g.lead();
  return (n * (n - 1) / 2) % 2 ? BigInt(-r) : r;
}

std::string cycle_type_label(const CycleType& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(t[i]);
  }
  return out;
}

CycleType parse_cycle_type(std::string_view text) {
  CycleType t;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view part = text.substr(pos, end - pos);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size() || v == 0)
      throw ValidationError("bad cycle type '" + std::string(text) + "'");
    t.push_back(v);
    pos = end + 1;
  }
  std::sort(t.begin(), t.end());
  return t;
}

SplittingRecord splitting_type(const IntUniPoly& g, std::uint64_t p) {
  if (!is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
  if (p > kMaxScanPrime) throw ValidationError("primes above 2^31 are not supported");
  if (g.degree() < 1 || !g.is_monic()) throw ValidationError("splitting_type needs a monic polynomial of degree >= 1");
  SplittingRecord rec;
  rec.p = p;
  const fp::Poly gp = g.mod_p(p);
  const fp::Poly dg = fp::derivative(gp, p);
  if (fp::degree(fp::gcd(gp, dg, p)) > 0) {
    rec.ramified = true;
    return rec;
  }
  for (const auto& [d, count] : distinct_degree_factor_mod_p(gp, p)) rec.cycle_type.insert(rec.cycle_type.end(), count, d);
  unsigned total = 0;
  for (auto d : rec.cycle_type) total += d;
  if (total != static_cast<unsigned>(g.degree()))
    throw PropertyViolation("factor degrees of " + g.to_string() + " mod " + std::to_string(p) + " do not sum to its degree");
  return rec;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

double DensityScan::frequency(const CycleType& t) const {
  auto it = counts.find(t);
  if (it == counts.end() || unramified == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(unramified);
}

DensityScan density_scan(const IntUniPoly& g, std::uint64_t P_max, unsigned workers) {
  if (P_max < 100) throw ValidationError("P_max must be at least 100");
  if (P_max > kMaxScanPrime) throw ValidationError("P_max must be below 2^31");
  if (g.degree() < 1 || !g.is_monic()) throw ValidationError("density_scan needs a monic polynomial of degree >= 1");
  const auto primes = primes_up_to(P_max);
  const std::size_t chunks = std::clamp<std::size_t>(workers, 1, primes.size());
  std::vector<DensityScan> parts(chunks);
  auto scan = [&](std::size_t c) {
    const std::size_t lo = primes.size() * c / chunks, hi = primes.size() * (c + 1) / chunks;
    for (std::size_t i = lo; i < hi; ++i) {
      SplittingRecord r = splitting_type(g, primes[i]);
      if (r.ramified) {
        parts[c].ramified.push_back(r.p);
      } else {
        ++parts[c].counts[r.cycle_type];
        ++parts[c].unramified;
      }
    }
  };
  if (chunks == 1) {
    scan(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t c = 0; c < chunks; ++c) pool.emplace_back(scan, c);
  }
  DensityScan out;
  out.P_max = P_max;
  // Contiguous ranges merged in order keep the ramified list sorted.
  for (auto& part : parts) {
    for (const auto& [t, n] : part.counts) out.counts[t] += n;
    out.ramified.insert(out.ramified.end(), part.ramified.begin(), part.ramified.end());
    out.unramified += part.unramified;
  }
  std::uint64_t total = 0;
  for (const auto& [t, n] : out.counts) total += n;
  if (total != out.unramified) throw PropertyViolation("splitting type counts do not sum to the unramified primes");
  return out;
}

std::vector<CycleType> ClassComparison::unexpected() const {
  std::vector<CycleType> out;
  for (const auto& r : rows)
    if (r.unexpected) out.push_back(r.type);
  return out;
}

ClassComparison compare_to_classes(const DensityScan& scan, const std::map<CycleType, Rational>& table) {
  Rational sum = 0;
  for (const auto& [t, v] : table) {
    if (v < 0) throw ValidationError("negative predicted density for " + cycle_type_label(t));
    sum += v;
  }
  if (sum != 1) throw ValidationError("predicted densities sum to " + sum.str() + ", not 1");
  std::map<CycleType, ClassRow> rows;
  for (const auto& [t, v] : table) rows[t] = ClassRow{t, 0, 0.0, v, 0.0, false};
  for (const auto& [t, n] : scan.counts) {
    auto [it, inserted] = rows.try_emplace(t, ClassRow{t, 0, 0.0, Rational(0), 0.0, true});
    it->second.count = n;
  }
  ClassComparison out;
  for (auto& [t, r] : rows) {
    r.frequency = scan.frequency(t);
    r.deviation = std::abs(r.frequency - static_cast<double>(r.predicted));
    out.max_deviation = std::max(out.max_deviation, r.deviation);
    out.rows.push_back(r);
  }
  return out;
}

unsigned multiplicative_order(std::uint64_t a, std::uint64_t n) {
  if (n < 2) throw ValidationError("modulus must be at least 2");
  a %= n;
  if (std::gcd(a, n) != 1) throw ValidationError("element is not a unit");
  unsigned k = 1;
  std::uint64_t x = a;
  while (x != 1) {
    x = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * a % n);
    ++k;
  }
  return k;
}

}  // namespace froblab
