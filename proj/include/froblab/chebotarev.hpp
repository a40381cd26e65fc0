#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "froblab/ff_core.hpp"

namespace froblab {

/// Integer polynomial in one variable, coefficients low to high, trimmed.
class IntUniPoly {
 public:
  IntUniPoly() = default;
  explicit IntUniPoly(std::vector<BigInt> coeffs);

  const std::vector<BigInt>& coeffs() const { return c_; }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const BigInt& lead() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  IntUniPoly derivative() const;
  /// Residues mod p, low to high, trimmed.
  std::vector<std::uint64_t> mod_p(std::uint64_t p) const;
  std::string to_string(const std::string& var = "x") const;

 private:
  std::vector<BigInt> c_;
};

/// Parses an integer polynomial in the single variable `var`.
IntUniPoly parse_int_unipoly(std::string_view text, const std::string& var = "x");

/// Sylvester resultant by fraction-free elimination.
BigInt resultant(const IntUniPoly& a, const IntUniPoly& b);
/// (-1)^{n(n-1)/2} Res(g, g') / lead(g).
BigInt discriminant(const IntUniPoly& g);

/// Factor degrees in ascending order, e.g. {1, 2}.
using CycleType = std::vector<unsigned>;
/// "1,2"
std::string cycle_type_label(const CycleType& t);
CycleType parse_cycle_type(std::string_view text);

struct SplittingRecord {
  std::uint64_t p = 0;
  CycleType cycle_type;  // empty when ramified
  bool ramified = false;
};

/// Splitting of a monic g modulo the prime p < 2^31. Ramified means g mod p is
/// not squarefree.
SplittingRecord splitting_type(const IntUniPoly& g, std::uint64_t p);

/// Primes up to n.
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

struct DensityScan {
  std::uint64_t P_max = 0;
  std::map<CycleType, std::uint64_t> counts;
  std::vector<std::uint64_t> ramified;
  std::uint64_t unramified = 0;

  double frequency(const CycleType& t) const;
};

/// Splitting types over all primes up to P_max (at least 100), primes split
/// into contiguous ranges across workers.
DensityScan density_scan(const IntUniPoly& g, std::uint64_t P_max, unsigned workers = 1);

struct ClassRow {
  CycleType type;
  std::uint64_t count = 0;
  double frequency = 0;
  Rational predicted;
  double deviation = 0;
  /// Observed but absent from the table; predicted is then 0.
  bool unexpected = false;
};

struct ClassComparison {
  std::vector<ClassRow> rows;  // ordered by type
  double max_deviation = 0;
  std::vector<CycleType> unexpected() const;
};

/// Throws ValidationError unless the predicted densities sum to exactly 1.
ClassComparison compare_to_classes(const DensityScan& scan, const std::map<CycleType, Rational>& table);

/// Order of a in (Z/n)^*; a and n must be coprime.
unsigned multiplicative_order(std::uint64_t a, std::uint64_t n);

}  // namespace froblab
