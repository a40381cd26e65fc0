#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "froblab/extended_int.hpp"
#include "froblab/ff_core.hpp"

namespace froblab {

using Exponents = std::vector<std::uint64_t>;

/// Graded lexicographic order: total degree first, then lexicographic.
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Variable names plus optional aliases resolving to the same index.
struct VariableNames {
  std::vector<std::string> names;
  std::map<std::string, unsigned, std::less<>> aliases;

  VariableNames() = default;
  VariableNames(std::vector<std::string> n) : names(std::move(n)) {}  // NOLINT(implicit)
  VariableNames(std::initializer_list<std::string> n) : names(n) {}

  std::map<std::string, unsigned, std::less<>> lookup_table() const;
};

/// Sparse multivariate polynomial over one field.
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, FieldElement, GrlexLess>;

  MultiPoly() = default;
  MultiPoly(FieldCtx ctx, std::vector<std::string> vars);

  static MultiPoly constant(FieldCtx ctx, std::vector<std::string> vars, const FieldElement& c);
  static MultiPoly variable(FieldCtx ctx, std::vector<std::string> vars, std::size_t index);

  const FieldCtx& ctx() const { return ctx_; }
  std::size_t nvars() const { return vars_.size(); }
  const std::vector<std::string>& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c * x^e, merging with an existing monomial and dropping zeros.
  void add_term(const Exponents& e, const FieldElement& c);
  FieldElement coefficient(const Exponents& e) const;
  FieldElement constant_term() const;

  /// -inf for the zero polynomial.
  ExtInt degree_in(std::size_t var) const;
  ExtInt total_degree() const;

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator-() const;

  /// Same polynomial over another field of the same characteristic. Unless
  /// target is this field, every coefficient must lie in the prime field.
  MultiPoly rebase(const FieldCtx& target) const;

  /// Terms in descending graded-lex order, e.g. "x^2*y + 4*x + 1".
  std::string to_string() const;

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.ctx_ == b.ctx_ && a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

 private:
  void check_compatible(const MultiPoly& o) const;

  FieldCtx ctx_;
  std::vector<std::string> vars_;
  TermMap terms_;
};

/// Integer polynomial (exponent vector -> nonzero integer).
using IntPoly = std::map<Exponents, BigInt, GrlexLess>;

IntPoly parse_integer_poly(std::string_view text, const VariableNames& vars);
MultiPoly reduce_mod(const IntPoly& poly, const std::vector<std::string>& vars, const FieldCtx& ctx);

/// Integer literals are reduced mod p.
MultiPoly parse_poly(std::string_view text, const VariableNames& vars, const FieldCtx& ctx);

/// Point must have one coordinate per variable, all in the polynomial's field.
FieldElement eval(const MultiPoly& poly, std::span<const FieldElement> point);

struct DegreeMatrix {
  /// d[i][j] = degree of polys[j] in variable i.
  std::vector<std::vector<std::uint64_t>> d;
  /// Set when some input is the zero polynomial (its column is reported as 0).
  bool has_zero_polynomial = false;
};

DegreeMatrix per_variable_degrees(std::span<const MultiPoly> polys);

/// Applies x -> x^q to every coefficient: the equations of the twisted variety.
MultiPoly coeff_frobenius_twist(const MultiPoly& poly, std::uint64_t q);

// ---------------------------------------------------------------------------
// Univariate polynomials

/// Dense univariate polynomial over one field, low to high, trimmed.
class UniPoly {
 public:
  explicit UniPoly(FieldCtx ctx) : ctx_(ctx) {}
  UniPoly(FieldCtx ctx, std::vector<FieldElement> coeffs);

  static UniPoly x(const FieldCtx& ctx);
  static UniPoly monomial(const FieldCtx& ctx, std::size_t degree, const FieldElement& c);

  const FieldCtx& ctx() const { return ctx_; }
  const std::vector<FieldElement>& coeffs() const { return c_; }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  FieldElement leading() const { return c_.back(); }
  FieldElement coeff(std::size_t i) const { return i < c_.size() ? c_[i] : ctx_.zero(); }
  FieldElement operator()(const FieldElement& x) const;

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scaled(const FieldElement& c) const;
  UniPoly monic() const;
  UniPoly derivative() const;

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.ctx_ == b.ctx_ && a.c_ == b.c_; }

 private:
  void trim();
  FieldCtx ctx_;
  std::vector<FieldElement> c_;
};

void divmod(const UniPoly& a, const UniPoly& b, UniPoly& q, UniPoly& r);
UniPoly operator%(const UniPoly& a, const UniPoly& b);
UniPoly operator/(const UniPoly& a, const UniPoly& b);
/// Monic gcd.
UniPoly gcd(const UniPoly& a, const UniPoly& b);
UniPoly powmod(const UniPoly& base, const BigInt& e, const UniPoly& m);

/// Requires a polynomial in exactly one variable.
UniPoly to_univariate(const MultiPoly& poly);

/// Resultant through the Sylvester matrix with the given formal degrees
/// (leading coefficients may vanish).
FieldElement sylvester_resultant(std::span<const FieldElement> a, std::span<const FieldElement> b);

/// Number of distinct roots in the algebraic closure; throws on the zero polynomial.
std::uint64_t distinct_root_count(const MultiPoly& h);
std::uint64_t distinct_root_count(const UniPoly& h);

/// Factor degree -> number of monic irreducible factors of that degree.
using DegreeCounts = std::map<unsigned, unsigned>;

class NotSquarefree : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Distinct-degree factorization of a squarefree polynomial over F_Q by
/// repeated gcd with x^{Q^d} - x. Throws NotSquarefree otherwise.
DegreeCounts distinct_degree_factor(const UniPoly& g);
/// Same over F_p, coefficients as residues low to high (p < 2^31).
DegreeCounts distinct_degree_factor_mod_p(std::vector<std::uint64_t> g, std::uint64_t p);

namespace detail {
/// Field-generic code paths, bypassing the prime-field kernel; exposed for cross-checks.
std::uint64_t distinct_root_count_generic(const UniPoly& h);
DegreeCounts distinct_degree_factor_generic(const UniPoly& g);
}  // namespace detail

}  // namespace froblab
