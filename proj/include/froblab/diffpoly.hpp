#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "froblab/extended_int.hpp"
#include "froblab/ff_core.hpp"
#include "froblab/poly.hpp"

namespace froblab {

/// sigma^shift(x_var) raised to exp > 0.
struct ShiftFactor {
  unsigned var = 0;
  unsigned shift = 0;
  std::uint64_t exp = 0;
  friend auto operator<=>(const ShiftFactor&, const ShiftFactor&) = default;
};

/// Sorted by (var, shift) with no repeated pair.
using ShiftMonomial = std::vector<ShiftFactor>;

/// Polynomial in the shifted variables sigma^j(x_i).
class DiffPoly {
 public:
  using TermMap = std::map<ShiftMonomial, FieldElement>;

  DiffPoly() = default;
  DiffPoly(FieldCtx ctx, std::vector<std::string> vars);

  const FieldCtx& ctx() const { return ctx_; }
  std::size_t nvars() const { return vars_.size(); }
  const std::vector<std::string>& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Monomial need not be normalized; zero coefficients are dropped.
  void add_term(ShiftMonomial m, const FieldElement& c);

  /// Largest shift of x_var carrying a positive exponent; -inf if x_var never occurs.
  ExtInt order(std::size_t var) const;
  /// Largest total degree of a term in the shifted copies of x_var alone.
  std::uint64_t shifted_degree(std::size_t var) const;

  std::string to_string() const;

  friend bool operator==(const DiffPoly&, const DiffPoly&) = default;

 private:
  FieldCtx ctx_;
  std::vector<std::string> vars_;
  TermMap terms_;
};

/// Polynomial grammar plus factors s^j(VAR) and s(VAR); s^0(x) is x.
DiffPoly parse_diffpoly(std::string_view text, const VariableNames& vars, const FieldCtx& ctx);

/// h[i][j] = order of x_i in system[j].
using OrderMatrix = std::vector<std::vector<ExtInt>>;
OrderMatrix order_matrix(std::span<const DiffPoly> system);

/// Max over permutations of sum_i h[i][theta(i)], -inf absorbing.
/// Exhaustive for n <= 9, assignment algorithm above.
ExtInt jacobi_bound(const OrderMatrix& h);

/// Permanent of a square matrix of nonnegative integers (Ryser, n <= 20).
BigInt bezout_permanent(const std::vector<std::vector<BigInt>>& d);
BigInt bezout_permanent(const std::vector<std::vector<std::uint64_t>>& d);

/// sigma^j(x_i) -> x_i^{q^j}. Throws ValidationError if an exponent leaves 64 bits.
MultiPoly specialize_frobenius(const DiffPoly& P, std::uint64_t q);

/// deg_{x_var} of specialize_frobenius(P, q), computed exactly without the
/// 64-bit limit. Throws when x_var is absent.
BigInt specialized_degree(const DiffPoly& P, std::size_t var, std::uint64_t q);

struct DegreeGrowth {
  std::vector<std::uint64_t> q;
  std::vector<BigInt> degree;
  /// log_q(degree), one per q.
  std::vector<double> log_degree;
  /// The order of the variable, which the sequence approaches.
  std::int64_t limit = 0;
};

DegreeGrowth degree_growth_exponent(const DiffPoly& P, std::size_t var, std::span<const std::uint64_t> qs);

namespace detail {
ExtInt jacobi_bound_exhaustive(const OrderMatrix& h);
ExtInt jacobi_bound_assignment(const OrderMatrix& h);
}  // namespace detail

}  // namespace froblab
