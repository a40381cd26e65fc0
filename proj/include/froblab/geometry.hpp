#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "froblab/ff_core.hpp"
#include "froblab/poly.hpp"

namespace froblab {

/// Zero locus of a list of polynomials in affine n-space.
class AffineSystem {
 public:
  AffineSystem(FieldCtx ctx, std::vector<std::string> vars, std::vector<MultiPoly> equations);

  const FieldCtx& ctx() const { return ctx_; }
  std::size_t nvars() const { return vars_.size(); }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<MultiPoly>& equations() const { return equations_; }

 private:
  FieldCtx ctx_;
  std::vector<std::string> vars_;
  std::vector<MultiPoly> equations_;
};

/// C inside X x X^(q): equations in x_1..x_n followed by y_1..y_n.
class Correspondence {
 public:
  Correspondence(AffineSystem X, std::vector<MultiPoly> C, std::uint64_t q);

  const AffineSystem& X() const { return X_; }
  const std::vector<MultiPoly>& C() const { return C_; }
  std::uint64_t q() const { return q_.value(); }
  const PrimePower& q_power() const { return q_; }
  std::size_t n() const { return X_.nvars(); }

 private:
  AffineSystem X_;
  std::vector<MultiPoly> C_;
  PrimePower q_;
};

struct CountOptions {
  /// Cap on the number of points examined.
  std::uint64_t budget = kDefaultBudget;
  /// Threads splitting the first coordinate.
  unsigned workers = 1;
};

/// Points of field^n on X, by exhaustive enumeration.
std::uint64_t count_points(const AffineSystem& X, const FieldCtx& field, const CountOptions& opt = {});

/// #{x in F_{q^m}^n : x on X and (x, phi_q(x)) on C}. Enumerates when the
/// point budget allows; for n = 1 it falls back to the exact count
/// deg gcd(g, x^{q^m} - x), g the gcd of all equations after y -> x^q.
std::uint64_t twisted_count(const Correspondence& corr, unsigned m, const CountOptions& opt = {});

/// Number of common zeros over the algebraic closure of C(x, x^q) = 0 for a
/// single equation C on the affine line. Throws if that polynomial is zero.
std::uint64_t exact_twisted_count_univariate(const Correspondence& corr);

struct StabilizedCount {
  std::uint64_t count = 0;
  /// The maximum is repeated at every listed multiple of the first m reaching it.
  bool stabilized = false;
  /// Stabilized and the first maximizing m has a proper multiple in the list.
  bool confirmed = false;
  std::vector<std::pair<unsigned, std::uint64_t>> table;
};

/// Throws ValidationError unless m_list is divisor-closed, and
/// PropertyViolation if the table decreases along divisibility.
StabilizedCount stabilize(std::vector<std::pair<unsigned, std::uint64_t>> table);
void require_divisor_closed(std::span<const unsigned> m_list);

StabilizedCount stabilized_twisted_count(const Correspondence& corr, std::span<const unsigned> m_list,
                                         const CountOptions& opt = {});

/// Point counts of X over F_{p^{k m}} (k the degree of X's field) for m in the list.
StabilizedCount stabilized_point_count(const AffineSystem& X, std::span<const unsigned> m_list,
                                       const CountOptions& opt = {});

struct CurveDegrees {
  std::uint64_t deg_p1 = 0;
  /// Largest power of p dividing every exponent of x.
  std::uint64_t degins_p2_upper = 1;
};

/// For a single polynomial in (x, y).
CurveDegrees curve_degrees(const MultiPoly& c);

/// True when some twisted point over F_{q^m}, m in the list, makes at least
/// one of U (polynomials in the 2n variables of C) nonzero.
bool nonempty_open_check(const Correspondence& corr, std::span<const MultiPoly> U, std::span<const unsigned> m_list,
                         const CountOptions& opt = {});

/// Heuristic dominance check for n = 1: the share of random x (resp. y) in
/// F_{q^m} over which the fiber of C is nonempty in the algebraic closure.
struct DominanceSample {
  unsigned samples = 0;
  double p1_hit_rate = 0;
  double p2_hit_rate = 0;
};
DominanceSample sample_dominance(const Correspondence& corr, unsigned m, unsigned samples, std::uint64_t seed);

/// Certifies that X has finitely many points over the algebraic closure by
/// finding, for every variable, a nonzero eliminant in the ideal (iterated
/// resultants evaluated at random points). false means "not certified".
/// Supports n <= 3.
bool certify_zero_dimensional(const AffineSystem& X, std::uint64_t seed = 1);

/// The substituted equation C(x, x^q) for n = 1, over the correspondence's field.
UniPoly substitute_frobenius_graph(const MultiPoly& c, std::uint64_t q);

}  // namespace froblab
