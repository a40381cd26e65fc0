#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "froblab/ff_core.hpp"
#include "froblab/poly.hpp"

namespace froblab {

/// Polynomial self-map of affine n-space, one component per coordinate.
class PolyMap {
 public:
  PolyMap(FieldCtx ctx, std::vector<MultiPoly> components);

  const FieldCtx& ctx() const { return ctx_; }
  std::size_t nvars() const { return components_.size(); }
  const std::vector<MultiPoly>& components() const { return components_; }

  /// Same map over a field containing the coefficients.
  PolyMap rebase(const FieldCtx& field) const;
  std::vector<FieldElement> operator()(std::span<const FieldElement> x) const;

 private:
  FieldCtx ctx_;
  std::vector<MultiPoly> components_;
};

/// Points of field^n packed as sum_i index(x_i) * Q^i, kept sorted.
struct PointSet {
  FieldCtx field;
  std::size_t n = 0;
  std::vector<std::uint64_t> packed;

  std::size_t size() const { return packed.size(); }
  std::vector<FieldElement> point(std::size_t i) const;
  bool contains(std::span<const FieldElement> x) const;
};

std::uint64_t pack_point(const FieldCtx& field, std::span<const FieldElement> x);
std::vector<FieldElement> unpack_point(const FieldCtx& field, std::size_t n, std::uint64_t packed);

struct Orbit {
  std::uint64_t tail = 0;
  std::uint64_t cycle = 0;
};

/// Preperiod and period of x under f (x in f's field). Throws BudgetExceeded
/// when more than max_steps iterations are needed.
Orbit orbit(const PolyMap& f, std::span<const FieldElement> x, std::uint64_t max_steps);

/// States of the functional graph that full traversal may visit.
constexpr std::uint64_t kMaxGraphStates = 10'000'000;

/// Points of field^n lying on a cycle of f.
PointSet periodic_points(const PolyMap& f, const FieldCtx& field);

/// Solutions in F_{q^m}^n of f_i(x) = x_i^{q^n}. f's coefficients must be fixed
/// by phi_q. The enumeration is split over `workers` threads.
PointSet twisted_fixed_points(const PolyMap& f, std::uint64_t q, unsigned n, unsigned m,
                              std::uint64_t budget = kDefaultBudget, unsigned workers = 1);

struct PeriodicityReport {
  std::uint64_t solutions = 0;
  std::uint64_t verified = 0;
  bool all_verified() const { return solutions == verified; }
};

/// For each twisted fixed point x, with m' the least divisor of m such that
/// phi_{q^m'}(x) = x, checks f^{m'}(x) = x.
PeriodicityReport periodicity_report(const PolyMap& f, std::uint64_t q, unsigned n, unsigned m,
                                     std::uint64_t budget = kDefaultBudget, unsigned workers = 1);
bool verify_periodicity_theorem(const PolyMap& f, std::uint64_t q, unsigned n, unsigned m,
                                std::uint64_t budget = kDefaultBudget);

namespace detail {
/// The same set through one orbit computation per point.
PointSet periodic_points_by_orbits(const PolyMap& f, const FieldCtx& field);
}  // namespace detail

}  // namespace froblab
