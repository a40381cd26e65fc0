#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "froblab/log_field.hpp"
#include "froblab/poly.hpp"

namespace froblab::detail {

/// Polynomials over one enumerable field, compiled for repeated evaluation at
/// points given by element indices. With twist_q != 0 the polynomials have
/// 2n variables and variable n + i is read as the q-th power of variable i,
/// so y_i -> x_i^q costs nothing per point.
class PointEvaluator {
 public:
  PointEvaluator(const FieldCtx& field, std::span<const MultiPoly> polys, std::size_t ncoords,
                 std::uint64_t twist_q = 0);

  struct Scratch {
    std::vector<LogField::Log> logs;
    std::vector<FieldElement> elems;
    std::vector<bool> zero;
  };

  std::size_t ncoords() const { return ncoords_; }
  std::size_t size() const { return polys_.size(); }
  bool uses_log_tables() const { return log_ != nullptr; }

  void load(std::span<const std::uint64_t> idx, Scratch& s) const;
  bool vanishes(std::size_t j, const Scratch& s) const;
  bool all_vanish(const Scratch& s) const;
  /// Index of the value of polynomial j.
  std::uint64_t value_index(std::size_t j, const Scratch& s) const;

 private:
  struct Factor {
    std::uint32_t coord;
    std::uint64_t e_mod;  // exponent reduced mod (Q - 1); the exponent itself is positive
  };
  struct Term {
    LogField::Log clog;
    FieldElement c;
    std::vector<Factor> factors;
  };
  struct Compiled {
    std::vector<Term> terms;
  };

  LogField::Log eval_log(const Compiled& p, const Scratch& s) const;
  FieldElement eval_generic(const Compiled& p, const Scratch& s) const;

  FieldCtx field_;
  const LogField* log_ = nullptr;
  std::size_t ncoords_ = 0;
  std::vector<Compiled> polys_;
};

}  // namespace froblab::detail
