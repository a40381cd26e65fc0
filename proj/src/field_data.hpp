#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "froblab/ff_core.hpp"
#include "froblab/log_field.hpp"

namespace froblab::detail {

/// Immutable description of F_{p^k} plus lazily built lookup tables.
class FieldData {
 public:
  using Coeffs = FieldElement::Coeffs;

  FieldData(std::uint64_t p, unsigned k, std::vector<std::uint32_t> modulus);

  std::uint64_t p;
  unsigned k;
  BigInt size;
  std::vector<std::uint32_t> modulus;  // k + 1 entries, monic
  std::string label;
  /// Column i holds (t^i)^p reduced; k x k row-major by column.
  std::vector<std::uint32_t> frob_columns;

  void add(const Coeffs& a, const Coeffs& b, Coeffs& out) const;
  void sub(const Coeffs& a, const Coeffs& b, Coeffs& out) const;
  void neg(const Coeffs& a, Coeffs& out) const;
  void mul(const Coeffs& a, const Coeffs& b, Coeffs& out) const;
  /// out = sum_i a_i * col_i where cols is a k x k column table.
  void apply_linear(const std::vector<std::uint32_t>& cols, const Coeffs& a, Coeffs& out) const;

  const LogField* log_field(const FieldCtx& self) const;

 private:
  mutable std::once_flag log_once_;
  mutable std::unique_ptr<LogField> log_;
};

}  // namespace froblab::detail
