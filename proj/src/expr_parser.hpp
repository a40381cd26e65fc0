#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "froblab/ff_core.hpp"

namespace froblab::detail {

/// (variable, shift) raised to a positive power. Ordinary polynomials only
/// ever use shift 0.
struct ShiftPower {
  unsigned var = 0;
  unsigned shift = 0;
  std::uint64_t exp = 0;
  friend auto operator<=>(const ShiftPower&, const ShiftPower&) = default;
};

/// Sorted by (var, shift), no zero exponents.
using ShiftMonomial = std::vector<ShiftPower>;
using ShiftIntPoly = std::map<ShiftMonomial, BigInt>;

struct ParseOptions {
  bool allow_shifts = false;
};

/// Parses the polynomial grammar
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := INT | VAR ['^' INT] | 's^' INT '(' VAR ')' ['^' INT] | '(' expr ')'
/// into an integer polynomial in shifted variables. Names map to variable
/// indices (several names may alias one index).
ShiftIntPoly parse_expression(std::string_view text, const std::map<std::string, unsigned, std::less<>>& names,
                              ParseOptions options = {});

}  // namespace froblab::detail
