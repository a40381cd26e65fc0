#include "froblab/diffpoly.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "expr_parser.hpp"

namespace froblab {

namespace {

ShiftMonomial normalize(ShiftMonomial m) {
  std::sort(m.begin(), m.end(), [](const ShiftFactor& a, const ShiftFactor& b) {
    return std::pair(a.var, a.shift) < std::pair(b.var, b.shift);
  });
  ShiftMonomial out;
  for (const auto& f : m) {
    if (f.exp == 0) continue;
    if (!out.empty() && out.back().var == f.var && out.back().shift == f.shift) {
      out.back().exp += f.exp;
    } else {
      out.push_back(f);
    }
  }
  return out;
}

void require_square(const OrderMatrix& h) {
  for (const auto& row : h)
    if (row.size() != h.size())
      throw ValidationError("order matrix must be square (" + std::to_string(h.size()) + " rows, a row of length " +
                            std::to_string(row.size()) + ")");
}

}  // namespace

DiffPoly::DiffPoly(FieldCtx ctx, std::vector<std::string> vars) : ctx_(ctx), vars_(std::move(vars)) {}

void DiffPoly::add_term(ShiftMonomial m, const FieldElement& c) {
  if (c.ctx() != ctx_) throw ValidationError("coefficient field mismatch in difference polynomial");
  if (c.is_zero()) return;
  m = normalize(std::move(m));
  for (const auto& f : m)
    if (f.var >= nvars()) throw ValidationError("variable index out of range");
  auto [it, inserted] = terms_.emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ExtInt DiffPoly::order(std::size_t var) const {
  if (var >= nvars()) throw ValidationError("variable index out of range");
  ExtInt best = ExtInt::neg_inf();
  for (const auto& [m, c] : terms_)
    for (const auto& f : m)
      if (f.var == var) best = std::max(best, ExtInt(f.shift));
  return best;
}

std::uint64_t DiffPoly::shifted_degree(std::size_t var) const {
  std::uint64_t best = 0;
  for (const auto& [m, c] : terms_) {
    std::uint64_t s = 0;
    for (const auto& f : m)
      if (f.var == var) s += f.exp;
    best = std::max(best, s);
  }
  return best;
}

std::string DiffPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string mono;
    for (const auto& f : m) {
      if (!mono.empty()) mono += "*";
      std::string v = f.shift == 0 ? vars_[f.var]
                      : f.shift == 1 ? "s(" + vars_[f.var] + ")"
                                     : "s^" + std::to_string(f.shift) + "(" + vars_[f.var] + ")";
      mono += v;
      if (f.exp > 1) mono += "^" + std::to_string(f.exp);
    }
    std::string coeff = c.in_prime_field() ? c.to_string() : "(" + c.to_string() + ")";
    if (!out.empty()) out += " + ";
    if (mono.empty()) {
      out += coeff;
    } else if (c.is_one()) {
      out += mono;
    } else {
      out += coeff + "*" + mono;
    }
  }
  return out;
}

DiffPoly parse_diffpoly(std::string_view text, const VariableNames& vars, const FieldCtx& ctx) {
  auto parsed = detail::parse_expression(text, vars.lookup_table(), {.allow_shifts = true});
  DiffPoly out(ctx, vars.names);
  for (const auto& [mono, c] : parsed) {
    ShiftMonomial m;
    for (const auto& sp : mono) m.push_back({sp.var, sp.shift, sp.exp});
    out.add_term(std::move(m), ctx.from_bigint(c));
  }
  return out;
}

OrderMatrix order_matrix(std::span<const DiffPoly> system) {
  if (system.empty()) throw ValidationError("order_matrix of an empty system");
  const std::size_t n = system[0].nvars();
  OrderMatrix h(n, std::vector<ExtInt>(system.size()));
  for (std::size_t j = 0; j < system.size(); ++j) {
    if (system[j].nvars() != n) throw ValidationError("difference polynomials use different variable sets");
    for (std::size_t i = 0; i < n; ++i) h[i][j] = system[j].order(i);
  }
  return h;
}

namespace detail {

ExtInt jacobi_bound_exhaustive(const OrderMatrix& h) {
  require_square(h);
  const std::size_t n = h.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  ExtInt best = ExtInt::neg_inf();
  do {
    ExtInt s = 0;
    for (std::size_t i = 0; i < n && s.is_finite(); ++i) s += h[i][perm[i]];
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Hungarian algorithm (potentials, O(n^3)) minimizing -h; forbidden entries
// get a cost larger than any finite assignment could accumulate.
ExtInt jacobi_bound_assignment(const OrderMatrix& h) {
  require_square(h);
  const std::size_t n = h.size();
  if (n == 0) return 0;
  std::int64_t max_abs = 0;
  for (const auto& row : h)
    for (auto v : row)
      if (v.is_finite()) max_abs = std::max(max_abs, v.value() < 0 ? -v.value() : v.value());
  const auto nn = static_cast<std::int64_t>(n);
  if (max_abs > (std::int64_t{1} << 40) / (nn * nn + 1)) throw ValidationError("order matrix entries too large");
  const std::int64_t big = 2 * nn * max_abs + 1;

  auto cost = [&](std::size_t i, std::size_t j) { return h[i][j].is_finite() ? -h[i][j].value() : big; };

  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);  // match[col] = row, 1-based
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      std::int64_t delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  ExtInt total = 0;
  for (std::size_t j = 1; j <= n; ++j) total += h[match[j] - 1][j - 1];
  return total;
}

}  // namespace detail

ExtInt jacobi_bound(const OrderMatrix& h) {
  require_square(h);
  return h.size() <= 9 ? detail::jacobi_bound_exhaustive(h) : detail::jacobi_bound_assignment(h);
}

BigInt bezout_permanent(const std::vector<std::vector<BigInt>>& d) {
  const std::size_t n = d.size();
  for (const auto& row : d) {
    if (row.size() != n) throw ValidationError("degree matrix must be square");
    for (const auto& x : row)
      if (x < 0) throw ValidationError("degree matrix entries must be nonnegative");
  }
  if (n > 20) throw BudgetExceeded("permanent of a " + std::to_string(n) + "x" + std::to_string(n) + " matrix exceeds n <= 20");
  if (n == 0) return 1;

  // Ryser: perm = (-1)^n sum_S (-1)^{|S|} prod_i sum_{j in S} d[i][j], with
  // subsets visited in Gray-code order so each step changes one column.
  std::vector<BigInt> row_sum(n, 0);
  BigInt total = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const unsigned col = static_cast<unsigned>(std::countr_zero(k));
    gray ^= std::uint64_t{1} << col;
    const bool added = (gray >> col) & 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (added) {
        row_sum[i] += d[i][col];
      } else {
        row_sum[i] -= d[i][col];
      }
    }
    BigInt prod = 1;
    for (std::size_t i = 0; i < n && prod != 0; ++i) prod *= row_sum[i];
    if ((n - std::popcount(gray)) % 2 == 0) {
      total += prod;
    } else {
      total -= prod;
    }
  }
  return total;
}

BigInt bezout_permanent(const std::vector<std::vector<std::uint64_t>>& d) {
  std::vector<std::vector<BigInt>> b;
  for (const auto& row : d) b.emplace_back(row.begin(), row.end());
  return bezout_permanent(b);
}

MultiPoly specialize_frobenius(const DiffPoly& P, std::uint64_t q) {
  const PrimePower qq = to_prime_power(q);
  if (qq.p != P.ctx().characteristic())
    throw ValidationError("q = " + std::to_string(q) + " is not a power of the characteristic " +
                          std::to_string(P.ctx().characteristic()));
  MultiPoly out(P.ctx(), P.vars());
  for (const auto& [m, c] : P.terms()) {
    Exponents e(P.nvars(), 0);
    for (const auto& f : m) {
      BigInt add = BigInt(f.exp) * boost::multiprecision::pow(BigInt(q), f.shift);
      BigInt sum = BigInt(e[f.var]) + add;
      if (sum > std::numeric_limits<std::uint64_t>::max()) {
        DiffPoly single(P.ctx(), P.vars());
        single.add_term(m, c);
        throw ValidationError("exponent overflow specializing term " + single.to_string() + " at q = " +
                              std::to_string(q));
      }
      e[f.var] = static_cast<std::uint64_t>(sum);
    }
    out.add_term(e, c);
  }
  return out;
}

BigInt specialized_degree(const DiffPoly& P, std::size_t var, std::uint64_t q) {
  if (!P.order(var).is_finite())
    throw ValidationError("variable " + P.vars()[var] + " does not occur (order -inf)");
  // Distinct shifted monomials can collide after specialization, so group
  // by the full specialized exponent vector before reading off the degree.
  std::map<std::vector<BigInt>, FieldElement> combined;
  for (const auto& [m, c] : P.terms()) {
    std::vector<BigInt> e(P.nvars(), 0);
    for (const auto& f : m) e[f.var] += BigInt(f.exp) * boost::multiprecision::pow(BigInt(q), f.shift);
    auto [it, inserted] = combined.emplace(std::move(e), c);
    if (!inserted) it->second += c;
  }
  BigInt best = -1;
  for (const auto& [e, c] : combined)
    if (!c.is_zero()) best = std::max(best, e[var]);
  if (best < 0) throw ValidationError("specialization is the zero polynomial");
  return best;
}

DegreeGrowth degree_growth_exponent(const DiffPoly& P, std::size_t var, std::span<const std::uint64_t> qs) {
  ExtInt h = P.order(var);
  if (!h.is_finite()) throw ValidationError("variable " + P.vars().at(var) + " does not occur (order -inf)");
  DegreeGrowth out;
  out.limit = h.value();
  std::uint64_t prev = 0;
  for (auto q : qs) {
    if (q <= prev) throw ValidationError("q list must be strictly increasing");
    if (to_prime_power(q).p != P.ctx().characteristic())
      throw ValidationError("q = " + std::to_string(q) + " is not a power of the characteristic");
    prev = q;
    BigInt d = specialized_degree(P, var, q);
    out.q.push_back(q);
    out.degree.push_back(d);
    out.log_degree.push_back(d == 0 ? -std::numeric_limits<double>::infinity()
                                    : std::log(d.convert_to<double>()) / std::log(static_cast<double>(q)));
  }
  return out;
}

}  // namespace froblab
