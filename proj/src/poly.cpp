#include "froblab/poly.hpp"

#include <algorithm>
#include <unordered_map>

#include "expr_parser.hpp"
#include "froblab/fp_poly.hpp"

namespace froblab {

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const {
  unsigned __int128 da = 0;
  unsigned __int128 db = 0;
  for (auto e : a) da += e;
  for (auto e : b) db += e;
  if (da != db) return da < db;
  return a < b;
}

std::map<std::string, unsigned, std::less<>> VariableNames::lookup_table() const {
  std::map<std::string, unsigned, std::less<>> out;
  for (unsigned i = 0; i < names.size(); ++i) {
    if (!out.emplace(names[i], i).second) throw ValidationError("duplicate variable name '" + names[i] + "'");
  }
  for (const auto& [alias, idx] : aliases) {
    if (idx >= names.size()) throw ValidationError("alias '" + alias + "' refers to a missing variable");
    auto [it, inserted] = out.emplace(alias, idx);
    if (!inserted && it->second != idx) throw ValidationError("alias '" + alias + "' is ambiguous");
  }
  return out;
}

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly::MultiPoly(FieldCtx ctx, std::vector<std::string> vars) : ctx_(ctx), vars_(std::move(vars)) {}

MultiPoly MultiPoly::constant(FieldCtx ctx, std::vector<std::string> vars, const FieldElement& c) {
  MultiPoly r(ctx, std::move(vars));
  r.add_term(Exponents(r.nvars(), 0), c);
  return r;
}

MultiPoly MultiPoly::variable(FieldCtx ctx, std::vector<std::string> vars, std::size_t index) {
  MultiPoly r(ctx, std::move(vars));
  Exponents e(r.nvars(), 0);
  e.at(index) = 1;
  r.add_term(e, ctx.one());
  return r;
}

void MultiPoly::add_term(const Exponents& e, const FieldElement& c) {
  if (e.size() != nvars()) throw ValidationError("exponent vector has wrong arity");
  if (c.ctx() != ctx_) throw ValidationError("coefficient from " + c.ctx().label() + " in a polynomial over " + ctx_.label());
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

FieldElement MultiPoly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? ctx_.zero() : it->second;
}

FieldElement MultiPoly::constant_term() const { return coefficient(Exponents(nvars(), 0)); }

ExtInt MultiPoly::degree_in(std::size_t var) const {
  if (var >= nvars()) throw ValidationError("variable index out of range");
  if (terms_.empty()) return ExtInt::neg_inf();
  std::uint64_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return ExtInt(static_cast<std::int64_t>(d));
}

ExtInt MultiPoly::total_degree() const {
  if (terms_.empty()) return ExtInt::neg_inf();
  std::uint64_t d = 0;
  for (const auto& [e, c] : terms_) {
    std::uint64_t s = 0;
    for (auto x : e) s += x;
    d = std::max(d, s);
  }
  return ExtInt(static_cast<std::int64_t>(d));
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
  if (ctx_ != o.ctx_) throw ValidationError("polynomials over different fields");
  if (vars_.size() != o.vars_.size()) throw ValidationError("polynomials in different numbers of variables");
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  check_compatible(o);
  MultiPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + (-o); }

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(ctx_, vars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  check_compatible(o);
  MultiPoly r(ctx_, vars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e(nvars());
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (ea[i] > std::numeric_limits<std::uint64_t>::max() - eb[i]) throw ValidationError("exponent overflow");
        e[i] = ea[i] + eb[i];
      }
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

MultiPoly MultiPoly::rebase(const FieldCtx& target) const {
  if (target == ctx_) return *this;
  if (target.characteristic() != ctx_.characteristic())
    throw ValidationError("cannot move a polynomial from " + ctx_.label() + " to " + target.label() +
                          ": characteristic mismatch");
  MultiPoly r(target, vars_);
  for (const auto& [e, c] : terms_) {
    if (!c.in_prime_field())
      throw ValidationError("coefficient " + c.to_string() + " of a polynomial over " + ctx_.label() +
                            " has no canonical image in " + target.label());
    r.terms_.emplace(e, target.from_int(c.coeffs()[0]));
  }
  return r;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    std::string coeff = c.to_string();
    if (!c.in_prime_field()) coeff = "(" + coeff + ")";
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

// ---------------------------------------------------------------------------
// Parsing

IntPoly parse_integer_poly(std::string_view text, const VariableNames& vars) {
  auto parsed = detail::parse_expression(text, vars.lookup_table());
  IntPoly out;
  for (const auto& [mono, c] : parsed) {
    Exponents e(vars.names.size(), 0);
    for (const auto& sp : mono) e[sp.var] += sp.exp;
    out[e] += c;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

MultiPoly reduce_mod(const IntPoly& poly, const std::vector<std::string>& vars, const FieldCtx& ctx) {
  MultiPoly r(ctx, vars);
  for (const auto& [e, c] : poly) r.add_term(e, ctx.from_bigint(c));
  return r;
}

MultiPoly parse_poly(std::string_view text, const VariableNames& vars, const FieldCtx& ctx) {
  return reduce_mod(parse_integer_poly(text, vars), vars.names, ctx);
}

// ---------------------------------------------------------------------------
// Evaluation and degree data

FieldElement eval(const MultiPoly& poly, std::span<const FieldElement> point) {
  if (point.size() != poly.nvars())
    throw ValidationError("point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                          std::to_string(poly.nvars()) + " variables");
  for (const auto& x : point)
    if (x.ctx() != poly.ctx()) throw ValidationError("point and polynomial live in different fields");

  std::vector<std::unordered_map<std::uint64_t, FieldElement>> powers(poly.nvars());
  auto power = [&](std::size_t var, std::uint64_t e) -> const FieldElement& {
    auto it = powers[var].find(e);
    if (it == powers[var].end()) it = powers[var].emplace(e, point[var].pow(e)).first;
    return it->second;
  };
  FieldElement acc = poly.ctx().zero();
  for (const auto& [e, c] : poly.terms()) {
    FieldElement t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) t *= power(i, e[i]);
    acc += t;
  }
  return acc;
}

DegreeMatrix per_variable_degrees(std::span<const MultiPoly> polys) {
  if (polys.empty()) throw ValidationError("per_variable_degrees needs at least one polynomial");
  const std::size_t n = polys[0].nvars();
  DegreeMatrix out;
  out.d.assign(n, std::vector<std::uint64_t>(polys.size(), 0));
  for (std::size_t j = 0; j < polys.size(); ++j) {
    if (polys[j].nvars() != n || polys[j].ctx() != polys[0].ctx())
      throw ValidationError("polynomials must share variables and field");
    if (polys[j].is_zero()) {
      out.has_zero_polynomial = true;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) out.d[i][j] = static_cast<std::uint64_t>(polys[j].degree_in(i).value());
  }
  return out;
}

MultiPoly coeff_frobenius_twist(const MultiPoly& poly, std::uint64_t q) {
  FrobeniusMap phi(poly.ctx(), q);
  MultiPoly r(poly.ctx(), poly.vars());
  for (const auto& [e, c] : poly.terms()) r.add_term(e, phi(c));
  return r;
}

// ---------------------------------------------------------------------------
// UniPoly

UniPoly::UniPoly(FieldCtx ctx, std::vector<FieldElement> coeffs) : ctx_(ctx), c_(std::move(coeffs)) {
  for (const auto& c : c_)
    if (c.ctx() != ctx_) throw ValidationError("coefficient field mismatch in univariate polynomial");
  trim();
}

void UniPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

UniPoly UniPoly::x(const FieldCtx& ctx) { return UniPoly(ctx, {ctx.zero(), ctx.one()}); }

UniPoly UniPoly::monomial(const FieldCtx& ctx, std::size_t degree, const FieldElement& c) {
  std::vector<FieldElement> v(degree + 1, ctx.zero());
  v[degree] = c;
  return UniPoly(ctx, std::move(v));
}

FieldElement UniPoly::operator()(const FieldElement& x) const {
  FieldElement acc = ctx_.zero();
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<FieldElement> v(std::max(c_.size(), o.c_.size()), ctx_.zero());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) + o.coeff(i);
  return UniPoly(ctx_, std::move(v));
}

UniPoly UniPoly::operator-(const UniPoly& o) const {
  std::vector<FieldElement> v(std::max(c_.size(), o.c_.size()), ctx_.zero());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) - o.coeff(i);
  return UniPoly(ctx_, std::move(v));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (is_zero() || o.is_zero()) return UniPoly(ctx_);
  std::vector<FieldElement> v(c_.size() + o.c_.size() - 1, ctx_.zero());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
  }
  return UniPoly(ctx_, std::move(v));
}

UniPoly UniPoly::scaled(const FieldElement& c) const {
  std::vector<FieldElement> v = c_;
  for (auto& x : v) x *= c;
  return UniPoly(ctx_, std::move(v));
}

UniPoly UniPoly::monic() const {
  if (is_zero() || leading().is_one()) return *this;
  return scaled(leading().inverse());
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return UniPoly(ctx_);
  std::vector<FieldElement> v(c_.size() - 1, ctx_.zero());
  for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * ctx_.from_int(static_cast<std::int64_t>(i % ctx_.characteristic()));
  return UniPoly(ctx_, std::move(v));
}

void divmod(const UniPoly& a, const UniPoly& b, UniPoly& q, UniPoly& r) {
  if (b.is_zero()) throw ValidationError("polynomial division by zero");
  const FieldCtx& ctx = a.ctx();
  std::vector<FieldElement> rem = a.coeffs();
  if (rem.size() < b.coeffs().size()) {
    q = UniPoly(ctx);
    r = a;
    return;
  }
  const std::size_t db = static_cast<std::size_t>(b.degree());
  const FieldElement inv = b.leading().inverse();
  std::vector<FieldElement> quo(rem.size() - db, ctx.zero());
  for (std::size_t i = rem.size(); i-- > db;) {
    if (rem[i].is_zero()) continue;
    FieldElement c = rem[i] * inv;
    quo[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) rem[i - db + j] -= c * b.coeffs()[j];
  }
  rem.resize(db);
  q = UniPoly(ctx, std::move(quo));
  r = UniPoly(ctx, std::move(rem));
}

UniPoly operator%(const UniPoly& a, const UniPoly& b) {
  UniPoly q(a.ctx());
  UniPoly r(a.ctx());
  divmod(a, b, q, r);
  return r;
}

UniPoly operator/(const UniPoly& a, const UniPoly& b) {
  UniPoly q(a.ctx());
  UniPoly r(a.ctx());
  divmod(a, b, q, r);
  return q;
}

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly x = a;
  UniPoly y = b;
  while (!y.is_zero()) {
    UniPoly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

UniPoly powmod(const UniPoly& base, const BigInt& e, const UniPoly& m) {
  const FieldCtx& ctx = base.ctx();
  UniPoly r = UniPoly(ctx, {ctx.one()}) % m;
  UniPoly b = base % m;
  const std::size_t bits = e == 0 ? 0 : boost::multiprecision::msb(e) + 1;
  for (std::size_t i = bits; i-- > 0;) {
    r = (r * r) % m;
    if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) r = (r * b) % m;
  }
  return r;
}

UniPoly to_univariate(const MultiPoly& poly) {
  if (poly.nvars() != 1) throw ValidationError("expected a univariate polynomial, got " + std::to_string(poly.nvars()) + " variables");
  if (poly.is_zero()) return UniPoly(poly.ctx());
  auto deg = static_cast<std::size_t>(poly.degree_in(0).value());
  if (deg > (std::size_t{1} << 28)) throw BudgetExceeded("univariate degree " + std::to_string(deg) + " too large for dense arithmetic");
  std::vector<FieldElement> v(deg + 1, poly.ctx().zero());
  for (const auto& [e, c] : poly.terms()) v[e[0]] = c;
  return UniPoly(poly.ctx(), std::move(v));
}

FieldElement sylvester_resultant(std::span<const FieldElement> a, std::span<const FieldElement> b) {
  if (a.empty() || b.empty()) throw ValidationError("sylvester_resultant needs formal degree >= 0 inputs");
  const FieldCtx ctx = a[0].ctx();
  const std::size_t da = a.size() - 1;
  const std::size_t db = b.size() - 1;
  const std::size_t n = da + db;
  if (n == 0) return ctx.one();
  std::vector<std::vector<FieldElement>> m(n, std::vector<FieldElement>(n, ctx.zero()));
  // Rows hold coefficients from the top degree down.
  for (std::size_t r = 0; r < db; ++r)
    for (std::size_t i = 0; i <= da; ++i) m[r][r + i] = a[da - i];
  for (std::size_t r = 0; r < da; ++r)
    for (std::size_t i = 0; i <= db; ++i) m[db + r][r + i] = b[db - i];

  FieldElement det = ctx.one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return ctx.zero();
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    const FieldElement inv = m[col][col].inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      FieldElement f = m[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

// ---------------------------------------------------------------------------
// Root counting and distinct-degree factorization

namespace {

fp::Poly to_fp(const UniPoly& u) {
  fp::Poly out(u.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = u.coeffs()[i].coeffs()[0];
  return out;
}

// h(x) = g(x^p) -> g
template <class Vec>
Vec deflate(const Vec& h, std::uint64_t p) {
  Vec g;
  for (std::size_t i = 0; i < h.size(); i += p) g.push_back(h[i]);
  return g;
}

std::uint64_t root_count_fp(fp::Poly h, std::uint64_t p) {
  std::uint64_t total = 0;
  while (true) {
    fp::trim(h);
    if (fp::degree(h) <= 0) return total;
    fp::Poly d = fp::derivative(h, p);
    if (d.empty()) {
      h = deflate(h, p);
      continue;
    }
    fp::Poly c = fp::gcd(h, d, p);
    fp::Poly w = fp::quo(h, c, p);
    total += static_cast<std::uint64_t>(fp::degree(w));
    while (true) {
      fp::Poly y = fp::gcd(c, w, p);
      if (fp::degree(y) <= 0) break;
      c = fp::quo(c, y, p);
    }
    // What remains has every multiplicity divisible by p, so c = g(x^p).
    h = deflate(c, p);
  }
}

}  // namespace

DegreeCounts distinct_degree_factor_mod_p(std::vector<std::uint64_t> g, std::uint64_t p) {
  DegreeCounts out;
  fp::trim(g);
  if (g.empty()) throw ValidationError("distinct_degree_factor of the zero polynomial");
  g = fp::monic(g, p);
  if (fp::degree(g) == 0) return out;
  fp::Poly dg = fp::derivative(g, p);
  if (dg.empty() || fp::degree(fp::gcd(g, dg, p)) > 0) throw NotSquarefree("polynomial is not squarefree");
  fp::Poly h = fp::x();
  for (unsigned d = 1; 2 * static_cast<long>(d) <= fp::degree(g); ++d) {
    h = fp::powmod(h, p, g, p);
    fp::Poly f = fp::gcd(g, fp::sub(h, fp::x(), p), p);
    if (fp::degree(f) > 0) {
      out[d] += static_cast<unsigned>(fp::degree(f)) / d;
      g = fp::quo(g, f, p);
      h = fp::rem(h, g, p);
    }
  }
  if (fp::degree(g) > 0) out[static_cast<unsigned>(fp::degree(g))] += 1;
  return out;
}


namespace detail {

std::uint64_t distinct_root_count_generic(const UniPoly& h0) {
  if (h0.is_zero()) throw ValidationError("the zero polynomial has infinitely many roots");
  const FieldCtx& ctx = h0.ctx();
  const std::uint64_t p = ctx.characteristic();
  std::uint64_t total = 0;
  UniPoly h = h0;
  while (h.degree() > 0) {
    UniPoly d = h.derivative();
    if (d.is_zero()) {
      h = UniPoly(ctx, deflate(h.coeffs(), p));
      continue;
    }
    UniPoly c = gcd(h, d);
    UniPoly w = h / c;
    total += static_cast<std::uint64_t>(w.degree());
    while (true) {
      UniPoly y = gcd(c, w);
      if (y.degree() <= 0) break;
      c = c / y;
    }
    h = UniPoly(ctx, deflate(c.coeffs(), p));
  }
  return total;
}

DegreeCounts distinct_degree_factor_generic(const UniPoly& g0) {
  if (g0.is_zero()) throw ValidationError("distinct_degree_factor of the zero polynomial");
  const FieldCtx& ctx = g0.ctx();
  DegreeCounts out;
  UniPoly g = g0.monic();
  if (g.degree() == 0) return out;
  UniPoly dg = g.derivative();
  if (dg.is_zero() || gcd(g, dg).degree() > 0) throw NotSquarefree("polynomial is not squarefree");
  const UniPoly x = UniPoly::x(ctx);
  UniPoly h = x;
  for (unsigned d = 1; 2 * static_cast<long>(d) <= g.degree(); ++d) {
    h = powmod(h, ctx.size(), g);
    UniPoly f = gcd(g, h - x);
    if (f.degree() > 0) {
      out[d] += static_cast<unsigned>(f.degree()) / d;
      g = g / f;
      h = h % g;
    }
  }
  if (g.degree() > 0) out[static_cast<unsigned>(g.degree())] += 1;
  return out;
}

}  // namespace detail

std::uint64_t distinct_root_count(const UniPoly& h) {
  if (h.is_zero()) throw ValidationError("the zero polynomial has infinitely many roots");
  if (h.ctx().is_prime_field()) return root_count_fp(to_fp(h), h.ctx().characteristic());
  return detail::distinct_root_count_generic(h);
}

std::uint64_t distinct_root_count(const MultiPoly& h) { return distinct_root_count(to_univariate(h)); }

DegreeCounts distinct_degree_factor(const UniPoly& g) {
  if (g.ctx().is_prime_field()) return distinct_degree_factor_mod_p(to_fp(g), g.ctx().characteristic());
  return detail::distinct_degree_factor_generic(g);
}

}  // namespace froblab
