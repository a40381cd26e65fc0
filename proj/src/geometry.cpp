#include "froblab/geometry.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "evaluator.hpp"
#include "froblab/fp_poly.hpp"

namespace froblab {

namespace {

// y -> x^q substitutions beyond this degree are refused (dense univariate arithmetic).
constexpr std::uint64_t kMaxSubstitutedDegree = std::uint64_t{1} << 24;
// Enumeration without log tables is slow; above this many points the
// univariate case prefers the gcd route.
constexpr std::uint64_t kGenericEnumerationLimit = std::uint64_t{1} << 20;

std::vector<MultiPoly> rebase_all(std::span<const MultiPoly> polys, const FieldCtx& field) {
  std::vector<MultiPoly> out;
  out.reserve(polys.size());
  for (const auto& p : polys) out.push_back(p.rebase(field));
  return out;
}

BigInt point_total(const FieldCtx& field, std::size_t n) { return boost::multiprecision::pow(field.size(), static_cast<unsigned>(n)); }

// Visits every point of field^n (n >= 1); the first coordinate is split across
// workers. visit(idx, scratch) returns how much to add to the worker's total.
template <class Visit>
std::uint64_t enumerate_points(const detail::PointEvaluator& ev, const FieldCtx& field, std::size_t n, unsigned workers,
                               Visit visit) {
  const std::uint64_t Q = field.size_u64();
  auto run = [&](std::uint64_t first_begin, std::uint64_t first_end) -> std::uint64_t {
    std::vector<std::uint64_t> idx(n, 0);
    detail::PointEvaluator::Scratch scratch;
    std::uint64_t total = 0;
    for (std::uint64_t a = first_begin; a < first_end; ++a) {
      std::fill(idx.begin(), idx.end(), 0);
      idx[0] = a;
      while (true) {
        ev.load(idx, scratch);
        total += visit(idx, scratch);
        std::size_t i = 1;
        while (i < n && ++idx[i] == Q) idx[i++] = 0;
        if (i >= n) break;
      }
    }
    return total;
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(Q, 256))));
  if (workers == 1) return run(0, Q);
  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = Q * w / workers;
    const std::uint64_t hi = Q * (w + 1) / workers;
    threads.emplace_back([&, w, lo, hi] {
      try {
        partial[w] = run(lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
}

void check_budget(const BigInt& points, std::uint64_t budget, const std::string& what) {
  if (points > budget)
    throw BudgetExceeded(what + " needs " + points.str() + " point evaluations, budget is " + std::to_string(budget));
}

// Common zeros in field^n of polys (twisted if twist_q != 0).
std::uint64_t count_common_zeros(const FieldCtx& field, std::span<const MultiPoly> polys, std::size_t n,
                                 std::uint64_t twist_q, const CountOptions& opt) {
  const BigInt total = point_total(field, n);
  bool all_zero = std::all_of(polys.begin(), polys.end(), [](const MultiPoly& p) { return p.is_zero(); });
  if (all_zero) {
    if (total > std::numeric_limits<std::uint64_t>::max()) throw BudgetExceeded("point count " + total.str() + " exceeds 64 bits");
    return static_cast<std::uint64_t>(total);
  }
  if (n == 0) {
    for (const auto& p : polys)
      if (!p.is_zero()) return 0;
    return 1;
  }
  check_budget(total, opt.budget, "counting over " + field.label());
  detail::PointEvaluator ev(field, polys, n, twist_q);
  return enumerate_points(ev, field, n, opt.workers,
                          [&](std::span<const std::uint64_t>, const detail::PointEvaluator::Scratch& s) -> std::uint64_t {
                            return ev.all_vanish(s) ? 1 : 0;
                          });
}

fp::Poly to_fp(const UniPoly& u) {
  fp::Poly out(u.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = u.coeffs()[i].coeffs()[0];
  return out;
}

// x^Q mod g and the number of distinct roots of g lying in F_Q.
std::uint64_t roots_in_field(const UniPoly& g, const BigInt& Q) {
  if (g.degree() <= 0) return 0;
  const FieldCtx& ctx = g.ctx();
  if (ctx.is_prime_field()) {
    const std::uint64_t p = ctx.characteristic();
    fp::Poly gf = fp::monic(to_fp(g), p);
    fp::Poly r = fp::powmod(fp::x(), Q, gf, p);
    fp::Poly d = fp::gcd(gf, fp::sub(r, fp::x(), p), p);
    return static_cast<std::uint64_t>(fp::degree(d));
  }
  UniPoly x = UniPoly::x(ctx);
  UniPoly r = powmod(x, Q, g);
  return static_cast<std::uint64_t>(gcd(g, r - x).degree());
}

// gcd of X's equations and the substituted C equations, n = 1, over the base field.
// Empty optional when every equation vanishes identically.
std::optional<UniPoly> univariate_locus(const Correspondence& corr) {
  std::optional<UniPoly> g;
  auto absorb = [&](const UniPoly& h) {
    if (h.is_zero()) return;
    g = g ? gcd(*g, h) : h.monic();
  };
  for (const auto& e : corr.X().equations()) absorb(to_univariate(e));
  for (const auto& c : corr.C()) absorb(substitute_frobenius_graph(c, corr.q()));
  return g;
}

FieldCtx twisted_field(const Correspondence& corr, unsigned m) {
  if (m == 0) throw ValidationError("m must be positive");
  const std::uint64_t k = static_cast<std::uint64_t>(corr.q_power().e) * m;
  if (k > kMaxExtensionDegree)
    throw ValidationError("F_{q^m} with q = " + corr.q_power().label() + ", m = " + std::to_string(m) +
                          " has degree " + std::to_string(k) + " over F_p; the limit is " +
                          std::to_string(kMaxExtensionDegree));
  return make_field(corr.q_power().p, static_cast<int>(k));
}

enum class Route { kEnumerate, kUnivariate };

Route choose_route(const Correspondence& corr, const FieldCtx& field, const CountOptions& opt) {
  const BigInt total = point_total(field, corr.n());
  const bool fast = field.size() <= LogField::kMaxSize;
  if (total <= opt.budget && (fast || total <= kGenericEnumerationLimit)) return Route::kEnumerate;
  if (corr.n() == 1) return Route::kUnivariate;
  check_budget(total, opt.budget, "twisted count over " + field.label());
  return Route::kEnumerate;
}

void require_subfield(const FieldCtx& base, const FieldCtx& field) {
  if (field.degree() % base.degree() != 0)
    throw ValidationError(base.label() + " is not a subfield of " + field.label());
}

// Reduces exponents modulo x^Q - x, which changes no value on F_Q.
UniPoly fold_exponents(const UniPoly& u, const BigInt& Q) {
  if (u.degree() < 0 || BigInt(u.degree()) < Q) return u;
  const std::uint64_t order = static_cast<std::uint64_t>(Q - 1);
  std::vector<FieldElement> v(order + 1, u.ctx().zero());
  for (std::size_t e = 0; e < u.coeffs().size(); ++e) {
    std::size_t target = e == 0 ? 0 : static_cast<std::size_t>((e - 1) % order + 1);
    v[target] += u.coeffs()[e];
  }
  return UniPoly(u.ctx(), std::move(v));
}

}  // namespace

AffineSystem::AffineSystem(FieldCtx ctx, std::vector<std::string> vars, std::vector<MultiPoly> equations)
    : ctx_(ctx), vars_(std::move(vars)), equations_(std::move(equations)) {
  for (const auto& e : equations_) {
    if (e.ctx() != ctx_) throw ValidationError("equation over " + e.ctx().label() + " in a system over " + ctx_.label());
    if (e.nvars() != vars_.size())
      throw ValidationError("equation in " + std::to_string(e.nvars()) + " variables in a system of " +
                            std::to_string(vars_.size()));
  }
}

Correspondence::Correspondence(AffineSystem X, std::vector<MultiPoly> C, std::uint64_t q)
    : X_(std::move(X)), C_(std::move(C)), q_(to_prime_power(q)) {
  if (q_.p != X_.ctx().characteristic())
    throw ValidationError("q = " + std::to_string(q) + " is not a power of the characteristic " +
                          std::to_string(X_.ctx().characteristic()));
  for (const auto& c : C_) {
    if (c.ctx() != X_.ctx()) throw ValidationError("C equation over " + c.ctx().label() + ", X over " + X_.ctx().label());
    if (c.nvars() != 2 * X_.nvars())
      throw ValidationError("C equations need " + std::to_string(2 * X_.nvars()) + " variables, got " +
                            std::to_string(c.nvars()));
  }
}

std::uint64_t count_points(const AffineSystem& X, const FieldCtx& field, const CountOptions& opt) {
  if (field.characteristic() != X.ctx().characteristic())
    throw ValidationError("cannot count points of a system over " + X.ctx().label() + " in " + field.label() +
                          ": characteristic mismatch");
  auto eqs = rebase_all(X.equations(), field);
  return count_common_zeros(field, eqs, X.nvars(), 0, opt);
}

UniPoly substitute_frobenius_graph(const MultiPoly& c, std::uint64_t q) {
  if (c.nvars() != 2) throw ValidationError("expected a polynomial in (x, y)");
  std::map<std::uint64_t, FieldElement> acc;
  for (const auto& [e, coef] : c.terms()) {
    BigInt d = BigInt(e[0]) + BigInt(e[1]) * q;
    if (d > kMaxSubstitutedDegree)
      throw BudgetExceeded("degree " + d.str() + " after y -> x^" + std::to_string(q) + " is too large");
    auto [it, inserted] = acc.emplace(static_cast<std::uint64_t>(d), coef);
    if (!inserted) it->second += coef;
  }
  std::vector<FieldElement> v(acc.empty() ? 0 : acc.rbegin()->first + 1, c.ctx().zero());
  for (const auto& [d, coef] : acc) v[d] = coef;
  return UniPoly(c.ctx(), std::move(v));
}

std::uint64_t twisted_count(const Correspondence& corr, unsigned m, const CountOptions& opt) {
  const FieldCtx field = twisted_field(corr, m);
  if (choose_route(corr, field, opt) == Route::kUnivariate) {
    require_subfield(corr.X().ctx(), field);
    auto g = univariate_locus(corr);
    if (!g) {
      if (field.size() > std::numeric_limits<std::uint64_t>::max()) throw BudgetExceeded("count exceeds 64 bits");
      return static_cast<std::uint64_t>(field.size());
    }
    return roots_in_field(*g, field.size());
  }
  std::vector<MultiPoly> polys;
  const std::size_t n = corr.n();
  // X's equations as polynomials in 2n variables.
  std::vector<std::string> vars2 = corr.X().vars();
  for (const auto& v : corr.X().vars()) vars2.push_back(v + "'");
  for (const auto& e : corr.X().equations()) {
    MultiPoly lifted(e.ctx(), vars2);
    for (const auto& [ex, c] : e.terms()) {
      Exponents ex2 = ex;
      ex2.resize(2 * n, 0);
      lifted.add_term(ex2, c);
    }
    polys.push_back(lifted.rebase(field));
  }
  for (const auto& c : corr.C()) polys.push_back(c.rebase(field));
  return count_common_zeros(field, polys, n, corr.q(), opt);
}

std::uint64_t exact_twisted_count_univariate(const Correspondence& corr) {
  if (corr.n() != 1) throw ValidationError("exact univariate count needs n = 1, got n = " + std::to_string(corr.n()));
  if (!corr.X().equations().empty()) throw ValidationError("exact univariate count needs X = A^1 (no equations)");
  if (corr.C().size() != 1)
    throw ValidationError("exact univariate count needs a single C equation, got " + std::to_string(corr.C().size()));
  UniPoly h = substitute_frobenius_graph(corr.C()[0], corr.q());
  if (h.is_zero()) throw ValidationError("C(x, x^q) vanishes identically: infinitely many twisted points");
  return distinct_root_count(h);
}

void require_divisor_closed(std::span<const unsigned> m_list) {
  if (m_list.empty()) throw ValidationError("empty m list");
  std::set<unsigned> ms(m_list.begin(), m_list.end());
  for (unsigned m : ms) {
    if (m == 0) throw ValidationError("m values must be positive");
    for (unsigned d = 1; d < m; ++d)
      if (m % d == 0 && !ms.count(d))
        throw ValidationError("m list is not divisor-closed: " + std::to_string(d) + " divides " + std::to_string(m) +
                              " but is missing");
  }
}

StabilizedCount stabilize(std::vector<std::pair<unsigned, std::uint64_t>> table) {
  std::sort(table.begin(), table.end());
  std::vector<unsigned> ms;
  for (const auto& [m, c] : table) ms.push_back(m);
  require_divisor_closed(ms);
  for (const auto& [a, ca] : table)
    for (const auto& [b, cb] : table)
      if (b % a == 0 && cb < ca)
        throw PropertyViolation("count over m = " + std::to_string(b) + " (" + std::to_string(cb) +
                                ") is smaller than over its divisor m = " + std::to_string(a) + " (" +
                                std::to_string(ca) + ")");
  StabilizedCount out;
  out.table = table;
  unsigned m0 = 0;
  for (const auto& [m, c] : table) {
    if (m0 == 0 || c > out.count) {
      out.count = c;
      m0 = m;
    }
  }
  out.stabilized = true;
  for (const auto& [m, c] : table) {
    if (m != m0 && m % m0 == 0) {
      out.confirmed = true;
      if (c != out.count) out.stabilized = false;
    }
  }
  out.confirmed = out.confirmed && out.stabilized;
  return out;
}

StabilizedCount stabilized_twisted_count(const Correspondence& corr, std::span<const unsigned> m_list,
                                         const CountOptions& opt) {
  require_divisor_closed(m_list);
  std::set<unsigned> ms(m_list.begin(), m_list.end());
  std::vector<std::pair<unsigned, std::uint64_t>> table;
  for (unsigned m : ms) table.emplace_back(m, twisted_count(corr, m, opt));
  return stabilize(std::move(table));
}

StabilizedCount stabilized_point_count(const AffineSystem& X, std::span<const unsigned> m_list,
                                       const CountOptions& opt) {
  require_divisor_closed(m_list);
  std::set<unsigned> ms(m_list.begin(), m_list.end());
  std::vector<std::pair<unsigned, std::uint64_t>> table;
  for (unsigned m : ms) {
    const unsigned k = X.ctx().degree() * m;
    if (k > kMaxExtensionDegree) throw ValidationError("extension degree " + std::to_string(k) + " too large");
    table.emplace_back(m, count_points(X, make_field(X.ctx().characteristic(), static_cast<int>(k)), opt));
  }
  return stabilize(std::move(table));
}

CurveDegrees curve_degrees(const MultiPoly& c) {
  if (c.nvars() != 2) throw ValidationError("curve_degrees expects a polynomial in (x, y)");
  ExtInt dx = c.degree_in(0);
  ExtInt dy = c.degree_in(1);
  if (!dx.is_finite() || dx.value() == 0) throw ValidationError("C is constant in x: p_2 is not quasi-finite and dominant");
  if (!dy.is_finite() || dy.value() == 0) throw ValidationError("C is constant in y: p_1 is not quasi-finite and dominant");
  std::uint64_t g = 0;
  for (const auto& [e, coef] : c.terms()) g = std::gcd(g, e[0]);
  const std::uint64_t p = c.ctx().characteristic();
  std::uint64_t pr = 1;
  while (g % p == 0) {
    g /= p;
    pr *= p;
  }
  return {static_cast<std::uint64_t>(dy.value()), pr};
}

bool nonempty_open_check(const Correspondence& corr, std::span<const MultiPoly> U, std::span<const unsigned> m_list,
                         const CountOptions& opt) {
  require_divisor_closed(m_list);
  for (const auto& u : U)
    if (u.ctx() != corr.X().ctx() || u.nvars() != 2 * corr.n())
      throw ValidationError("U polynomials must use the 2n variables and field of C");
  std::set<unsigned> ms(m_list.begin(), m_list.end());
  for (unsigned m : ms) {
    const FieldCtx field = twisted_field(corr, m);
    if (choose_route(corr, field, opt) == Route::kUnivariate) {
      require_subfield(corr.X().ctx(), field);
      auto g = univariate_locus(corr);
      if (g && g->degree() <= 0) continue;
      // G vanishes exactly on the twisted points in F_{q^m}.
      std::optional<UniPoly> G;
      if (g) G = gcd(*g, powmod(UniPoly::x(g->ctx()), field.size(), *g) - UniPoly::x(g->ctx()));
      if (G && G->degree() <= 0) continue;
      for (const auto& u : U) {
        UniPoly us = substitute_frobenius_graph(u, corr.q());
        if (G ? !(us % *G).is_zero() : !fold_exponents(us, field.size()).is_zero()) return true;
      }
      continue;
    }
    const std::size_t n = corr.n();
    std::vector<std::string> vars2 = corr.X().vars();
    for (const auto& v : corr.X().vars()) vars2.push_back(v + "'");
    std::vector<MultiPoly> locus;
    for (const auto& e : corr.X().equations()) {
      MultiPoly lifted(e.ctx(), vars2);
      for (const auto& [ex, c] : e.terms()) {
        Exponents ex2 = ex;
        ex2.resize(2 * n, 0);
        lifted.add_term(ex2, c);
      }
      locus.push_back(lifted.rebase(field));
    }
    for (const auto& c : corr.C()) locus.push_back(c.rebase(field));
    auto opens = rebase_all(U, field);
    check_budget(point_total(field, n), opt.budget, "open-set check over " + field.label());
    detail::PointEvaluator ev_locus(field, locus, n, corr.q());
    detail::PointEvaluator ev_open(field, opens, n, corr.q());
    // Reuses the loaded scratch of the locus evaluator: both share field and coordinates.
    std::uint64_t hits = enumerate_points(
        ev_locus, field, n, opt.workers,
        [&](std::span<const std::uint64_t>, const detail::PointEvaluator::Scratch& s) -> std::uint64_t {
          if (!ev_locus.all_vanish(s)) return 0;
          for (std::size_t j = 0; j < ev_open.size(); ++j)
            if (!ev_open.vanishes(j, s)) return 1;
          return 0;
        });
    if (hits > 0) return true;
  }
  return false;
}

DominanceSample sample_dominance(const Correspondence& corr, unsigned m, unsigned samples, std::uint64_t seed) {
  if (corr.n() != 1) throw ValidationError("dominance sampling is implemented for n = 1");
  if (!corr.X().equations().empty()) throw ValidationError("dominance sampling assumes X = A^1");
  const FieldCtx field = twisted_field(corr, m);
  auto C = rebase_all(corr.C(), field);
  std::mt19937_64 rng(seed);
  const BigInt size = field.size();
  std::uniform_int_distribution<std::uint64_t> pick(0, size > std::numeric_limits<std::uint32_t>::max()
                                                           ? std::numeric_limits<std::uint32_t>::max()
                                                           : static_cast<std::uint64_t>(size) - 1);
  // Fiber over a fixed value of coordinate `fixed`, as a polynomial in the other one.
  auto fiber_nonempty = [&](unsigned fixed, const FieldElement& v) {
    std::optional<UniPoly> g;
    bool nonzero_constant = false;
    for (const auto& c : C) {
      std::map<std::uint64_t, FieldElement> acc;
      for (const auto& [e, coef] : c.terms()) {
        FieldElement t = coef * v.pow(e[fixed]);
        auto [it, inserted] = acc.emplace(e[1 - fixed], t);
        if (!inserted) it->second += t;
      }
      std::vector<FieldElement> coeffs(acc.empty() ? 0 : acc.rbegin()->first + 1, field.zero());
      for (const auto& [d, t] : acc) coeffs[d] = t;
      UniPoly u(field, std::move(coeffs));
      if (u.is_zero()) continue;
      if (u.degree() == 0) nonzero_constant = true;
      g = g ? gcd(*g, u) : u.monic();
    }
    if (nonzero_constant) return false;
    return !g || g->degree() > 0;
  };
  DominanceSample out;
  out.samples = samples;
  unsigned hit1 = 0;
  unsigned hit2 = 0;
  for (unsigned s = 0; s < samples; ++s) {
    hit1 += fiber_nonempty(0, field.element_at(pick(rng)));
    hit2 += fiber_nonempty(1, field.element_at(pick(rng)));
  }
  if (samples > 0) {
    out.p1_hit_rate = static_cast<double>(hit1) / samples;
    out.p2_hit_rate = static_cast<double>(hit2) / samples;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Zero-dimensionality certificates

namespace {

// A polynomial known through evaluation: either an input equation or a
// resultant of two such polynomials with respect to one variable.
struct Eliminant {
  const MultiPoly* poly = nullptr;  // leaf
  std::shared_ptr<const Eliminant> a, b;
  std::size_t var = 0;  // eliminated variable (inner nodes)
  std::vector<std::uint64_t> bound;  // per-variable degree bound

  // Coefficients in variable v (length bound[v] + 1) with the others fixed by pt.
  std::vector<FieldElement> coeffs_in(std::size_t v, std::vector<FieldElement>& pt, const FieldCtx& F) const;
  FieldElement value(std::vector<FieldElement>& pt, const FieldCtx& F) const;
};

std::vector<FieldElement> Eliminant::coeffs_in(std::size_t v, std::vector<FieldElement>& pt, const FieldCtx& F) const {
  const std::size_t D = bound[v];
  if (poly) {
    std::vector<FieldElement> out(D + 1, F.zero());
    for (const auto& [e, c] : poly->terms()) {
      FieldElement t = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (i != v && e[i]) t *= pt[i].pow(e[i]);
      out[e[v]] += t;
    }
    return out;
  }
  // Interpolate through D + 1 distinct values of v.
  std::vector<FieldElement> xs, ys;
  const FieldElement saved = pt[v];
  for (std::size_t k = 0; k <= D; ++k) {
    pt[v] = F.element_at(k);
    xs.push_back(pt[v]);
    ys.push_back(value(pt, F));
  }
  pt[v] = saved;
  // Newton divided differences, then expand to monomial coefficients.
  std::vector<FieldElement> dd = ys;
  for (std::size_t j = 1; j <= D; ++j)
    for (std::size_t i = D; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
  std::vector<FieldElement> out(D + 1, F.zero());
  for (std::size_t i = D + 1; i-- > 0;) {
    // out = out * (X - xs[i]) + dd[i]
    for (std::size_t k = D; k > 0; --k) out[k] = out[k - 1] - out[k] * xs[i];
    out[0] = dd[i] - out[0] * xs[i];
  }
  return out;
}

FieldElement Eliminant::value(std::vector<FieldElement>& pt, const FieldCtx& F) const {
  if (poly) return eval(*poly, pt);
  auto ca = a->coeffs_in(var, pt, F);
  auto cb = b->coeffs_in(var, pt, F);
  return sylvester_resultant(ca, cb);
}

std::shared_ptr<const Eliminant> leaf(const MultiPoly& p) {
  auto e = std::make_shared<Eliminant>();
  e->poly = &p;
  for (std::size_t i = 0; i < p.nvars(); ++i) e->bound.push_back(p.is_zero() ? 0 : static_cast<std::uint64_t>(p.degree_in(i).value()));
  return e;
}

// Res_w(A, B), or A itself when neither involves w. Null when the formal
// resultant could be degenerate.
std::shared_ptr<const Eliminant> resultant(std::shared_ptr<const Eliminant> A, std::shared_ptr<const Eliminant> B,
                                           std::size_t w) {
  if (A->bound[w] == 0 && B->bound[w] == 0) return A;
  auto e = std::make_shared<Eliminant>();
  e->a = A;
  e->b = B;
  e->var = w;
  e->bound.assign(A->bound.size(), 0);
  for (std::size_t u = 0; u < A->bound.size(); ++u)
    if (u != w) e->bound[u] = A->bound[w] * B->bound[u] + B->bound[w] * A->bound[u];
  return e;
}

FieldCtx work_field(std::uint64_t p) {
  int k = 1;
  BigInt size = p;
  while (size < 1000) {
    size *= p;
    ++k;
  }
  return make_field(p, k);
}

bool nonzero_somewhere(const Eliminant& e, std::size_t target, std::size_t n, const FieldCtx& F, std::mt19937_64& rng) {
  if (e.bound[target] + 2 > F.size_u64()) return false;
  std::uniform_int_distribution<std::uint64_t> pick(0, F.size_u64() - 1);
  std::vector<FieldElement> pt(n, F.zero());
  for (int attempt = 0; attempt < 4; ++attempt) {
    pt[target] = F.element_at(pick(rng));
    if (!e.value(pt, F).is_zero()) return true;
  }
  return false;
}

}  // namespace

bool certify_zero_dimensional(const AffineSystem& X, std::uint64_t seed) {
  const std::size_t n = X.nvars();
  if (n == 0) return true;
  if (n > 3) throw ValidationError("zero-dimensionality certificates are implemented for n <= 3");
  const FieldCtx F = work_field(X.ctx().characteristic());
  std::vector<MultiPoly> eqs;
  for (const auto& e : X.equations())
    if (!e.is_zero()) eqs.push_back(e.rebase(F));
  if (eqs.empty()) return false;
  // Every eliminant must be built from polynomials whose degree bounds fit
  // the interpolation grid of F.
  std::mt19937_64 rng(seed);
  std::vector<std::shared_ptr<const Eliminant>> leaves;
  for (const auto& e : eqs) leaves.push_back(leaf(e));

  for (std::size_t t = 0; t < n; ++t) {
    std::vector<std::size_t> others;
    for (std::size_t v = 0; v < n; ++v)
      if (v != t) others.push_back(v);
    bool certified = false;
    if (n == 1) {
      for (const auto& l : leaves)
        if (nonzero_somewhere(*l, t, n, F, rng)) certified = true;
    } else if (n == 2) {
      for (std::size_t a = 0; a < leaves.size() && !certified; ++a)
        for (std::size_t b = a + 1; b < leaves.size() && !certified; ++b) {
          auto r = resultant(leaves[a], leaves[b], others[0]);
          certified = nonzero_somewhere(*r, t, n, F, rng);
        }
    } else {
      for (int order = 0; order < 2 && !certified; ++order) {
        const std::size_t w = others[order];
        const std::size_t u = others[1 - order];
        for (std::size_t a = 0; a < leaves.size() && !certified; ++a)
          for (std::size_t b = 0; b < leaves.size() && !certified; ++b)
            for (std::size_t c = b + 1; c < leaves.size() && !certified; ++c) {
              if (b == a || c == a) continue;
              auto r1 = resultant(leaves[a], leaves[b], w);
              auto r2 = resultant(leaves[a], leaves[c], w);
              auto r = resultant(r1, r2, u);
              if (r1->bound[u] + 1 > F.size_u64() || r2->bound[u] + 1 > F.size_u64()) continue;
              certified = nonzero_somewhere(*r, t, n, F, rng);
            }
      }
    }
    if (!certified) return false;
  }
  return true;
}

}  // namespace froblab
