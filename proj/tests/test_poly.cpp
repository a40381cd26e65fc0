#include <random>

#include "doctest.h"
#include "froblab/poly.hpp"

using namespace froblab;

namespace {

MultiPoly random_poly(std::mt19937_64& rng, const FieldCtx& ctx, std::vector<std::string> vars, unsigned max_deg,
                      unsigned terms) {
  MultiPoly p(ctx, vars);
  std::uniform_int_distribution<std::uint64_t> deg(0, max_deg);
  std::uniform_int_distribution<std::uint64_t> idx(0, ctx.size_u64() - 1);
  for (unsigned t = 0; t < terms; ++t) {
    Exponents e(vars.size());
    for (auto& x : e) x = deg(rng);
    p.add_term(e, ctx.element_at(idx(rng)));
  }
  return p;
}

// Term-by-term evaluation with no caching.
FieldElement naive_eval(const MultiPoly& poly, const std::vector<FieldElement>& pt) {
  FieldElement acc = poly.ctx().zero();
  for (const auto& [e, c] : poly.terms()) {
    FieldElement t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::uint64_t k = 0; k < e[i]; ++k) t *= pt[i];
    acc += t;
  }
  return acc;
}

// Number of roots of an F_p-polynomial lying in F_{p^m}, by trying every element.
std::uint64_t roots_in_extension(const std::vector<std::uint64_t>& coeffs, std::uint64_t p, int m) {
  FieldCtx big = make_field(p, m);
  std::vector<FieldElement> c;
  for (auto v : coeffs) c.push_back(big.from_int(static_cast<std::int64_t>(v)));
  std::uint64_t n = 0;
  for (const auto& x : enumerate(big)) {
    FieldElement acc = big.zero();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    n += acc.is_zero();
  }
  return n;
}

UniPoly uni(const FieldCtx& ctx, std::initializer_list<std::int64_t> low_to_high) {
  std::vector<FieldElement> v;
  for (auto c : low_to_high) v.push_back(ctx.from_int(c));
  return UniPoly(ctx, v);
}

}  // namespace

TEST_CASE("parse_poly") {
  FieldCtx f7 = make_field(7, 1);
  auto p = parse_poly("x^2*y - 3*x + 1", {"x", "y"}, f7);
  CHECK(p.num_terms() == 3);
  CHECK(p.coefficient({1, 0}) == f7.from_int(4));
  CHECK(p.to_string() == "x^2*y + 4*x + 1");

  CHECK(parse_poly("7*x", {"x"}, f7).is_zero());

  FieldCtx f5 = make_field(5, 1);
  auto q = parse_poly("x^2 - y^3", {"x", "y"}, f5);
  CHECK(q.num_terms() == 2);
  CHECK(q.degree_in(0) == ExtInt(2));
  CHECK(q.degree_in(1) == ExtInt(3));
  CHECK(q.total_degree() == ExtInt(3));

  CHECK(parse_poly("(x+1)^3", {"x"}, f5) == parse_poly("x^3 + 3*x^2 + 3*x + 1", {"x"}, f5));
  CHECK(parse_poly(" 2 * ( x - y ) * (x+y) ", {"x", "y"}, f7) == parse_poly("2*x^2 - 2*y^2", {"x", "y"}, f7));
  CHECK(parse_poly("-x", {"x"}, f7).coefficient({1}) == f7.from_int(6));

  CHECK_THROWS_AS(parse_poly("x + z", {"x", "y"}, f7), ValidationError);
  CHECK_THROWS_AS(parse_poly("x^-1", {"x"}, f7), ValidationError);
  CHECK_THROWS_AS(parse_poly("x +* 1", {"x"}, f7), ValidationError);
  CHECK_THROWS_AS(parse_poly("(x + 1", {"x"}, f7), ValidationError);
  CHECK_THROWS_AS(parse_poly("s(x)", {"x"}, f7), ValidationError);
}

TEST_CASE("zero polynomial degrees are -inf") {
  FieldCtx f7 = make_field(7, 1);
  auto z = parse_poly("x - x", {"x", "y"}, f7);
  CHECK(z.is_zero());
  CHECK_FALSE(z.degree_in(0).is_finite());
  CHECK_FALSE(z.total_degree().is_finite());
  CHECK(z.to_string() == "0");
}

TEST_CASE("eval") {
  FieldCtx f7 = make_field(7, 1);
  auto p = parse_poly("x^2*y - 3*x + 1", {"x", "y"}, f7);
  std::vector<FieldElement> pt{f7.from_int(2), f7.from_int(3)};
  CHECK(eval(p, pt).is_zero());

  std::vector<FieldElement> origin{f7.zero(), f7.zero()};
  CHECK(eval(p, origin) == p.constant_term());

  FieldCtx f5 = make_field(5, 1);
  std::vector<FieldElement> one{f5.one()};
  CHECK(eval(parse_poly("x^10 - x", {"x"}, f5), one).is_zero());

  CHECK_THROWS_AS(eval(p, one), ValidationError);
  std::vector<FieldElement> wrong_field{f5.one(), f5.one()};
  CHECK_THROWS_AS(eval(p, wrong_field), ValidationError);
}

TEST_CASE("eval is a ring morphism and matches naive evaluation") {
  std::mt19937_64 rng(7);
  for (auto [p, k] : {std::pair{5ull, 1}, {3ull, 2}, {2ull, 5}, {101ull, 1}}) {
    FieldCtx ctx = make_field(p, k);
    std::uniform_int_distribution<std::uint64_t> idx(0, ctx.size_u64() - 1);
    for (int trial = 0; trial < 200; ++trial) {
      auto f = random_poly(rng, ctx, {"x", "y", "z"}, 6, 5);
      auto g = random_poly(rng, ctx, {"x", "y", "z"}, 6, 5);
      std::vector<FieldElement> a{ctx.element_at(idx(rng)), ctx.element_at(idx(rng)), ctx.element_at(idx(rng))};
      CHECK(eval(f * g, a) == eval(f, a) * eval(g, a));
      CHECK(eval(f + g, a) == eval(f, a) + eval(g, a));
      CHECK(eval(f - g, a) == eval(f, a) - eval(g, a));
      CHECK(eval(f, a) == naive_eval(f, a));
    }
  }
}

TEST_CASE("per_variable_degrees") {
  FieldCtx f7 = make_field(7, 1);
  VariableNames xy{"x", "y"};
  {
    std::vector<MultiPoly> ps{parse_poly("x^2 - y^3", xy, f7)};
    auto d = per_variable_degrees(ps);
    CHECK(d.d == std::vector<std::vector<std::uint64_t>>{{2}, {3}});
    CHECK_FALSE(d.has_zero_polynomial);
  }
  {
    std::vector<MultiPoly> ps{parse_poly("x*y", xy, f7), parse_poly("x^3 + y", xy, f7)};
    CHECK(per_variable_degrees(ps).d == std::vector<std::vector<std::uint64_t>>{{1, 3}, {1, 1}});
  }
  {
    std::vector<MultiPoly> ps{parse_poly("x^10 - y^3", xy, make_field(5, 1))};
    CHECK(per_variable_degrees(ps).d == std::vector<std::vector<std::uint64_t>>{{10}, {3}});
  }
  {
    std::vector<MultiPoly> ps{parse_poly("x", xy, f7), parse_poly("0", xy, f7)};
    auto d = per_variable_degrees(ps);
    CHECK(d.has_zero_polynomial);
    CHECK(d.d[0][1] == 0);
  }
  std::vector<MultiPoly> none;
  CHECK_THROWS_AS(per_variable_degrees(none), ValidationError);
}

TEST_CASE("coeff_frobenius_twist") {
  FieldCtx f9 = make_field(3, 2);
  MultiPoly tx(f9, {"x"});
  tx.add_term({1}, f9.gen());
  auto tw = coeff_frobenius_twist(tx, 3);
  CHECK(tw.coefficient({1}) == f9.gen() * f9.from_int(2));

  auto prime_coeffs = parse_poly("x^2 + 2*x + 1", {"x"}, f9);
  CHECK(coeff_frobenius_twist(prime_coeffs, 3) == prime_coeffs);
  CHECK_THROWS_AS(coeff_frobenius_twist(tx, 2), ValidationError);

  std::mt19937_64 rng(3);
  for (auto [p, k] : {std::pair{3ull, 4}, {2ull, 6}, {5ull, 2}}) {
    FieldCtx ctx = make_field(p, k);
    for (int trial = 0; trial < 50; ++trial) {
      auto f = random_poly(rng, ctx, {"x", "y"}, 4, 6);
      CHECK(coeff_frobenius_twist(coeff_frobenius_twist(f, p), p) == coeff_frobenius_twist(f, p * p));
      CHECK(coeff_frobenius_twist(f, ctx.size_u64()) == f);
    }
  }
}

TEST_CASE("rebase") {
  FieldCtx f5 = make_field(5, 1);
  FieldCtx f25 = make_field(5, 2);
  auto p = parse_poly("x^2 + 3*x + 4", {"x"}, f5);
  auto q = p.rebase(f25);
  CHECK(q.ctx() == f25);
  CHECK(q.to_string() == p.to_string());
  MultiPoly t(f25, {"x"});
  t.add_term({1}, f25.gen());
  CHECK_THROWS_AS(t.rebase(make_field(5, 4)), ValidationError);
  CHECK_THROWS_AS(p.rebase(make_field(7, 1)), ValidationError);
}

TEST_CASE("distinct_root_count examples") {
  FieldCtx f5 = make_field(5, 1);
  FieldCtx f7 = make_field(7, 1);
  CHECK(distinct_root_count(parse_poly("x^10 - x", {"x"}, f5)) == 10);
  CHECK(distinct_root_count(parse_poly("(x - 1)^2", {"x"}, f7)) == 1);
  CHECK(distinct_root_count(parse_poly("x^5 - 1", {"x"}, f5)) == 1);
  CHECK(distinct_root_count(parse_poly("(x - 1)^5*(x - 2)", {"x"}, f5)) == 2);
  CHECK(distinct_root_count(parse_poly("(x - 1)^6*(x - 2)^5*(x^2+2)", {"x"}, f5)) == 4);
  CHECK(distinct_root_count(parse_poly("3", {"x"}, f5)) == 0);
  CHECK_THROWS_AS(distinct_root_count(parse_poly("0", {"x"}, f5)), ValidationError);
  CHECK_THROWS_AS(distinct_root_count(parse_poly("x*y", {"x", "y"}, f5)), ValidationError);
}

TEST_CASE("distinct_root_count against exhaustive root search") {
  // Every root of a degree <= 4 polynomial over F_p lies in F_{p^12}.
  std::mt19937_64 rng(11);
  struct Case {
    std::uint64_t p;
    unsigned max_deg;
    int m;
  };
  for (auto c : {Case{2, 4, 12}, Case{3, 3, 6}, Case{5, 3, 6}}) {
    FieldCtx fp = make_field(c.p, 1);
    std::uniform_int_distribution<std::uint64_t> coef(0, c.p - 1);
    for (int trial = 0; trial < 12; ++trial) {
      std::vector<std::uint64_t> cs(c.max_deg + 1);
      do {
        for (auto& x : cs) x = coef(rng);
      } while (cs.back() == 0);
      // Square a random factor in half the cases so multiplicities show up.
      std::vector<FieldElement> fe;
      for (auto x : cs) fe.push_back(fp.from_int(static_cast<std::int64_t>(x)));
      UniPoly h(fp, fe);
      if (trial % 2) {
        UniPoly lin = uni(fp, {static_cast<std::int64_t>(coef(rng)), 1});
        h = h * lin * lin;
        if (h.degree() > static_cast<long>(c.max_deg) + 1) h = lin * lin * lin;
      }
      std::vector<std::uint64_t> raw;
      for (const auto& e : h.coeffs()) raw.push_back(e.coeffs()[0]);
      auto expected = roots_in_extension(raw, c.p, c.m);
      CHECK(distinct_root_count(h) == expected);
      CHECK(detail::distinct_root_count_generic(h) == expected);
      CHECK(distinct_root_count(h) <= static_cast<std::uint64_t>(h.degree()));
      bool separable = gcd(h, h.derivative()).degree() == 0;
      CHECK((distinct_root_count(h) == static_cast<std::uint64_t>(h.degree())) == separable);
    }
  }
}

TEST_CASE("fast and generic root counts agree over extension fields") {
  std::mt19937_64 rng(5);
  FieldCtx f3 = make_field(3, 1);
  FieldCtx f27 = make_field(3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_poly(rng, f3, {"x"}, 9, 6);
    if (f.is_zero()) continue;
    auto g = f * f * random_poly(rng, f3, {"x"}, 4, 3) + parse_poly("x^27", {"x"}, f3);
    auto h = to_univariate(g);
    auto ext = to_univariate(g.rebase(f27));
    CHECK(distinct_root_count(h) == detail::distinct_root_count_generic(h));
    CHECK(distinct_root_count(ext) == distinct_root_count(h));
  }
}

TEST_CASE("univariate kernels") {
  FieldCtx f7 = make_field(7, 1);
  auto a = uni(f7, {1, 2, 3, 4});
  auto b = uni(f7, {5, 0, 1});
  UniPoly q(f7), r(f7);
  divmod(a, b, q, r);
  CHECK(q * b + r == a);
  CHECK(r.degree() < b.degree());
  CHECK(gcd(a * b, b * uni(f7, {3, 1})) == b.monic());
  // x^{7^2} = x mod any polynomial whose factors have degree 1 or 2.
  CHECK(powmod(UniPoly::x(f7), BigInt(49), b) == UniPoly::x(f7) % b);
  CHECK_THROWS_AS(a % UniPoly(f7), ValidationError);
  CHECK(uni(f7, {0, 0, 0, 0, 0, 0, 0, 1}).derivative().is_zero());

  FieldCtx f9 = make_field(3, 2);
  auto x = UniPoly::x(f9);
  auto lin = x - UniPoly(f9, {f9.gen()});
  CHECK(lin(f9.gen()).is_zero());
}

TEST_CASE("sylvester_resultant") {
  FieldCtx f7 = make_field(7, 1);
  auto v = [&](std::initializer_list<std::int64_t> c) {
    std::vector<FieldElement> out;
    for (auto x : c) out.push_back(f7.from_int(x));
    return out;
  };
  // Res(x - 2, x - 5) = 2 - 5 up to sign: (a - b) for monic linear factors.
  auto r = sylvester_resultant(v({-2, 1}), v({-5, 1}));
  CHECK((r == f7.from_int(3) || r == f7.from_int(-3)));
  // Common root gives 0.
  CHECK(sylvester_resultant(v({-2, 1}), v({4, -4, 1})).is_zero());
  // Res(x^2 + 1, x - a) = a^2 + 1 up to sign.
  auto s = sylvester_resultant(v({1, 0, 1}), v({-3, 1}));
  CHECK((s == f7.from_int(10) || s == f7.from_int(-10)));
  // Vanishing formal leading coefficients on both sides force 0.
  CHECK(sylvester_resultant(v({1, 1, 0}), v({2, 1, 0})).is_zero());
}

TEST_CASE("distinct_degree_factor") {
  FieldCtx f5 = make_field(5, 1);
  FieldCtx f3 = make_field(3, 1);
  FieldCtx f7 = make_field(7, 1);
  CHECK(distinct_degree_factor(to_univariate(parse_poly("x^2 + 1", {"x"}, f5))) == DegreeCounts{{1, 2}});
  CHECK(distinct_degree_factor(to_univariate(parse_poly("x^2 + 1", {"x"}, f3))) == DegreeCounts{{2, 1}});
  CHECK(distinct_degree_factor(to_univariate(parse_poly("x^2 - 1", {"x"}, f7))) == DegreeCounts{{1, 2}});
  CHECK_THROWS_AS(distinct_degree_factor(to_univariate(parse_poly("(x+1)^2", {"x"}, f7))), NotSquarefree);
  CHECK_THROWS_AS(distinct_degree_factor(UniPoly(f7)), ValidationError);

  // x^{p^d} - x is the product of all monic irreducibles of degree dividing d.
  auto all = distinct_degree_factor(to_univariate(parse_poly("x^81 - x", {"x"}, f3)));
  CHECK(all == DegreeCounts{{1, 3}, {2, 3}, {4, 18}});

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = to_univariate(random_poly(rng, f7, {"x"}, 12, 8));
    if (f.degree() < 1) continue;
    if (gcd(f, f.derivative()).degree() != 0) {
      CHECK_THROWS_AS(distinct_degree_factor(f), NotSquarefree);
      continue;
    }
    auto d = distinct_degree_factor(f);
    CHECK(d == detail::distinct_degree_factor_generic(f));
    long total = 0;
    for (auto [deg, count] : d) total += static_cast<long>(deg) * count;
    CHECK(total == f.degree());
    // Number of F_7 roots equals the count of linear factors.
    unsigned roots = 0;
    for (const auto& x : enumerate(f7)) roots += f(x).is_zero();
    CHECK(roots == (d.count(1) ? d.at(1) : 0u));
  }
}
