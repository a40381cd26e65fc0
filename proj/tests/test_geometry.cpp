#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "froblab/geometry.hpp"

using namespace froblab;

namespace {

Correspondence univariate_corr(std::uint64_t p, std::uint64_t q, std::vector<std::string> C, std::vector<std::string> X = {}) {
  FieldCtx fp = make_field(p, 1);
  std::vector<MultiPoly> xs, cs;
  for (const auto& e : X) xs.push_back(parse_poly(e, {"x"}, fp));
  for (const auto& c : C) cs.push_back(parse_poly(c, {"x", "y"}, fp));
  return Correspondence(AffineSystem(fp, {"x"}, xs), cs, q);
}

AffineSystem system(std::uint64_t p, VariableNames vars, std::vector<std::string> eqs) {
  FieldCtx fp = make_field(p, 1);
  std::vector<MultiPoly> ps;
  for (const auto& e : eqs) ps.push_back(parse_poly(e, vars, fp));
  return AffineSystem(fp, vars.names, ps);
}

// Direct definition: every x in F_{q^m}^n, phi_q applied coordinatewise, plain eval.
std::uint64_t brute_twisted(const Correspondence& corr, unsigned m) {
  FieldCtx F = make_field(corr.q_power().p, static_cast<int>(corr.q_power().e * m));
  const std::size_t n = corr.n();
  std::vector<MultiPoly> X, C;
  for (const auto& e : corr.X().equations()) X.push_back(e.rebase(F));
  for (const auto& c : corr.C()) C.push_back(c.rebase(F));
  std::uint64_t count = 0;
  std::vector<std::uint64_t> idx(n, 0);
  const std::uint64_t Q = F.size_u64();
  while (true) {
    std::vector<FieldElement> x, xy;
    for (auto i : idx) x.push_back(F.element_at(i));
    xy = x;
    for (const auto& v : x) xy.push_back(frobenius(v, corr.q()));
    bool ok = true;
    for (const auto& e : X) ok = ok && eval(e, x).is_zero();
    for (const auto& c : C) ok = ok && eval(c, xy).is_zero();
    count += ok;
    std::size_t i = 0;
    while (i < n && ++idx[i] == Q) idx[i++] = 0;
    if (i == n) break;
  }
  return count;
}

std::string random_poly_text(std::mt19937_64& rng, const std::vector<std::string>& vars, unsigned max_deg, unsigned terms) {
  std::uniform_int_distribution<unsigned> deg(0, max_deg), coef(1, 6);
  std::string s;
  for (unsigned t = 0; t < terms; ++t) {
    if (!s.empty()) s += " + ";
    s += std::to_string(coef(rng));
    for (const auto& v : vars) s += "*" + v + "^" + std::to_string(deg(rng));
  }
  return s;
}

}  // namespace

TEST_CASE("count_points examples") {
  auto X = system(5, {"x", "y"}, {"y^2 - x^3 + x"});
  CHECK(count_points(X, make_field(5, 1)) == 7);
  CHECK(count_points(system(7, {"x", "y", "z"}, {}), make_field(7, 1)) == 343);
  CHECK(count_points(system(3, {"x"}, {"x^2 + 1"}), make_field(3, 1)) == 0);
  CHECK(count_points(system(3, {"x"}, {"x^2 + 1"}), make_field(3, 2)) == 2);
  CHECK_THROWS_AS(count_points(X, make_field(7, 1)), ValidationError);
  CHECK_THROWS_AS(count_points(X, make_field(5, 6), {.budget = 1000}), BudgetExceeded);
}

TEST_CASE("count_points is independent of the worker count") {
  auto X = system(7, {"x", "y"}, {"y^2 - x^3 - 3*x - 1"});
  const FieldCtx F = make_field(7, 3);
  auto ref = count_points(X, F);
  for (unsigned w : {2u, 3u, 8u}) CHECK(count_points(X, F, {.workers = w}) == ref);
}

TEST_CASE("twisted_count examples") {
  auto corr = univariate_corr(5, 5, {"x - y^2"});
  CHECK(twisted_count(corr, 6) == 10);
  CHECK(twisted_count(corr, 1) == 2);
  for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull, 8ull, 9ull, 25ull}) {
    auto diag = univariate_corr(to_prime_power(q).p, q, {"y - x"});
    CHECK(twisted_count(diag, 1) == q);
  }
}

TEST_CASE("twisted_count matches the direct definition") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    std::uint64_t p = trial % 2 ? 3 : 2;
    std::uint64_t q = trial % 4 < 2 ? p : p * p;
    auto corr = univariate_corr(p, q, {random_poly_text(rng, {"x", "y"}, 3, 3)});
    for (unsigned m : {1u, 2u, 3u}) CHECK(twisted_count(corr, m) == brute_twisted(corr, m));
  }
  // Two variables with an equation on X.
  FieldCtx f3 = make_field(3, 1);
  VariableNames v4{"x1", "x2", "y1", "y2"};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<MultiPoly> C{parse_poly(random_poly_text(rng, v4.names, 2, 3), v4, f3)};
    std::vector<MultiPoly> X{parse_poly(random_poly_text(rng, {"x1", "x2"}, 2, 2), {"x1", "x2"}, f3)};
    Correspondence corr(AffineSystem(f3, {"x1", "x2"}, X), C, 3);
    for (unsigned m : {1u, 2u}) CHECK(twisted_count(corr, m) == brute_twisted(corr, m));
  }
}

TEST_CASE("univariate gcd route agrees with enumeration") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5, 7}[trial % 4];
    auto corr = univariate_corr(p, p, {random_poly_text(rng, {"x", "y"}, 4, 3)},
                                trial % 3 ? std::vector<std::string>{} : std::vector<std::string>{"x^7 - x^2 + 1"});
    for (unsigned m : {1u, 2u, 3u, 4u}) {
      auto enumerated = twisted_count(corr, m);
      auto algebraic = twisted_count(corr, m, {.budget = 1});
      CHECK(enumerated == algebraic);
    }
  }
  // Large m goes through the gcd route.
  auto corr = univariate_corr(5, 5, {"x - y^2"});
  std::uint64_t five_m = 1;  // 5^m mod 9
  for (unsigned m = 1; m <= 30; ++m) {
    five_m = five_m * 5 % 9;
    CHECK(twisted_count(corr, m) == std::gcd(9ull, (five_m + 8) % 9) + 1);
  }
}

TEST_CASE("exact_twisted_count_univariate") {
  CHECK(exact_twisted_count_univariate(univariate_corr(5, 5, {"x - y^2"})) == 10);
  CHECK(exact_twisted_count_univariate(univariate_corr(5, 25, {"x^10 - y^3"})) == 14);
  CHECK(exact_twisted_count_univariate(univariate_corr(7, 7, {"y - x"})) == 7);
  CHECK_THROWS_AS(exact_twisted_count_univariate(univariate_corr(5, 5, {"x^5 - y"})), ValidationError);
  CHECK_THROWS_AS(exact_twisted_count_univariate(univariate_corr(5, 5, {"x - y", "x"})), ValidationError);
  CHECK_THROWS_AS(exact_twisted_count_univariate(univariate_corr(5, 5, {"x - y"}, {"x"})), ValidationError);
}

TEST_CASE("the binomial family has (n / p^r) q - s + 1 points whenever that is meaningful") {
  for (std::uint64_t p : {2ull, 3ull, 5ull}) {
    for (unsigned e = 1; e <= 2; ++e) {
      std::uint64_t q = 1;
      for (unsigned i = 0; i < e; ++i) q *= p;
      for (std::uint64_t m = 1; m <= 12; ++m) {
        std::uint64_t pr = 1, s = m;
        while (s % p == 0) {
          s /= p;
          pr *= p;
        }
        for (std::uint64_t n = 1; n <= 6; ++n) {
          if (q < pr) continue;
          const std::uint64_t lhs = q * n / pr;
          // x^m = x^{qn} has this many roots once qn/p^r - s is a positive unit mod p.
          if (lhs <= s || (lhs - s) % p == 0) continue;
          auto corr = univariate_corr(p, q, {"x^" + std::to_string(m) + " - y^" + std::to_string(n)});
          CHECK(exact_twisted_count_univariate(corr) == lhs - s + 1);
        }
      }
    }
  }
}

TEST_CASE("stabilized_twisted_count") {
  std::vector<unsigned> ladder{1, 2, 3, 6};
  auto s = stabilized_twisted_count(univariate_corr(5, 5, {"x - y^2"}), ladder);
  CHECK(s.table == std::vector<std::pair<unsigned, std::uint64_t>>{{1, 2}, {2, 4}, {3, 2}, {6, 10}});
  CHECK(s.count == 10);
  CHECK(s.stabilized);
  CHECK_FALSE(s.confirmed);

  std::vector<unsigned> two{1, 2};
  auto d = stabilized_twisted_count(univariate_corr(3, 3, {"y - x"}), two);
  CHECK(d.table == std::vector<std::pair<unsigned, std::uint64_t>>{{1, 3}, {2, 3}});
  CHECK(d.count == 3);
  CHECK(d.stabilized);
  CHECK(d.confirmed);

  auto none = stabilized_twisted_count(univariate_corr(5, 5, {"1"}), ladder);
  CHECK(none.count == 0);
  CHECK(none.stabilized);
  for (const auto& [m, c] : none.table) CHECK(c == 0);

  // x = x^6: zero and the fifth roots of unity, all in F_{3^4}.
  std::vector<unsigned> l8{1, 2, 4, 8};
  auto g = stabilized_twisted_count(univariate_corr(3, 3, {"x - y^2"}), l8);
  CHECK(g.table == std::vector<std::pair<unsigned, std::uint64_t>>{{1, 2}, {2, 2}, {4, 6}, {8, 6}});
  CHECK(g.stabilized);
  CHECK(g.confirmed);

  std::vector<unsigned> bad{1, 6};
  CHECK_THROWS_AS(stabilized_twisted_count(univariate_corr(5, 5, {"x - y^2"}), bad), ValidationError);
  CHECK_THROWS_AS(stabilize({{1, 5}, {2, 3}}), PropertyViolation);

  auto u = stabilize({{1, 1}, {2, 4}, {4, 4}});
  CHECK(u.stabilized);
  CHECK(u.confirmed);
  auto grow = stabilize({{1, 1}, {2, 4}, {3, 1}, {4, 4}, {6, 4}, {12, 16}});
  CHECK(grow.count == 16);
  CHECK(grow.stabilized);
  CHECK_FALSE(grow.confirmed);
  // The maximum first appears at m = 4 and repeats at 12.
  auto unstable = stabilize({{1, 1}, {2, 4}, {3, 1}, {4, 5}, {6, 4}, {12, 5}});
  CHECK(unstable.count == 5);
  CHECK(unstable.stabilized);
  CHECK(unstable.confirmed);
  auto drift = stabilize({{1, 1}, {2, 4}, {4, 4}, {8, 6}});
  CHECK(drift.count == 6);
  CHECK_FALSE(drift.confirmed);
  auto lost = stabilize({{1, 1}, {2, 4}, {3, 6}, {6, 6}, {4, 4}, {12, 9}});
  CHECK(lost.count == 9);
  auto broken = stabilize({{1, 1}, {2, 6}, {3, 1}, {6, 7}, {4, 6}, {12, 7}});
  CHECK(broken.stabilized);
  auto fail = stabilize({{1, 1}, {2, 7}, {4, 7}, {3, 2}, {6, 7}, {12, 8}});
  CHECK(fail.count == 8);
  CHECK_FALSE(fail.confirmed);
  auto miss = stabilize({{1, 2}, {2, 3}, {4, 3}, {8, 3}, {3, 3}, {6, 3}});
  CHECK(miss.stabilized);
  CHECK(miss.confirmed);
  auto gap = stabilize({{1, 2}, {2, 3}, {3, 4}, {6, 4}, {4, 3}, {12, 5}});
  CHECK(gap.count == 5);
}

TEST_CASE("twisted counts are monotone along divisibility") {
  std::mt19937_64 rng(23);
  std::vector<unsigned> ladder{1, 2, 3, 4, 6, 12};
  for (int trial = 0; trial < 30; ++trial) {
    auto corr = univariate_corr(trial % 2 ? 3 : 2, trial % 2 ? 3 : 2, {random_poly_text(rng, {"x", "y"}, 3, 3)});
    CHECK_NOTHROW(stabilized_twisted_count(corr, ladder));
  }
}

TEST_CASE("diagonal recovers the points of X over F_q") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    std::uint64_t p = trial % 2 ? 5 : 3;
    FieldCtx fp = make_field(p, 1);
    VariableNames xy{"x", "y"};
    VariableNames all{"x", "y", "u", "v"};
    std::vector<MultiPoly> X{parse_poly(random_poly_text(rng, xy.names, 3, 3), xy, fp)};
    std::vector<MultiPoly> diag{parse_poly("u - x", all, fp), parse_poly("v - y", all, fp)};
    Correspondence corr(AffineSystem(fp, xy.names, X), diag, p);
    CHECK(twisted_count(corr, 1) == count_points(corr.X(), fp));
  }
}

TEST_CASE("Hasse band on elliptic curves") {
  for (std::uint64_t p : {5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull, 41ull, 43ull}) {
    auto X = system(p, {"x", "y"}, {"y^2 - x^3 - x - 1"});
    // Affine count = projective count - 1.
    auto N = static_cast<double>(count_points(X, make_field(p, 1)));
    CHECK(std::abs(N - static_cast<double>(p)) <= 2 * std::sqrt(static_cast<double>(p)) + 1);
  }
}

TEST_CASE("curve_degrees") {
  FieldCtx f5 = make_field(5, 1);
  VariableNames xy{"x", "y"};
  auto d = curve_degrees(parse_poly("x^10 - y^3", xy, f5));
  CHECK(d.deg_p1 == 3);
  CHECK(d.degins_p2_upper == 5);
  auto id = curve_degrees(parse_poly("y - x", xy, f5));
  CHECK(id.deg_p1 == 1);
  CHECK(id.degins_p2_upper == 1);
  auto e = curve_degrees(parse_poly("x^50 - y^4", xy, f5));
  CHECK(e.deg_p1 == 4);
  CHECK(e.degins_p2_upper == 25);
  CHECK_THROWS_AS(curve_degrees(parse_poly("y^2 - 1", xy, f5)), ValidationError);
  CHECK_THROWS_AS(curve_degrees(parse_poly("x^2 - 1", xy, f5)), ValidationError);
}

TEST_CASE("nonempty_open_check") {
  FieldCtx f5 = make_field(5, 1);
  VariableNames xy{"x", "y"};
  auto corr = univariate_corr(5, 5, {"x - y^2"});
  std::vector<unsigned> six{1, 2, 3, 6};
  std::vector<MultiPoly> x_nonzero{parse_poly("x", xy, f5)};
  CHECK(nonempty_open_check(corr, x_nonzero, six));
  std::vector<MultiPoly> empty_open{parse_poly("0", xy, f5)};
  CHECK_FALSE(nonempty_open_check(corr, empty_open, six));
  std::vector<MultiPoly> everything{parse_poly("1", xy, f5)};
  CHECK(nonempty_open_check(corr, everything, six));
  // Only x = 0 and x = 1 over F_5; excluding both leaves nothing at m = 1.
  std::vector<unsigned> one{1};
  std::vector<MultiPoly> away{parse_poly("x^2 - x", xy, f5)};
  CHECK_FALSE(nonempty_open_check(corr, away, one));
  CHECK(nonempty_open_check(corr, away, six));
  CHECK(nonempty_open_check(corr, away, six, {.budget = 1}));
  CHECK_FALSE(nonempty_open_check(corr, away, one, {.budget = 1}));
}

TEST_CASE("sample_dominance") {
  auto corr = univariate_corr(5, 5, {"x - y^2"});
  auto d = sample_dominance(corr, 2, 50, 9);
  CHECK(d.samples == 50);
  CHECK(d.p1_hit_rate == 1.0);
  CHECK(d.p2_hit_rate == 1.0);
  // C = x - 1 only lives over x = 1: p_1 is not dominant.
  auto flat = sample_dominance(univariate_corr(5, 5, {"x - 1"}), 2, 50, 9);
  CHECK(flat.p1_hit_rate < 0.2);
  CHECK(flat.p2_hit_rate == 1.0);
}

TEST_CASE("certify_zero_dimensional") {
  CHECK(certify_zero_dimensional(system(5, {"x"}, {"x^3 - 1"})));
  CHECK_FALSE(certify_zero_dimensional(system(5, {"x"}, {"0"})));
  CHECK(certify_zero_dimensional(system(5, {"x", "y"}, {"x^2 - 1", "y^2 - 1"})));
  CHECK(certify_zero_dimensional(system(5, {"x", "y"}, {"x - y", "x + y - 1"})));
  CHECK(certify_zero_dimensional(system(3, {"x", "y"}, {"x^2*y + y^3 + 1", "x^3 - x*y + 2"})));
  CHECK_FALSE(certify_zero_dimensional(system(5, {"x", "y"}, {"x*y"})));
  CHECK_FALSE(certify_zero_dimensional(system(5, {"x", "y"}, {"x - y", "2*x - 2*y"})));
  CHECK_FALSE(certify_zero_dimensional(system(5, {"x", "y"}, {"x*y", "x*(y+1)"})));
  CHECK(certify_zero_dimensional(system(7, {"x", "y", "z"}, {"x - y", "y - z", "z^2 - 1"})));
  CHECK(certify_zero_dimensional(system(7, {"x", "y", "z"}, {"x^2 + y*z - 1", "y^2 - x*z + 2", "z^3 + x*y*z - 3"})));
  CHECK_FALSE(certify_zero_dimensional(system(7, {"x", "y", "z"}, {"x*y", "y*z", "z*x"})));
  CHECK_FALSE(certify_zero_dimensional(system(7, {"x", "y", "z"}, {"x - y", "y - z"})));
  CHECK_FALSE(certify_zero_dimensional(system(7, {"x", "y", "z"}, {"x - y", "2*x - 2*y", "z"})));
}

TEST_CASE("certified finite counts respect finiteness over a ladder") {
  // A certified system cannot have all of F_{p^m}^n as solutions, and its
  // counts are bounded by the product of total degrees.
  std::mt19937_64 rng(25);
  int certified = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto X = system(3, {"x", "y"},
                    {random_poly_text(rng, {"x", "y"}, 2, 3), random_poly_text(rng, {"x", "y"}, 2, 3)});
    if (!certify_zero_dimensional(X)) continue;
    ++certified;
    std::uint64_t bound = 1;
    for (const auto& e : X.equations()) bound *= static_cast<std::uint64_t>(e.total_degree().value());
    std::vector<unsigned> ladder{1, 2, 3, 6};
    for (const auto& [m, c] : stabilized_point_count(X, ladder).table) CHECK(c <= bound);
  }
  CHECK(certified > 10);
}
