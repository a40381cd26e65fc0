#include <random>

#include "doctest.h"
#include "froblab/chebotarev.hpp"
#include "froblab/errors.hpp"
#include "froblab/poly.hpp"

using namespace froblab;

namespace {

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 r = 1, b = a % m;
  for (; e; e >>= 1, b = b * b % m)
    if (e & 1) r = r * b % m;
  return static_cast<std::uint64_t>(r);
}

IntUniPoly random_poly(std::mt19937_64& rng, long deg, bool monic) {
  std::vector<BigInt> c;
  for (long i = 0; i <= deg; ++i) c.push_back(static_cast<long>(rng() % 41) - 20);
  if (monic) c.back() = 1;
  if (c.back() == 0) c.back() = 3;
  return IntUniPoly(c);
}

}  // namespace

TEST_CASE("splitting type examples") {
  IntUniPoly g = parse_int_unipoly("x^2 + 1");
  CHECK(splitting_type(g, 5).cycle_type == CycleType{1, 1});
  CHECK(splitting_type(g, 3).cycle_type == CycleType{2});
  SplittingRecord r = splitting_type(g, 2);
  CHECK(r.ramified);
  CHECK(r.cycle_type.empty());
  CHECK_THROWS_AS(splitting_type(g, 9), ValidationError);
  CHECK_THROWS_AS(splitting_type(parse_int_unipoly("2*x^2 + 1"), 5), ValidationError);
  CHECK_THROWS_AS(splitting_type(parse_int_unipoly("7"), 5), ValidationError);
}

TEST_CASE("integer polynomial parsing and printing") {
  IntUniPoly g = parse_int_unipoly("x^3 - 2");
  CHECK(g.coeffs() == std::vector<BigInt>{-2, 0, 0, 1});
  CHECK(g.to_string() == "x^3 - 2");
  CHECK(parse_int_unipoly("(x - 1)^2").to_string() == "x^2 - 2*x + 1");
  CHECK(parse_int_unipoly("x^4 + x^3 + x^2 + x + 1").mod_p(5) == std::vector<std::uint64_t>{1, 1, 1, 1, 1});
  CHECK(g.mod_p(2) == std::vector<std::uint64_t>{0, 0, 0, 1});
}

TEST_CASE("cycle type labels") {
  CHECK(cycle_type_label({1, 1, 2}) == "1,1,2");
  CHECK(parse_cycle_type("2, 1") == CycleType{1, 2});
  CHECK(parse_cycle_type("3") == CycleType{3});
  CHECK_THROWS_AS(parse_cycle_type("1,,2"), ValidationError);
  CHECK_THROWS_AS(parse_cycle_type("0"), ValidationError);
  CHECK_THROWS_AS(parse_cycle_type(""), ValidationError);
}

TEST_CASE("discriminants") {
  CHECK(discriminant(parse_int_unipoly("x^2 + 1")) == -4);
  CHECK(discriminant(parse_int_unipoly("x^3 - 2")) == -108);
  CHECK(discriminant(parse_int_unipoly("x^4 + x^3 + x^2 + x + 1")) == 125);
  CHECK(discriminant(parse_int_unipoly("x^3 - x")) == 4);
  CHECK(discriminant(parse_int_unipoly("(x - 1)^2*(x + 2)")) == 0);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    BigInt b = static_cast<long>(rng() % 101) - 50, c = static_cast<long>(rng() % 101) - 50;
    CHECK(discriminant(IntUniPoly({c, b, 1})) == b * b - 4 * c);
  }
}

TEST_CASE("resultant agrees with the finite-field Sylvester determinant") {
  std::mt19937_64 rng(2);
  FieldCtx F = make_field(10007, 1);
  for (int i = 0; i < 40; ++i) {
    IntUniPoly a = random_poly(rng, 1 + static_cast<long>(rng() % 5), false);
    IntUniPoly b = random_poly(rng, 1 + static_cast<long>(rng() % 5), false);
    std::vector<FieldElement> aa, bb;
    for (auto c : a.mod_p(10007)) aa.push_back(F.from_int(static_cast<std::int64_t>(c)));
    for (auto c : b.mod_p(10007)) bb.push_back(F.from_int(static_cast<std::int64_t>(c)));
    BigInt r = resultant(a, b) % 10007;
    if (r < 0) r += 10007;
    CHECK(F.from_bigint(r) == sylvester_resultant(aa, bb));
    // Res(a, b) = (-1)^{deg a deg b} Res(b, a).
    BigInt s = resultant(b, a);
    CHECK(resultant(a, b) == ((a.degree() * b.degree()) % 2 ? BigInt(-s) : s));
  }
}

TEST_CASE("quadratic and cubic splitting against residue oracles") {
  IntUniPoly g = parse_int_unipoly("x^2 + 1"), h = parse_int_unipoly("x^3 - 2");
  for (std::uint64_t p : primes_up_to(3000)) {
    SplittingRecord r = splitting_type(g, p);
    if (p == 2) {
      CHECK(r.ramified);
      continue;
    }
    CHECK(r.cycle_type == (p % 4 == 1 ? CycleType{1, 1} : CycleType{2}));
    SplittingRecord s = splitting_type(h, p);
    if (p == 3) {
      CHECK(s.ramified);
      continue;
    }
    CHECK_FALSE(s.ramified);
    if (p % 3 == 2) CHECK(s.cycle_type == CycleType{1, 2});
    else if (powmod(2, (p - 1) / 3, p) == 1) CHECK(s.cycle_type == CycleType{1, 1, 1});
    else CHECK(s.cycle_type == CycleType{3});
  }
}

TEST_CASE("cyclotomic splitting is governed by the order of p") {
  const std::vector<std::pair<std::uint64_t, std::string>> phis = {
      {5, "x^4 + x^3 + x^2 + x + 1"}, {7, "x^6 + x^5 + x^4 + x^3 + x^2 + x + 1"},
      {8, "x^4 + 1"}, {12, "x^4 - x^2 + 1"}, {9, "x^6 + x^3 + 1"}};
  for (const auto& [n, text] : phis) {
    IntUniPoly g = parse_int_unipoly(text);
    for (std::uint64_t p : primes_up_to(2000)) {
      SplittingRecord r = splitting_type(g, p);
      if (n % p == 0) {
        CHECK(r.ramified);
        continue;
      }
      unsigned o = multiplicative_order(p, n);
      CHECK(r.cycle_type == CycleType(static_cast<std::size_t>(g.degree()) / o, o));
    }
  }
  CHECK(multiplicative_order(2, 7) == 3);
  CHECK(multiplicative_order(1, 9) == 1);
  CHECK_THROWS_AS(multiplicative_order(3, 9), ValidationError);
}

TEST_CASE("density scan") {
  IntUniPoly g = parse_int_unipoly("x^2 + 1");
  DensityScan s = density_scan(g, 100000);
  std::uint64_t one_mod_four = 0, odd = 0;
  for (auto p : primes_up_to(100000))
    if (p != 2) {
      ++odd;
      if (p % 4 == 1) ++one_mod_four;
    }
  CHECK(s.unramified == odd);
  CHECK(s.counts.at({1, 1}) == one_mod_four);
  CHECK(s.ramified == std::vector<std::uint64_t>{2});
  CHECK(std::abs(s.frequency({1, 1}) - 0.5) <= 0.02);
  double total = 0;
  for (const auto& [t, n] : s.counts) total += s.frequency(t);
  CHECK(total == doctest::Approx(1.0));
  CHECK_THROWS_AS(density_scan(g, 99), ValidationError);

  // Worker count does not change the result.
  IntUniPoly h = parse_int_unipoly("x^3 - 2");
  DensityScan a = density_scan(h, 20000), b = density_scan(h, 20000, 4);
  CHECK(a.counts == b.counts);
  CHECK(a.ramified == b.ramified);
  CHECK(a.ramified == std::vector<std::uint64_t>{2, 3});
}

TEST_CASE("ramified primes divide the discriminant") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    IntUniPoly g = random_poly(rng, 2 + static_cast<long>(rng() % 4), true);
    BigInt d = discriminant(g);
    DensityScan s = density_scan(g, 2000);
    for (auto p : s.ramified) CHECK(d % p == 0);
    // And conversely, for d != 0, every prime divisor of d up to the bound is ramified.
    if (d != 0)
      for (auto p : primes_up_to(2000))
        if (d % p == 0) CHECK(std::binary_search(s.ramified.begin(), s.ramified.end(), p));
  }
}

TEST_CASE("class comparison") {
  IntUniPoly g = parse_int_unipoly("x^2 + 1");
  DensityScan s = density_scan(g, 100000);
  ClassComparison c = compare_to_classes(s, {{{1, 1}, Rational(1, 2)}, {{2}, Rational(1, 2)}});
  CHECK(c.max_deviation <= 0.02);
  CHECK(c.unexpected().empty());
  CHECK(c.rows.size() == 2);

  ClassComparison bad = compare_to_classes(s, {{{1, 1}, Rational(1)}});
  CHECK(bad.max_deviation == doctest::Approx(0.5).epsilon(0.04));
  CHECK(bad.unexpected() == std::vector<CycleType>{{2}});
  CHECK(bad.rows.back().predicted == 0);

  DensityScan lin = density_scan(parse_int_unipoly("x + 1"), 1000);
  ClassComparison triv = compare_to_classes(lin, {{{1}, Rational(1)}});
  CHECK(lin.counts.size() == 1);
  CHECK(lin.frequency({1}) == 1.0);
  CHECK(triv.max_deviation == 0.0);

  CHECK_THROWS_AS(compare_to_classes(s, {{{1, 1}, Rational(1, 2)}}), ValidationError);
  // Predicted but never observed still shows up as a row.
  ClassComparison extra = compare_to_classes(lin, {{{1}, Rational(1, 2)}, {{2}, Rational(1, 2)}});
  CHECK(extra.rows.size() == 2);
  CHECK(extra.max_deviation == 0.5);
}
