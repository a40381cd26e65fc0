#pragma once

#include <cstdint>
#include <vector>

#include "froblab/ff_core.hpp"

/// Dense univariate polynomials over a prime field F_p, coefficients low to
/// high, always trimmed (the zero polynomial is empty). All residues are
/// kept in [0, p) with p < 2^31.
namespace froblab::fp {

using Poly = std::vector<std::uint64_t>;

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);

void trim(Poly& a);
/// -1 for the zero polynomial.
long degree(const Poly& a);

Poly add(const Poly& a, const Poly& b, std::uint64_t p);
Poly sub(const Poly& a, const Poly& b, std::uint64_t p);
Poly mul(const Poly& a, const Poly& b, std::uint64_t p);
Poly scale(const Poly& a, std::uint64_t c, std::uint64_t p);
Poly monic(const Poly& a, std::uint64_t p);
Poly derivative(const Poly& a, std::uint64_t p);

/// Quotient and remainder; b must be nonzero.
void divmod(const Poly& a, const Poly& b, std::uint64_t p, Poly& q, Poly& r);
Poly rem(const Poly& a, const Poly& b, std::uint64_t p);
Poly quo(const Poly& a, const Poly& b, std::uint64_t p);
/// Monic gcd; gcd(0, 0) = 0.
Poly gcd(Poly a, Poly b, std::uint64_t p);

Poly mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p);
Poly powmod(const Poly& base, const BigInt& e, const Poly& m, std::uint64_t p);
Poly powmod(const Poly& base, std::uint64_t e, const Poly& m, std::uint64_t p);

/// The polynomial x.
inline Poly x() { return Poly{0, 1}; }

}  // namespace froblab::fp
