#pragma once

// Exact multiplicative number theory on machine-size integers.
//
// All functions here are pure.  Factorization is trial division against the
// shared prime table up to 10^6 followed by Pollard rho (Brent cycle
// variant) on any remaining cofactor, which is ample for inputs below 2^63.
// Primality is the deterministic Miller-Rabin base set valid below 2^64,
// deliberately independent of the sieve so the two can check each other.
//
// The generalized Dedekind function is
//     psi_b(n) = n * prod over p|n of (1 - p^-b) / (1 - p^-1),
// with psi_1 = identity and psi_2 the classical Dedekind psi.  Each factor
// is evaluated literally in that form, so at b = 1 numerator and denominator
// are the same rounded quantity, their log-difference vanishes exactly, and
// psi_1(n) returns the exact integer n.

#include <cstdint>
#include <vector>

#include "primon/xreal.hpp"

namespace primon::arith {

struct PrimePower {
  std::uint64_t p;
  unsigned k;
};

struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;  // ascending in p

  // Multiplies the factorization back together; equals n by construction,
  // re-checked in tests.
  std::uint64_t reconstruct() const;
};

// Deterministic Miller-Rabin, exact for all n < 2^64.
bool is_prime_u64(std::uint64_t n);

// Canonical factorization of 1 <= n < 2^63; n = 1 gives an empty list.
Factorization factorize(std::uint64_t n);

std::uint64_t euler_phi(std::uint64_t n);

// -1, 0, +1 by square-freeness and prime-factor parity.
int mobius(std::uint64_t n);

// Least universal exponent: lambda(2)=1, lambda(4)=2, lambda(2^k)=2^(k-2)
// for k>=3, lambda(p^k)=phi(p^k) for odd p, combined by lcm.
std::uint64_t carmichael_lambda(std::uint64_t n);

// Least r >= 1 with a^r = 1 mod q, found by peeling prime factors off
// lambda(q).  Throws std::domain_error when gcd(a, q) != 1.
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t q);

enum class PsiScale { value, log };

// psi_b(n) (or its natural log when scale = log, for callers whose results
// would overflow any fixed-range float).  Requires b > 0.
XReal dedekind_psi_b(std::uint64_t n, const XReal& b, PsiScale scale = PsiScale::value);

}  // namespace primon::arith
