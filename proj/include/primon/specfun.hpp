#pragma once

// Extended-precision special functions and prime-indexed sums/integrals.
//
//   zeta_real      Riemann zeta for real b > 1, Euler-Maclaurin with exact
//                  rational Bernoulli numbers; truncation adapts to the
//                  working precision.
//   euler_gamma    Euler-Mascheroni constant by the Brent-McMillan Bessel
//                  scheme (error ~ e^-4n, n picked from the precision).
//   li_offset      Li(x) = integral from 2 to x of dt/ln t.  The lower
//                  limit 2 is a convention choice (it matches every other
//                  integral here, which all start at 2) -- documented, not
//                  canonical.
//   bertrand_B     integral from 2 to x of dt/(t^b ln t), 0 < b < 1.
//   prime_sum_S    sum of p^-b over table primes p <= x.
//   J_b_closed     integral from 2 to x of pi(t) dt/t^(1+b), evaluated
//                  exactly as the step-function sum (p^-b - x^-b)/b.
//   I_b            integral from 2 to x of Li(t) dt/t^(1+b).  Computed by
//                  integration by parts: with Li(2) = 0,
//                      I_b(x) = (B_b(x) - Li(x) x^-b) / b,
//                  which avoids a nested adaptive quadrature whose inner
//                  values carry uncontrolled error.
//   mertens_product  prod over p <= x of (1 - 1/p)^-1 as exp of a
//                  compensated log-sum.
//   c_b_constant   sum over primes of [ln(1 - p^-b) + p^-b] with a
//                  certified tail radius from the integral majorant
//                  sum_{n>x} n^-2b.
//
// All prime-indexed accumulations run through util::deterministic_sum:
// ascending order, Neumaier compensation, bit-stable under threading.

#include <cstdint>
#include <functional>

#include "primon/primes.hpp"
#include "primon/xreal.hpp"

namespace primon::specfun {

// Adaptive quadrature configuration: bisection on 15-point Gauss-Legendre
// panels with an absolute tolerance budget split proportionally to
// sub-interval length.
struct Quadrature {
  XReal abs_tol = XReal(1e-20);
  unsigned max_depth = 48;
};

struct QuadResult {
  XReal value;
  XReal error_estimate;  // <= abs_tol on success
  std::size_t panels = 0;
};

// Integrate f over [a, b].  Throws ResourceError when the local budget is
// still unmet at max_depth.
QuadResult integrate(const std::function<XReal(const XReal&)>& f, const XReal& a,
                     const XReal& b, const Quadrature& q = {});

// A single non-adaptive GL15 panel.  Scan engines use this per prime gap,
// where the interval is short and the integrand analytic, making the panel
// error negligible next to the working precision.
XReal gl15_panel(const std::function<XReal(const XReal&)>& f, const XReal& a, const XReal& b);

// Riemann zeta on the real line, b > 0, b != 1.  Euler-Maclaurin furnishes
// the analytic continuation through (0,1), where the value is negative.
XReal zeta_real(const XReal& b);

// Euler-Mascheroni constant at the current default precision (cached).
XReal euler_gamma();

XReal li_offset(const XReal& x, const Quadrature& q = {});
XReal bertrand_B(const XReal& b, const XReal& x, const Quadrature& q = {});

// Same integrals with the full quadrature result (value, error estimate,
// panel count) for report emission.
QuadResult li_offset_result(const XReal& x, const Quadrature& q = {});
QuadResult bertrand_B_result(const XReal& b, const XReal& x, const Quadrature& q = {});
XReal prime_sum_S(const XReal& b, std::uint64_t x, const primes::PrimeTable& t);
XReal J_b_closed(const XReal& b, std::uint64_t x, const primes::PrimeTable& t);
XReal I_b(const XReal& b, const XReal& x, const Quadrature& q = {});
XReal mertens_product(std::uint64_t x, const primes::PrimeTable& t);

struct CbResult {
  XReal value;        // partial sum over every table prime
  XReal tail_radius;  // certified bound on the omitted tail
};

// Partial C_b over the whole table plus the certified tail radius.  The
// overload taking required_radius throws ResourceError (carrying the best
// achieved radius) when the table cannot certify the request.
CbResult c_b_constant(const XReal& b, const primes::PrimeTable& t);
CbResult c_b_constant(const XReal& b, const primes::PrimeTable& t, const XReal& required_radius);

}  // namespace primon::specfun
