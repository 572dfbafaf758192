// Special functions against frozen high-precision references:
//   zeta(b) by Euler-Maclaurin, Euler's gamma, the offset logarithmic
//   integral Li(x) = integral_2^x dt/ln t, the comparator integral
//   B_b(x) = integral_2^x dt/(t^b ln t), the prime sums S_b(x) = sum p^-b,
//   J_b(x) = (1/b) sum (p^-b - x^-b), I_b(x) = (B_b(x) - Li(x) x^-b)/b,
//   the Mertens product prod_{p<=x} (1-1/p)^-1, and the C_b partial sum
//   sum [ln(1 - p^-b) + p^-b] with its certified tail radius.
// Quadrature is 15-point Gauss-Legendre with adaptive bisection and a
// proportional error budget.
#include "doctest.h"

#include <cmath>

#include "primon/errors.hpp"
#include "primon/primes.hpp"
#include "primon/specfun.hpp"
#include "primon/xreal.hpp"
#include "oracles/reference_values.hpp"

using primon::ResourceError;
using primon::XReal;
namespace specfun = primon::specfun;
namespace primes = primon::primes;

namespace {
XReal tol(double v) { return XReal(v); }
}  // namespace

TEST_CASE("a single Gauss-Legendre panel is exact through degree 29") {
  // 15 nodes integrate polynomials of degree <= 2*15-1 exactly.
  for (unsigned k : {0u, 1u, 7u, 15u, 29u}) {
    XReal got = specfun::gl15_panel(
        [k](const XReal& x) { return pow(x, static_cast<long>(k)); }, XReal(0), XReal(1));
    XReal want = XReal(1) / XReal(static_cast<long>(k + 1));
    CHECK(primon::rel_diff(got, want) < tol(1e-35));
  }
}

TEST_CASE("adaptive integration hits classical integrals inside its estimate") {
  specfun::Quadrature q;
  q.abs_tol = XReal(1e-30);
  XReal pi = XReal::const_pi(XReal::default_precision());
  specfun::QuadResult r = specfun::integrate(
      [](const XReal& x) { return exp(-x) ; }, XReal(0), XReal(20), q);
  XReal want = XReal(1) - exp(XReal(-20));
  CHECK(abs(r.value - want) < XReal(1e-28));
  CHECK(r.error_estimate <= q.abs_tol);
  CHECK(r.panels >= 1);

  specfun::QuadResult s = specfun::integrate(
      [](const XReal& x) { return XReal(1) / (XReal(1) + x * x); }, XReal(0), XReal(1), q);
  CHECK(abs(s.value - pi / XReal(4)) < XReal(1e-28));
}

TEST_CASE("integration rejects reversed bounds and reports exhausted budgets") {
  CHECK_THROWS_AS((void)specfun::integrate([](const XReal& x) { return x; }, XReal(1), XReal(0),
                                           {}),
                  std::domain_error);
  // An interior near-singularity with a tiny budget and no depth to spend.
  specfun::Quadrature starved;
  starved.abs_tol = XReal(1e-40);
  starved.max_depth = 3;
  bool threw = false;
  try {
    (void)specfun::integrate([](const XReal& x) { return XReal(1) / sqrt(abs(x) + XReal(1e-30)); },
                             XReal(0), XReal(1), starved);
  } catch (const ResourceError& e) {
    threw = true;
    CHECK(e.has_best_achieved());
  }
  CHECK(threw);
}

TEST_CASE("zeta matches the references at several exponents") {
  CHECK(primon::rel_diff(specfun::zeta_real(XReal("1.1")), XReal(oracle::kZeta_1_1)) < tol(1e-36));
  CHECK(primon::rel_diff(specfun::zeta_real(XReal(2)), XReal(oracle::kZeta_2)) < tol(1e-36));
  CHECK(primon::rel_diff(specfun::zeta_real(XReal(3)), XReal(oracle::kZeta_3)) < tol(1e-36));
  CHECK(primon::rel_diff(specfun::zeta_real(XReal(9)), XReal(oracle::kZeta_9)) < tol(1e-36));
  CHECK(primon::rel_diff(specfun::zeta_real(XReal(10)), XReal(oracle::kZeta_10)) < tol(1e-36));
}

TEST_CASE("zeta(2) reproduces pi^2/6 at elevated precision") {
  XReal::set_default_precision(256);
  XReal z = specfun::zeta_real(XReal(2));
  XReal pi = XReal::const_pi(256);
  XReal err = primon::rel_diff(z, pi * pi / XReal(6));
  XReal::set_default_precision(128);
  CHECK(err < tol(1e-74));
}

TEST_CASE("zeta continues through (0,1) and rejects only the pole") {
  // zeta(1/2) = -1.4603545088095868... via the same Euler-Maclaurin tail
  // that cancels the divergent partial sum.
  XReal z = specfun::zeta_real(XReal(0.5));
  CHECK(z < XReal(0));
  CHECK(primon::rel_diff(z, XReal("-1.4603545088095868")).to_double() < 1e-15);
  CHECK_THROWS_AS((void)specfun::zeta_real(XReal(1)), std::domain_error);
  CHECK_THROWS_AS((void)specfun::zeta_real(XReal(0)), std::domain_error);
  CHECK_THROWS_AS((void)specfun::zeta_real(XReal(-2)), std::domain_error);
}

TEST_CASE("euler_gamma matches the reference at 128 and 256 bits") {
  CHECK(primon::rel_diff(specfun::euler_gamma(), XReal(oracle::kEulerGamma)) < tol(1e-37));
  XReal::set_default_precision(256);
  XReal g = specfun::euler_gamma();
  XReal err = primon::rel_diff(g, XReal(oracle::kEulerGamma));
  XReal::set_default_precision(128);
  // The reference string carries 40 digits; agreement is limited by it.
  CHECK(err < tol(1e-39));
}

TEST_CASE("the offset logarithmic integral starts at zero and hits references") {
  CHECK(specfun::li_offset(XReal(2)).is_zero());
  CHECK(primon::rel_diff(specfun::li_offset(XReal(10'000)), XReal(oracle::kLiOffset_1e4)) <
        tol(1e-19));
  CHECK(primon::rel_diff(specfun::li_offset(XReal(1'000'000)), XReal(oracle::kLiOffset_1e6)) <
        tol(1e-19));
  CHECK_THROWS_AS((void)specfun::li_offset(XReal(1.5)), std::domain_error);
}

TEST_CASE("li_offset is additive over subranges") {
  specfun::Quadrature q;
  XReal whole = specfun::li_offset(XReal(5'000), q);
  XReal head = specfun::li_offset(XReal(700), q);
  specfun::QuadResult tail = specfun::integrate(
      [](const XReal& x) { return XReal(1) / log(x); }, XReal(700), XReal(5'000), q);
  CHECK(abs(whole - (head + tail.value)) < tol(1e-18));
}

TEST_CASE("the comparator integral B_b matches references and is monotone") {
  XReal b("0.75");
  CHECK(primon::rel_diff(specfun::bertrand_B(b, XReal(100)), XReal(oracle::kBertrand_075_1e2)) <
        tol(1e-19));
  CHECK(primon::rel_diff(specfun::bertrand_B(b, XReal(10'000)), XReal(oracle::kBertrand_075_1e4)) <
        tol(1e-19));
  CHECK(specfun::bertrand_B(b, XReal(2)).is_zero());
  CHECK(specfun::bertrand_B(b, XReal(500)) < specfun::bertrand_B(b, XReal(600)));
  CHECK_THROWS_AS((void)specfun::bertrand_B(XReal(2), XReal(100)), std::domain_error);
  CHECK_THROWS_AS((void)specfun::bertrand_B(XReal("0.75"), XReal(1)), std::domain_error);
}

TEST_CASE("prime sums match the references") {
  primes::PrimeTable t = primes::sieve_first(200);  // covers 1000
  XReal b("0.75");
  CHECK(primon::rel_diff(specfun::prime_sum_S(b, 100, t), XReal(oracle::kPrimeSum_075_1e2)) <
        tol(1e-36));
  CHECK(primon::rel_diff(specfun::prime_sum_S(b, 1'000, t), XReal(oracle::kPrimeSum_075_1e3)) <
        tol(1e-36));
  // Integer exponents ride the fast path; cross-check against the pow path.
  XReal via_int = specfun::prime_sum_S(XReal(2), 1'000, t);
  XReal direct(0);
  for (std::uint64_t p : t.primes) {
    if (p > 1'000) break;
    direct += XReal(1) / XReal(static_cast<long>(p * p));
  }
  CHECK(primon::rel_diff(via_int, direct) < tol(1e-36));
}

TEST_CASE("J_b matches the reference and the Stieltjes identity holds") {
  primes::PrimeTable t = primes::sieve_first(200);
  XReal b("0.75");
  CHECK(primon::rel_diff(specfun::J_b_closed(b, 1'000, t), XReal(oracle::kJb_075_1e3)) <
        tol(1e-36));
  // S_b(x) = pi(x)/x^b + b*J_b(x) with pi(x) read off the same table.
  for (std::uint64_t x : {100ull, 500ull, 1'000ull}) {
    XReal xs(static_cast<long>(x));
    XReal lhs = specfun::prime_sum_S(b, x, t);
    XReal pi_x(static_cast<long>(t.index_below(x)));
    XReal rhs = pi_x * pow(xs, -b) + b * specfun::J_b_closed(b, x, t);
    CHECK(primon::rel_diff(lhs, rhs) < tol(1e-34));
  }
}

TEST_CASE("I_b combines the comparator integral and Li as references say") {
  XReal got = specfun::I_b(XReal("0.75"), XReal(10'000));
  CHECK(primon::rel_diff(got, XReal(oracle::kIb_075_1e4)) < tol(1e-19));
}

TEST_CASE("the Mertens product over primes <= 29 is the exact rational") {
  primes::PrimeTable t = primes::sieve_first(10);
  XReal got = specfun::mertens_product(29, t);
  CHECK(primon::rel_diff(got, XReal(oracle::kMertens29)) < tol(1e-36));
  // Exact cross-check: prod p/(p-1) over the first 10 primes.
  mpq_class exact(1);
  for (std::uint64_t p : t.primes) {
    exact *= mpq_class(static_cast<unsigned long>(p), static_cast<unsigned long>(p - 1));
  }
  CHECK(primon::rel_diff(got, XReal(exact)) < tol(1e-36));
}

TEST_CASE("C_b partial sum and tail radius behave as documented") {
  primes::PrimeTable t10 = primes::sieve_first(10);
  specfun::CbResult r = specfun::c_b_constant(XReal("0.75"), t10);
  CHECK(primon::rel_diff(r.value, XReal(oracle::kCbPartial10_075)) < tol(1e-36));
  CHECK(r.tail_radius > XReal(0));

  // A longer table must move the partial sum by less than the old radius
  // and must shrink the radius.
  primes::PrimeTable t100 = primes::sieve_first(100);
  specfun::CbResult r2 = specfun::c_b_constant(XReal("0.75"), t100);
  CHECK(abs(r2.value - r.value) < r.tail_radius);
  CHECK(r2.tail_radius < r.tail_radius);

  CHECK_THROWS_AS((void)specfun::c_b_constant(XReal(2), t10), std::domain_error);
  // Requesting a radius the table cannot certify is a resource failure that
  // still reports the best achieved bound.
  bool threw = false;
  try {
    (void)specfun::c_b_constant(XReal("0.75"), t10, XReal(1e-30));
  } catch (const ResourceError& e) {
    threw = true;
    CHECK(e.has_best_achieved());
  }
  CHECK(threw);
}
