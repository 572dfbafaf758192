// Prime-product criterion scans.  The objects under test:
//   Nicolas inequality   N_q/phi(N_q) > e^gamma ln ln N_q, rearranged as
//                        prod(1-1/p)^-1 / ln theta(p_q) > e^gamma;
//   normalized ratio     R_b(N_q) = [psi_b(N_q)/N_q] / ln theta(p_q), whose
//                        margin over e^gamma/zeta(b) is epsilon_{b+1}(q);
//   proof functions      f(x) = e^gamma ln theta(x) prod_{p<=x}(1-1/p) and
//                        g(x) = [e^gamma/zeta(b)] ln theta(x) / [psi_b/N], with
//                        the duality g(p_n) R_b(N_n) = e^gamma/zeta(b);
//   high-temperature     D(x) = S_b(x) - B_b(x) drift,
//   diagnostics          rho(n) -> K_b estimate, and the lower-bound scan
//                        driven by the injected K_b estimate.
#include "doctest.h"

#include <string>
#include <vector>

#include "primon/criteria.hpp"
#include "primon/kms.hpp"
#include "primon/primes.hpp"
#include "primon/specfun.hpp"
#include "primon/xreal.hpp"
#include "oracles/reference_values.hpp"

using primon::XReal;
namespace criteria = primon::criteria;
namespace kms = primon::kms;
namespace primes = primon::primes;
namespace specfun = primon::specfun;

TEST_CASE("nicolas_check at the smallest indices matches hand arithmetic") {
  primes::PrimeTable t = primes::sieve_first(10);
  // q = 2: N = 6, N/phi(N) = 3; threshold side e^gamma ln ln 6 = 1.0387...
  kms::CriterionRow r2 = criteria::nicolas_check(2, t);
  XReal lnln6 = log(t.theta_at(2));
  CHECK(primon::rel_diff(r2.ratio_R * lnln6, XReal(3)) < XReal(1e-35));
  CHECK(primon::rel_diff(r2.threshold * lnln6, XReal(oracle::kNicolasThreshold_q2)) < XReal(1e-36));
  CHECK(r2.holds);
  // q = 3: N = 30, N/phi(N) = 30/8.
  kms::CriterionRow r3 = criteria::nicolas_check(3, t);
  XReal lnln30 = log(t.theta_at(3));
  CHECK(primon::rel_diff(r3.ratio_R * lnln30, XReal(30) / XReal(8)) < XReal(1e-35));
  CHECK(primon::rel_diff(r3.threshold * lnln30, XReal(oracle::kNicolasThreshold_q3)) < XReal(1e-36));
  CHECK(r3.holds);
  // The threshold column is e^gamma itself.
  CHECK(primon::rel_diff(r2.threshold, exp(specfun::euler_gamma())) < XReal(1e-37));
}

TEST_CASE("nicolas_scan holds everywhere in the desk range") {
  primes::PrimeTable t = primes::sieve_first(10'000);
  criteria::ScanResult s = criteria::nicolas_scan(10'000, t);
  REQUIRE(s.rows.size() == 9'999);
  CHECK(s.all_hold);
  CHECK(!s.first_failure.has_value());
  CHECK(s.rows.front().q == 2);
  CHECK(s.rows.back().q == 10'000);
  // Scan rows are bit-identical to the pointwise evaluation.
  for (std::size_t q : {2u, 17u, 500u, 9'999u}) {
    kms::CriterionRow point = criteria::nicolas_check(q, t);
    const kms::CriterionRow& row = s.rows[q - 2];
    CHECK(mpfr_equal_p(row.ratio_R.raw(), point.ratio_R.raw()));
    CHECK(mpfr_equal_p(row.epsilon.raw(), point.epsilon.raw()));
  }
}

TEST_CASE("ratio_R matches references and collapses exactly at b = 1") {
  primes::PrimeTable t = primes::sieve_first(100);
  CHECK(primon::rel_diff(criteria::ratio_R(10, XReal(2), t), XReal(oracle::kRatioR_b2_q10)) <
        XReal(1e-36));
  CHECK(primon::rel_diff(criteria::ratio_R(10, XReal(9), t), XReal(oracle::kRatioR_b9_q10)) <
        XReal(1e-36));
  // psi_1(N)/N = 1, so R_1 is exactly 1/ln theta: every product factor
  // cancels bitwise, not merely to rounding.
  for (std::size_t q : {2u, 10u, 100u}) {
    XReal r1 = criteria::ratio_R(q, XReal(1), t);
    XReal expect = primon::round_to(XReal(1) / log(t.theta_at(q)), XReal::default_precision());
    CHECK(mpfr_equal_p(r1.raw(), expect.raw()));
  }
}

TEST_CASE("ratio_R is bit-identical to the epsilon row it feeds") {
  primes::PrimeTable t = primes::sieve_first(1'000);
  for (const char* beta : {"2.1", "3", "10"}) {
    XReal bv(beta);
    kms::CriterionRow row = kms::epsilon_beta(1'000, bv, t);
    // The scan derives b the same way the row does: beta - 1 in XReal.
    XReal b = bv - XReal(1);
    CHECK(mpfr_equal_p(criteria::ratio_R(1'000, b, t).raw(), row.ratio_R.raw()));
  }
}

TEST_CASE("conjecture_scan holds for the three reference exponents") {
  primes::PrimeTable t = primes::sieve_first(10'000);
  for (const char* bs : {"1.1", "2", "9"}) {
    criteria::ScanResult s = criteria::conjecture_scan(XReal(bs), 10'000, t);
    CHECK(s.all_hold);
    CHECK(s.rows.front().q == 3);
    CHECK(s.rows.size() == 9'998);
  }
  // The last row of b = 2 carries the reference margin.
  criteria::ScanResult s2 = criteria::conjecture_scan(XReal(2), 10'000, t);
  CHECK(primon::rel_diff(s2.rows.back().epsilon, XReal(oracle::kEpsilon_b2_q10000)) < XReal(1e-27));
  CHECK_THROWS_AS((void)criteria::conjecture_scan(XReal(1), 100, t), std::domain_error);
}

TEST_CASE("proof functions match the references at x = 29") {
  primes::PrimeTable t = primes::sieve_first(100);
  CHECK(primon::rel_diff(criteria::f_function(29, t), XReal(oracle::kF29)) < XReal(1e-35));
  CHECK(primon::rel_diff(criteria::g_function(29, XReal(2), t), XReal(oracle::kG29_b2)) <
        XReal(1e-35));
  // f < 1 on the desk range is the Nicolas inequality itself.
  for (std::uint64_t x : {2ull, 29ull, 97ull, 347ull}) {
    CHECK(criteria::f_function(x, t) < XReal(1));
  }
}

TEST_CASE("f and g are evaluated at the largest prime below x") {
  primes::PrimeTable t = primes::sieve_first(100);
  CHECK(mpfr_equal_p(criteria::f_function(30, t).raw(), criteria::f_function(29, t).raw()));
  CHECK(mpfr_equal_p(criteria::g_function(30, XReal(2), t).raw(),
                     criteria::g_function(29, XReal(2), t).raw()));
}

TEST_CASE("duality: g(p_n) times R_b(N_n) is the criterion threshold") {
  primes::PrimeTable t = primes::sieve_first(2'000);
  for (const char* bs : {"1.1", "2", "5.5", "9"}) {
    XReal b(bs);
    XReal threshold = kms::criterion_threshold(b);
    for (std::size_t n : {2u, 10u, 137u, 2'000u}) {
      XReal prod = criteria::g_function(t.primes[n - 1], b, t) * criteria::ratio_R(n, b, t);
      // Both factors are independently rounded at the working precision, so
      // equality is to a few ulps; 2^-(P-3) covers it with margin to spare.
      CHECK(abs(prod - threshold) / threshold < pow(XReal(2), XReal(-125)));
    }
  }
}

TEST_CASE("log g dominates log f minus b over x on the reference grid") {
  primes::PrimeTable t = primes::sieve_first(1'300);
  XReal b(2);
  for (std::uint64_t x : {100ull, 1'000ull, 10'000ull}) {
    XReal lg = log(criteria::g_function(x, b, t));
    XReal lf = log(criteria::f_function(x, t));
    CHECK(lg >= lf - b / XReal(static_cast<long>(x)));
  }
}

TEST_CASE("sum-vs-integral drift matches the pinned reference window") {
  primes::PrimeTable t = primes::sieve_first(200);
  criteria::AsymptoticsReport rep =
      criteria::sum_vs_integral_report(XReal("0.75"), {100, 1'000}, t);
  REQUIRE(rep.samples.size() == 2);
  XReal d100 = XReal(oracle::kPrimeSum_075_1e2) - XReal(oracle::kBertrand_075_1e2);
  CHECK(primon::rel_diff(rep.samples[0].second, d100) < XReal(1e-18));
  CHECK(rep.samples[0].first == 100);
  CHECK(rep.drift >= XReal(0));
  CHECK_THROWS_AS((void)criteria::sum_vs_integral_report(XReal(2), {100}, t), std::domain_error);
  CHECK_THROWS_AS((void)criteria::sum_vs_integral_report(XReal("0.75"), {1'000, 100}, t),
                  std::domain_error);
}

TEST_CASE("k_b estimate stabilizes onto the pinned values") {
  primes::PrimeTable t = primes::sieve_first(10'000);
  criteria::AsymptoticsReport rep =
      criteria::k_b_estimate(XReal("0.75"), {5'000, 10'000}, t);
  REQUIRE(rep.samples.size() == 2);
  CHECK(primon::rel_diff(rep.samples[0].second, XReal(oracle::kRho_b075_n5000)).to_double() <
        1e-13);
  CHECK(primon::rel_diff(rep.samples[1].second, XReal(oracle::kRho_b075_n10000)).to_double() <
        1e-13);
  CHECK(rep.final_rel_change.to_double() < 0.05);
}

TEST_CASE("lower-bound scan holds with the estimated constant and fails with an absurd one") {
  primes::PrimeTable t = primes::sieve_first(10'000);
  criteria::ScanResult ok =
      criteria::lower_bound_check(XReal("0.75"), XReal("0.05"), 2'000, 10'000, t);
  CHECK(ok.rows.size() == 8'001);
  CHECK(ok.all_hold);
  CHECK(!ok.first_failure.has_value());

  // Inject k_hat far above the true constant: every margin must go negative,
  // the failure is structural (first row), and all_hold drops.
  criteria::ScanResult bad = criteria::lower_bound_check(XReal("0.75"), XReal("0.05"), 2'000,
                                                         2'100, XReal(10), t);
  CHECK(!bad.all_hold);
  REQUIRE(bad.first_failure.has_value());
  CHECK(*bad.first_failure == 0);
  CHECK(bad.rows.front().epsilon < XReal(0));
}

TEST_CASE("the lower-bound description records both readings") {
  std::string d = criteria::lower_bound_description();
  CHECK(d.find("k_hat") != std::string::npos);
  CHECK(d.find("e^gamma") != std::string::npos);
  CHECK(d.find("violated") != std::string::npos);
}

TEST_CASE("prop1 convergence approaches one from above along the grid") {
  primes::PrimeTable t = primes::sieve_first(10'000);
  criteria::AsymptoticsReport rep =
      criteria::prop1_convergence(XReal(9), {10, 100, 1'000, 10'000}, t);
  REQUIRE(rep.samples.size() == 4);
  CHECK(primon::rel_diff(rep.samples[0].second, XReal(oracle::kProp1Sample_b9_q10)) <
        XReal(1e-27));
  for (const auto& [n, v] : rep.samples) CHECK(v > XReal(1));
  CHECK(rep.trend == criteria::Trend::decreasing);
  // b = 2 at n = 10^4: 1 + epsilon * zeta(2)/e^gamma with the grid margin.
  criteria::AsymptoticsReport p2 = criteria::prop1_convergence(XReal(2), {5'000, 10'000}, t);
  XReal expect = XReal(1) + XReal(oracle::kEpsilon_b2_q10000) * specfun::zeta_real(XReal(2)) /
                                exp(specfun::euler_gamma());
  CHECK(primon::rel_diff(p2.samples.back().second, expect) < XReal(1e-26));
}
