// Equilibrium-state values on positive integers:
//   phi_beta(q) = q^-beta * prod_{p|q} (1 - p^(beta-1)) / (1 - p^-1),
// carried in log-magnitude + sign form (sign = (-1)^omega(q) for beta > 1,
// with the degenerate beta = 1 point vanishing factor by factor), the
// ground-state limit phi_inf(q) = mu(q)/phi(q), the normalized primorial
// magnitude N_q |phi_beta(N_q)| = psi_{beta-1}(N_q)/N_q, the criterion margin
//   epsilon_beta(q) = R_{beta-1}(N_q) - e^gamma/zeta(beta-1),
// and the truncated Gibbs machinery  Z_N(beta) = sum_{n<=N} n^-beta.
#include "doctest.h"

#include <vector>

#include "primon/arith.hpp"
#include "primon/kms.hpp"
#include "primon/primes.hpp"
#include "primon/specfun.hpp"
#include "primon/util.hpp"
#include "primon/xreal.hpp"
#include "oracles/reference_values.hpp"

using primon::XReal;
namespace kms = primon::kms;
namespace arith = primon::arith;
namespace primes = primon::primes;
namespace specfun = primon::specfun;

TEST_CASE("phi_beta at hand-checked points") {
  // q = 2, beta = 2: 2^-2 * (1 - 2) / (1 - 1/2) = -1/2.
  kms::KmsValue half = kms::phi_beta(std::uint64_t{2}, XReal(2));
  CHECK(half.sign == -1);
  CHECK(primon::rel_diff(exp(half.log_abs), XReal(0.5)) < XReal(1e-36));

  // q = 6, beta = 2: 6^-2 * (1-2)(1-3) / ((1/2)(2/3)) = (2/36)/(1/3) ... = 1/6.
  kms::KmsValue six = kms::phi_beta(std::uint64_t{6}, XReal(2));
  CHECK(six.sign == 1);
  CHECK(primon::rel_diff(exp(six.log_abs), XReal(1) / XReal(6)) < XReal(1e-35));
}

TEST_CASE("phi_beta sign alternates with the number of distinct prime factors") {
  for (std::uint64_t q : {2ull, 3ull, 4ull, 6ull, 12ull, 30ull, 210ull, 64ull}) {
    kms::KmsValue v = kms::phi_beta(q, XReal(3));
    int omega = static_cast<int>(arith::factorize(q).factors.size());
    CHECK(v.sign == ((omega % 2 == 0) ? 1 : -1));
  }
}

TEST_CASE("phi_beta at beta = 1 degenerates factor by factor") {
  kms::KmsValue v = kms::phi_beta(std::uint64_t{10}, XReal(1));
  CHECK(v.sign == 0);
  CHECK(v.vanishing_factor);
  CHECK(v.log_abs.is_inf());
  CHECK(v.log_abs.sign() < 0);
}

TEST_CASE("phi_beta rejects beta below 1 and q below 2") {
  CHECK_THROWS_AS((void)kms::phi_beta(std::uint64_t{6}, XReal(0.5)), std::domain_error);
  CHECK_THROWS_AS((void)kms::phi_beta(std::uint64_t{1}, XReal(2)), std::domain_error);
  CHECK_THROWS_AS((void)kms::phi_beta(std::uint64_t{0}, XReal(2)), std::domain_error);
}

TEST_CASE("the big-integer overload agrees with the word-size path") {
  XReal beta("2.1");
  // The 15th primorial still fits a machine word.
  mpz_class n15 = primes::primorial_exact(15);
  REQUIRE(n15.fits_ulong_p());
  kms::KmsValue via_u64 = kms::phi_beta(static_cast<std::uint64_t>(n15.get_ui()), beta);
  kms::KmsValue via_mpz = kms::phi_beta(n15, beta);
  CHECK(via_u64.sign == via_mpz.sign);
  CHECK(mpfr_equal_p(via_u64.log_abs.raw(), via_mpz.log_abs.raw()));
}

TEST_CASE("phi_beta on exact primorials matches the normalized ratio") {
  // N_q |phi_beta(N_q)| = psi_{beta-1}(N_q)/N_q; ln N_q = theta(p_q).
  primes::PrimeTable t = primes::sieve_first(40);
  XReal beta(3);
  for (std::size_t q : {2u, 10u, 16u, 25u, 40u}) {
    mpz_class nq = primes::primorial_exact(q);
    kms::KmsValue v = kms::phi_beta(nq, beta);
    XReal lhs = v.log_abs + t.theta_at(q);
    XReal rhs = log(kms::kms_primorial_ratio(q, beta, t));
    CHECK(primon::rel_diff(lhs, rhs) < XReal(1e-33));
    CHECK(v.sign == ((q % 2 == 0) ? 1 : -1));
  }
}

TEST_CASE("phi_infinity is mu over phi") {
  CHECK(kms::phi_infinity(1) == mpq_class(1));
  CHECK(kms::phi_infinity(2) == mpq_class(-1, 1));
  CHECK(kms::phi_infinity(6) == mpq_class(1, 2));
  CHECK(kms::phi_infinity(4) == mpq_class(0));
  CHECK(kms::phi_infinity(30) == mpq_class(-1, 8));
  for (std::uint64_t q = 1; q <= 200; ++q) {
    mpq_class expect(arith::mobius(q));
    expect /= static_cast<unsigned long>(arith::euler_phi(q));
    expect.canonicalize();
    CHECK(kms::phi_infinity(q) == expect);
  }
}

TEST_CASE("kms_primorial_ratio matches the references") {
  primes::PrimeTable t = primes::sieve_first(10);
  CHECK(primon::rel_diff(kms::kms_primorial_ratio(10, XReal(3), t), XReal(oracle::kKmsRatio_b2_q10)) <
        XReal(1e-36));
  CHECK(primon::rel_diff(kms::kms_primorial_ratio(10, XReal("2.1"), t),
                         XReal(oracle::kKmsRatio_b1_1_q10)) < XReal(1e-36));
  CHECK(primon::rel_diff(kms::kms_primorial_ratio(10, XReal(10), t),
                         XReal(oracle::kKmsRatio_b9_q10)) < XReal(1e-36));
  // The beta = 3 case is psi_2(N_10)/N_10, checked against the exact rational.
  CHECK(primon::rel_diff(kms::kms_primorial_ratio(10, XReal(3), t), XReal(oracle::kPsi2RatioN10)) <
        XReal(1e-36));
  CHECK_THROWS_AS((void)kms::kms_primorial_ratio(10, XReal(1), t), std::domain_error);
}

TEST_CASE("epsilon_beta reproduces all twelve reference grid values") {
  primes::PrimeTable t = primes::sieve_first(10'000);
  struct Cell {
    const char* beta;
    std::size_t q;
    const char* expect;
  };
  const Cell grid[] = {
      {"2.1", 10, oracle::kEpsilon_b1_1_q10},     {"2.1", 100, oracle::kEpsilon_b1_1_q100},
      {"2.1", 1'000, oracle::kEpsilon_b1_1_q1000}, {"2.1", 10'000, oracle::kEpsilon_b1_1_q10000},
      {"3", 10, oracle::kEpsilon_b2_q10},         {"3", 100, oracle::kEpsilon_b2_q100},
      {"3", 1'000, oracle::kEpsilon_b2_q1000},    {"3", 10'000, oracle::kEpsilon_b2_q10000},
      {"10", 10, oracle::kEpsilon_b9_q10},        {"10", 100, oracle::kEpsilon_b9_q100},
      {"10", 1'000, oracle::kEpsilon_b9_q1000},   {"10", 10'000, oracle::kEpsilon_b9_q10000},
  };
  for (const Cell& c : grid) {
    kms::CriterionRow row = kms::epsilon_beta(c.q, XReal(c.beta), t);
    CHECK(primon::rel_diff(row.epsilon, XReal(c.expect)) < XReal(1e-27));
    CHECK(row.holds);
    CHECK(row.q == c.q);
  }
}

TEST_CASE("epsilon margins shrink along the reference grid") {
  // For each beta, epsilon decreases strictly over q = 10, 10^2, 10^3, 10^4.
  primes::PrimeTable t = primes::sieve_first(10'000);
  for (const char* beta : {"2.1", "3", "10"}) {
    XReal prev;
    bool first = true;
    for (std::size_t q : {10u, 100u, 1'000u, 10'000u}) {
      XReal e = kms::epsilon_beta(q, XReal(beta), t).epsilon;
      if (!first) CHECK(e < prev);
      prev = e;
      first = false;
    }
  }
}

TEST_CASE("criterion rows are internally consistent") {
  primes::PrimeTable t = primes::sieve_first(100);
  kms::CriterionRow row = kms::epsilon_beta(50, XReal("2.5"), t);
  CHECK(mpfr_equal_p((row.ratio_R - row.threshold).raw(), row.epsilon.raw()));
  CHECK(row.holds == (row.epsilon > XReal(0)));
  CHECK(row.rh_equivalent_regime);
  CHECK(kms::epsilon_beta(50, XReal("2.0001"), t).rh_equivalent_regime);
  CHECK(primon::rel_diff(row.threshold,
                         exp(specfun::euler_gamma()) / specfun::zeta_real(XReal("1.5"))) <
        XReal(1e-36));
}

TEST_CASE("between beta = 1 and 2 the row is computed but flagged off-regime") {
  // zeta(beta - 1) < 0 there, so the margin is trivially positive; the
  // regime flag is what tells a consumer the criterion reads differently.
  primes::PrimeTable t = primes::sieve_first(100);
  kms::CriterionRow row = kms::epsilon_beta(50, XReal("1.5"), t);
  CHECK(!row.rh_equivalent_regime);
  CHECK(row.threshold < XReal(0));
  CHECK(row.holds);
}

TEST_CASE("epsilon_beta rejects undersized indices, low beta, and the pole") {
  primes::PrimeTable t = primes::sieve_first(10);
  CHECK_THROWS_AS((void)kms::epsilon_beta(1, XReal(3), t), std::domain_error);
  CHECK_THROWS_AS((void)kms::epsilon_beta(3, XReal(1), t), std::domain_error);
  CHECK_THROWS_AS((void)kms::epsilon_beta(3, XReal(2), t), std::domain_error);
}

TEST_CASE("partition_truncated equals the directly accumulated sum") {
  // beta = 2, N = 100: compare against an exact rational accumulation.
  mpq_class exact(0);
  for (unsigned long n = 1; n <= 100; ++n) exact += mpq_class(1, n * n);
  XReal z = kms::partition_truncated(XReal(2), 100);
  CHECK(primon::rel_diff(z, XReal(exact)) < XReal(1e-36));
  // Non-integer beta goes through the general power path.
  XReal z21 = kms::partition_truncated(XReal("2.1"), 50);
  primon::CompensatedSum direct(kms::product_precision());
  for (unsigned long n = 1; n <= 50; ++n) {
    direct.add(pow(XReal(static_cast<long>(n)), XReal("-2.1")));
  }
  CHECK(primon::rel_diff(z21, direct.value()) < XReal(1e-35));
}

TEST_CASE("partition truncation error is bounded by the integral tail") {
  // |Z_N(beta) - zeta(beta)| <= N^(1-beta)/(beta-1) on a compact grid.  At
  // beta = 10, N = 10^4 the analytic slack between the true tail and the bound
  // is only (1/2)N^-beta ~ 5e-41, below the 128-bit noise floor of ~1e-38, so
  // the comparison runs at 256 bits where rounding noise is ~1e-77.
  struct PrecGuard {
    unsigned saved = XReal::default_precision();
    ~PrecGuard() { XReal::set_default_precision(saved); }
  } guard;
  XReal::set_default_precision(256);
  for (long beta : {2l, 3l, 10l}) {
    XReal z = specfun::zeta_real(XReal(beta));
    for (std::uint64_t N : {100ull, 10'000ull}) {
      XReal zn = kms::partition_truncated(XReal(beta), N);
      XReal bound = pow(XReal(static_cast<long>(N)), XReal(1 - beta)) / XReal(beta - 1);
      CHECK(abs(zn - z) <= bound);
    }
  }
}

TEST_CASE("gibbs_expectation reproduces the log-energy mean") {
  // Observable ln n at beta = 2, N = 10^6: reference from the oracle run;
  // the N -> inf limit is -zeta'(2)/zeta(2) = 0.56996099...
  const std::uint64_t N = 1'000'000;
  std::vector<XReal> diag;
  diag.reserve(N);
  for (std::uint64_t n = 1; n <= N; ++n) {
    diag.push_back(log(XReal(static_cast<long>(n))));
  }
  XReal mean = kms::gibbs_expectation(diag, XReal(2));
  CHECK(primon::rel_diff(mean, XReal(oracle::kGibbsLogN_beta2_1e6)).to_double() < 1e-15);
  CHECK(abs(mean - XReal(oracle::kNegZetaPrime2OverZeta2)).to_double() < 1e-5);
}

TEST_CASE("gibbs_expectation of a constant observable is that constant") {
  std::vector<XReal> diag(100, XReal(7));
  XReal mean = kms::gibbs_expectation(diag, XReal("1.5"));
  CHECK(primon::rel_diff(mean, XReal(7)) < XReal(1e-35));
}

TEST_CASE("partition and gibbs reject empty or senseless input") {
  CHECK_THROWS_AS((void)kms::partition_truncated(XReal(2), 0), std::domain_error);
  CHECK_THROWS_AS((void)kms::gibbs_expectation({}, XReal(2)), std::domain_error);
}

TEST_CASE("partition_truncated is invariant under the thread budget") {
  primon::util::set_thread_budget(1);
  XReal a = kms::partition_truncated(XReal("2.1"), 20'000);
  primon::util::set_thread_budget(8);
  XReal b = kms::partition_truncated(XReal("2.1"), 20'000);
  primon::util::set_thread_budget(0);
  CHECK(mpfr_equal_p(a.raw(), b.raw()));
}
