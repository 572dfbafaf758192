#include "primon/kms.hpp"

#include <mutex>
#include <stdexcept>

#include "primon/arith.hpp"
#include "primon/specfun.hpp"
#include "primon/util.hpp"

namespace primon::kms {

namespace {

// ln|1 - p^b| for b > 0: p^b > 1, so |1 - p^b| = p^b(1 - p^-b) and
//   ln|1 - p^b| = b ln p + log1p(-p^-b),
// stable for arbitrarily large p and for b near 0 alike.
XReal log_abs_one_minus_pow(const XReal& log_p, const XReal& b) {
  return b * log_p + log1p(-exp(-b * log_p));
}

// ln(1 - 1/p) for an exact prime value.
XReal log1m_inv(const XReal& p) { return log1p(XReal(-1) / p); }

KmsValue phi_beta_impl(mpz_class q, const XReal& beta, const std::vector<std::uint64_t>& distinct,
                       const XReal* big_factor_log /* ln p of a cofactor prime, or null */) {
  KmsValue out;
  out.q = std::move(q);
  out.beta = beta;

  const unsigned W = product_precision();
  const std::size_t omega = distinct.size() + (big_factor_log ? 1 : 0);

  if (beta == XReal(1)) {
    // Every factor 1 - p^(beta-1) vanishes: degenerate zero, not an error.
    out.sign = 0;
    out.vanishing_factor = true;
    out.log_abs = XReal::with_precision(XReal::default_precision());
    mpfr_set_inf(out.log_abs.raw(), -1);
    return out;
  }
  if (!(beta > XReal(1))) {
    throw std::domain_error("phi_beta requires beta >= 1: the state is not given by this formula below 1");
  }

  const XReal b = round_to(beta, W) - XReal(1);
  XReal log_q = XReal::with_precision(std::max<unsigned>(
      W, static_cast<unsigned>(mpz_sizeinbase(out.q.get_mpz_t(), 2)) + 16));
  mpfr_set_z(log_q.raw(), out.q.get_mpz_t(), MPFR_RNDN);
  mpfr_log(log_q.raw(), log_q.raw(), MPFR_RNDN);

  CompensatedSum acc(W);
  acc.add(-(round_to(beta, W) * round_to(log_q, W)));
  for (std::uint64_t p : distinct) {
    const XReal lp = log(round_to(XReal(static_cast<unsigned long>(p)), W));
    acc.add(log_abs_one_minus_pow(lp, b) - log1m_inv(XReal(static_cast<unsigned long>(p))));
  }
  if (big_factor_log) {
    acc.add(log_abs_one_minus_pow(*big_factor_log, b) - log1p(-exp(-*big_factor_log)));
  }
  out.log_abs = round_to(acc.value(), XReal::default_precision());
  out.sign = (omega % 2 == 0) ? 1 : -1;
  return out;
}

}  // namespace

KmsValue phi_beta(std::uint64_t q, const XReal& beta) {
  if (q < 2) throw std::domain_error("phi_beta requires q >= 2");
  const arith::Factorization f = arith::factorize(q);
  std::vector<std::uint64_t> distinct;
  distinct.reserve(f.factors.size());
  for (const auto& pp : f.factors) distinct.push_back(pp.p);
  return phi_beta_impl(mpz_class(static_cast<unsigned long>(q)), beta, distinct, nullptr);
}

KmsValue phi_beta(const mpz_class& q, const XReal& beta) {
  if (q < 2) throw std::domain_error("phi_beta requires q >= 2");
  if (q.fits_ulong_p()) return phi_beta(static_cast<std::uint64_t>(q.get_ui()), beta);

  static std::mutex mu;
  static std::vector<std::uint64_t> small;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (small.empty()) small = primes::primes_upto(1'000'000);
  }
  mpz_class rest = q;
  std::vector<std::uint64_t> distinct;
  for (std::uint64_t p : small) {
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      distinct.push_back(p);
      do {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
      if (rest == 1) break;
    }
  }
  if (rest == 1) return phi_beta_impl(q, beta, distinct, nullptr);
  if (rest.fits_ulong_p()) {
    const std::uint64_t r = rest.get_ui();
    arith::Factorization f = arith::factorize(r);
    for (const auto& pp : f.factors) distinct.push_back(pp.p);
    return phi_beta_impl(q, beta, distinct, nullptr);
  }
  if (mpz_probab_prime_p(rest.get_mpz_t(), 40) > 0) {
    XReal lp = XReal::with_precision(std::max<unsigned>(
        product_precision(), static_cast<unsigned>(mpz_sizeinbase(rest.get_mpz_t(), 2)) + 16));
    mpfr_set_z(lp.raw(), rest.get_mpz_t(), MPFR_RNDN);
    mpfr_log(lp.raw(), lp.raw(), MPFR_RNDN);
    lp = round_to(lp, product_precision());
    return phi_beta_impl(q, beta, distinct, &lp);
  }
  throw std::domain_error("phi_beta: composite cofactor beyond the small-prime table; cannot factor " +
                          rest.get_str());
}

mpq_class phi_infinity(std::uint64_t q) {
  if (q < 1) throw std::domain_error("phi_infinity requires q >= 1");
  const int mu = arith::mobius(q);
  if (mu == 0) return mpq_class(0);
  mpq_class r(mu, static_cast<unsigned long>(arith::euler_phi(q)));
  r.canonicalize();
  return r;
}

unsigned product_precision() { return XReal::default_precision() + 32; }

namespace {

// The shared per-prime term: log1p(-p^-b) - log1p(-1/p).  Both scan and
// point evaluations must run exactly this code for bit-identical results.
struct PsiTerm {
  const std::vector<std::uint64_t>& primes;
  const XReal& mb;  // -b at product precision

  void operator()(std::size_t i, mpfr_ptr out) const {
    XReal u = XReal::with_precision(static_cast<unsigned>(mpfr_get_prec(out)));
    mpfr_set_ui(u.raw(), primes[i], MPFR_RNDN);
    mpfr_pow(u.raw(), u.raw(), mb.raw(), MPFR_RNDN);
    mpfr_neg(u.raw(), u.raw(), MPFR_RNDN);
    mpfr_log1p(u.raw(), u.raw(), MPFR_RNDN);  // log1p(-p^-b)
    mpfr_set_si(out, -1, MPFR_RNDN);
    mpfr_div_ui(out, out, primes[i], MPFR_RNDN);
    mpfr_log1p(out, out, MPFR_RNDN);          // log1p(-1/p)
    mpfr_sub(out, u.raw(), out, MPFR_RNDN);
  }
};

XReal neg_at(const XReal& b, unsigned W) {
  XReal mb = XReal::with_precision(W);
  mpfr_neg(mb.raw(), b.raw(), MPFR_RNDN);
  return mb;
}

}  // namespace

XReal log_psi_ratio(std::size_t q_index, const XReal& b, const primes::PrimeTable& t) {
  if (!(b > XReal(0))) throw std::domain_error("log_psi_ratio requires b > 0");
  if (q_index == 0 || q_index > t.count()) {
    throw std::domain_error("prime table does not cover q_index " + std::to_string(q_index));
  }
  const unsigned W = product_precision();
  const XReal mb = neg_at(b, W);
  return util::deterministic_sum(q_index, W, PsiTerm{t.primes, mb});
}

void log_psi_ratio_prefix(std::size_t q_max, const XReal& b, const primes::PrimeTable& t,
                          std::vector<XReal>& out) {
  if (!(b > XReal(0))) throw std::domain_error("log_psi_ratio requires b > 0");
  if (q_max == 0 || q_max > t.count()) {
    throw std::domain_error("prime table does not cover q_index " + std::to_string(q_max));
  }
  const unsigned W = product_precision();
  const XReal mb = neg_at(b, W);
  util::deterministic_prefix(q_max, W, PsiTerm{t.primes, mb}, out);
}

XReal kms_primorial_ratio(std::size_t q_index, const XReal& beta, const primes::PrimeTable& t) {
  const XReal b = beta - XReal(1);
  if (!(b > XReal(0))) throw std::domain_error("kms_primorial_ratio requires beta - 1 > 0");
  return round_to(exp(log_psi_ratio(q_index, b, t)), XReal::default_precision());
}

XReal criterion_threshold(const XReal& b) {
  return exp(specfun::euler_gamma()) / specfun::zeta_real(b);
}

CriterionRow assemble_row(std::uint64_t q, const XReal& beta, const XReal& log_ratio,
                          const XReal& theta, const XReal& threshold) {
  const unsigned P = XReal::default_precision();
  CriterionRow row;
  row.q = q;
  row.beta = beta;
  row.ratio_R = round_to(exp(log_ratio) / log(theta), P);
  row.threshold = round_to(threshold, P);
  row.epsilon = row.ratio_R - row.threshold;
  row.holds = row.epsilon > XReal(0);
  row.rh_equivalent_regime = beta > XReal(2);
  return row;
}

CriterionRow epsilon_beta(std::size_t q_index, const XReal& beta, const primes::PrimeTable& t) {
  if (q_index < 2) {
    throw std::domain_error("epsilon_beta requires q_index >= 2: log log N_q not positive below");
  }
  const XReal b = beta - XReal(1);
  if (!(b > XReal(0))) throw std::domain_error("epsilon_beta requires beta > 1");
  if (b == XReal(1)) {
    throw std::domain_error("epsilon_beta: beta = 2 places zeta(beta - 1) at its pole");
  }
  const XReal lr = log_psi_ratio(q_index, b, t);
  return assemble_row(q_index, beta, lr, t.theta_at(q_index), criterion_threshold(b));
}

XReal partition_truncated(const XReal& beta, std::uint64_t N) {
  if (!(beta > XReal(1))) throw std::domain_error("partition_truncated requires beta > 1");
  if (N == 0) throw std::domain_error("partition_truncated requires N >= 1");
  const unsigned W = product_precision();
  const XReal mb = neg_at(beta, W);
  const bool integral = mpfr_integer_p(beta.raw()) && mpfr_fits_ulong_p(beta.raw(), MPFR_RNDN);
  const unsigned long bu = integral ? mpfr_get_ui(beta.raw(), MPFR_RNDN) : 0;
  XReal s = util::deterministic_sum(static_cast<std::size_t>(N), W, [&](std::size_t i, mpfr_ptr out) {
    mpfr_set_ui(out, static_cast<unsigned long>(i + 1), MPFR_RNDN);
    if (integral) {
      mpfr_pow_ui(out, out, bu, MPFR_RNDN);
      mpfr_ui_div(out, 1, out, MPFR_RNDN);
    } else {
      mpfr_pow(out, out, mb.raw(), MPFR_RNDN);
    }
  });
  return round_to(s, XReal::default_precision());
}

XReal gibbs_expectation(const std::vector<XReal>& diag, const XReal& beta) {
  if (!(beta > XReal(1))) throw std::domain_error("gibbs_expectation requires beta > 1");
  if (diag.empty()) throw std::domain_error("gibbs_expectation requires a nonempty diagonal");
  const unsigned W = product_precision();
  const XReal mb = neg_at(beta, W);
  const bool integral = mpfr_integer_p(beta.raw()) && mpfr_fits_ulong_p(beta.raw(), MPFR_RNDN);
  const unsigned long bu = integral ? mpfr_get_ui(beta.raw(), MPFR_RNDN) : 0;
  const auto weight = [&](std::size_t i, mpfr_ptr out) {
    mpfr_set_ui(out, static_cast<unsigned long>(i + 1), MPFR_RNDN);
    if (integral) {
      mpfr_pow_ui(out, out, bu, MPFR_RNDN);
      mpfr_ui_div(out, 1, out, MPFR_RNDN);
    } else {
      mpfr_pow(out, out, mb.raw(), MPFR_RNDN);
    }
  };
  XReal num = util::deterministic_sum(diag.size(), W, [&](std::size_t i, mpfr_ptr out) {
    weight(i, out);
    mpfr_mul(out, out, diag[i].raw(), MPFR_RNDN);
  });
  XReal den = util::deterministic_sum(diag.size(), W, weight);
  return round_to(num / den, XReal::default_precision());
}

}  // namespace primon::kms
