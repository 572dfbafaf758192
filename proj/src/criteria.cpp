#include "primon/criteria.hpp"

#include <stdexcept>

#include "primon/util.hpp"

namespace primon::criteria {

namespace {

// Per-prime log term of prod (1-1/p)^-1: -log1p(-1/p).  Shared by the
// Nicolas point check and the Nicolas scan for bit-identical rows.
struct MertensTerm {
  const std::vector<std::uint64_t>& primes;
  void operator()(std::size_t i, mpfr_ptr out) const {
    mpfr_set_si(out, -1, MPFR_RNDN);
    mpfr_div_ui(out, out, primes[i], MPFR_RNDN);
    mpfr_log1p(out, out, MPFR_RNDN);
    mpfr_neg(out, out, MPFR_RNDN);
  }
};

ScanResult finish_scan(std::vector<kms::CriterionRow> rows) {
  ScanResult res;
  res.rows = std::move(rows);
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    if (!res.rows[i].holds) {
      res.first_failure = i;
      break;
    }
  }
  res.all_hold = !res.first_failure.has_value();
  return res;
}

void require_increasing(const std::vector<std::uint64_t>& checkpoints, const char* what) {
  if (checkpoints.empty()) throw std::domain_error(std::string(what) + ": no checkpoints given");
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) {
      throw std::domain_error(std::string(what) + ": checkpoints must be strictly increasing");
    }
  }
}

void require_high_temp(const XReal& b, const char* what) {
  if (!(b > XReal(0.5)) || !(b < XReal(1))) {
    throw std::domain_error(std::string(what) + " requires 0.5 < b < 1");
  }
}

AsymptoticsReport finish_report(const XReal& b,
                                std::vector<std::pair<std::uint64_t, XReal>> samples) {
  AsymptoticsReport rep;
  rep.b = b;
  rep.samples = std::move(samples);
  const unsigned P = XReal::default_precision();
  if (rep.samples.empty()) {
    rep.drift = XReal(0);
    rep.final_rel_change = XReal(0);
    return rep;
  }
  XReal lo = rep.samples.front().second, hi = lo;
  bool any_up = false, any_down = false;
  for (std::size_t i = 1; i < rep.samples.size(); ++i) {
    const XReal& v = rep.samples[i].second;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
    if (v > rep.samples[i - 1].second) any_up = true;
    if (v < rep.samples[i - 1].second) any_down = true;
  }
  rep.drift = round_to(hi - lo, P);
  rep.trend = (any_up && !any_down)   ? Trend::increasing
              : (any_down && !any_up) ? Trend::decreasing
                                      : Trend::mixed;
  if (rep.samples.size() >= 2) {
    const XReal& last = rep.samples.back().second;
    const XReal& prev = rep.samples[rep.samples.size() - 2].second;
    rep.final_rel_change = round_to(abs(last - prev) / abs(last), P);
  } else {
    rep.final_rel_change = XReal(0);
  }
  return rep;
}

XReal pos_inf() {
  XReal v = XReal::with_precision(XReal::default_precision());
  mpfr_set_inf(v.raw(), 1);
  return v;
}

}  // namespace

kms::CriterionRow nicolas_check(std::size_t q_index, const primes::PrimeTable& t) {
  if (q_index < 2) {
    throw std::domain_error("nicolas_check requires q_index >= 2: log log N_q not positive below");
  }
  if (q_index > t.count()) {
    throw std::domain_error("prime table does not cover q_index " + std::to_string(q_index));
  }
  const XReal lr = util::deterministic_sum(q_index, kms::product_precision(), MertensTerm{t.primes});
  return kms::assemble_row(q_index, pos_inf(), lr, t.theta_at(q_index),
                           exp(specfun::euler_gamma()));
}

ScanResult nicolas_scan(std::size_t q_max, const primes::PrimeTable& t) {
  if (q_max < 2) throw std::domain_error("nicolas_scan requires q_max >= 2");
  if (q_max > t.count()) {
    throw std::domain_error("prime table does not cover q_index " + std::to_string(q_max));
  }
  std::vector<XReal> prefix;
  util::deterministic_prefix(q_max, kms::product_precision(), MertensTerm{t.primes}, prefix);
  const XReal threshold = exp(specfun::euler_gamma());
  const XReal inf = pos_inf();
  std::vector<kms::CriterionRow> rows;
  rows.reserve(q_max - 1);
  for (std::size_t q = 2; q <= q_max; ++q) {
    rows.push_back(kms::assemble_row(q, inf, prefix[q - 1], t.theta_at(q), threshold));
  }
  return finish_scan(std::move(rows));
}

XReal ratio_R(std::size_t q_index, const XReal& b, const primes::PrimeTable& t) {
  if (q_index < 2) {
    throw std::domain_error("ratio_R requires q_index >= 2: log log N_q not positive below");
  }
  const XReal lr = kms::log_psi_ratio(q_index, b, t);
  return round_to(exp(lr) / log(t.theta_at(q_index)), XReal::default_precision());
}

ScanResult conjecture_scan(const XReal& b, std::size_t q_max, const primes::PrimeTable& t) {
  if (!(b > XReal(1))) throw std::domain_error("conjecture_scan requires b > 1");
  if (q_max < 3) throw std::domain_error("conjecture_scan requires q_max >= 3 (rows start at n=3)");
  std::vector<XReal> prefix;
  kms::log_psi_ratio_prefix(q_max, b, t, prefix);
  const XReal threshold = kms::criterion_threshold(b);
  const XReal beta = b + XReal(1);
  std::vector<kms::CriterionRow> rows;
  rows.reserve(q_max - 2);
  for (std::size_t n = 3; n <= q_max; ++n) {
    rows.push_back(kms::assemble_row(n, beta, prefix[n - 1], t.theta_at(n), threshold));
  }
  return finish_scan(std::move(rows));
}

XReal g_function(std::uint64_t x, const XReal& b, const primes::PrimeTable& t) {
  if (!(b > XReal(1))) throw std::domain_error("g_function requires b > 1");
  if (x < 2) throw std::domain_error("g_function requires x >= 2");
  const std::size_t m = t.index_below(x);
  const XReal lr = kms::log_psi_ratio(m, b, t);
  return round_to(kms::criterion_threshold(b) * log(t.theta_at(m)) * exp(-lr),
                  XReal::default_precision());
}

XReal f_function(std::uint64_t x, const primes::PrimeTable& t) {
  if (x < 2) throw std::domain_error("f_function requires x >= 2");
  const std::size_t m = t.index_below(x);
  // ln f = gamma + ln ln theta(x) + sum log1p(-1/p)
  XReal s = util::deterministic_sum(m, kms::product_precision(), [&](std::size_t i, mpfr_ptr out) {
    mpfr_set_si(out, -1, MPFR_RNDN);
    mpfr_div_ui(out, out, t.primes[i], MPFR_RNDN);
    mpfr_log1p(out, out, MPFR_RNDN);
  });
  return round_to(exp(specfun::euler_gamma()) * log(t.theta_at(m)) * exp(s),
                  XReal::default_precision());
}

AsymptoticsReport sum_vs_integral_report(const XReal& b, const std::vector<std::uint64_t>& checkpoints,
                                         const primes::PrimeTable& t,
                                         const specfun::Quadrature& quad) {
  require_high_temp(b, "sum_vs_integral_report");
  require_increasing(checkpoints, "sum_vs_integral_report");
  const unsigned P = XReal::default_precision();
  std::vector<std::pair<std::uint64_t, XReal>> samples;
  samples.reserve(checkpoints.size());
  for (std::uint64_t x : checkpoints) {
    const XReal S = specfun::prime_sum_S(b, x, t);
    const XReal B = specfun::bertrand_B(b, XReal(static_cast<unsigned long>(x)), quad);
    samples.emplace_back(x, round_to(S - B, P));
  }
  return finish_report(b, std::move(samples));
}

AsymptoticsReport k_b_estimate(const XReal& b, const std::vector<std::uint64_t>& checkpoints,
                               const primes::PrimeTable& t, const specfun::Quadrature& quad) {
  require_high_temp(b, "k_b_estimate");
  require_increasing(checkpoints, "k_b_estimate");
  if (checkpoints.back() > t.count()) {
    throw std::domain_error("prime table does not cover q_index " +
                            std::to_string(checkpoints.back()));
  }
  const unsigned P = XReal::default_precision();
  std::vector<std::pair<std::uint64_t, XReal>> samples;
  samples.reserve(checkpoints.size());
  for (std::uint64_t n : checkpoints) {
    if (n < 1) throw std::domain_error("k_b_estimate requires checkpoints >= 1");
    const std::uint64_t p_n = t.primes[static_cast<std::size_t>(n) - 1];
    const XReal lr = kms::log_psi_ratio(static_cast<std::size_t>(n), b, t);
    const XReal B = specfun::bertrand_B(b, XReal(static_cast<unsigned long>(p_n)), quad);
    // rho(n) = [psi_b(N_n)/N_n] * exp(+B) / ln p_n
    samples.emplace_back(n, round_to(exp(lr + B) / log(XReal(static_cast<unsigned long>(p_n))), P));
  }
  return finish_report(b, std::move(samples));
}

ScanResult lower_bound_check(const XReal& b, const XReal& epsilon, std::size_t n_lo,
                             std::size_t n_hi, const XReal& k_hat, const primes::PrimeTable& t,
                             const specfun::Quadrature& quad) {
  require_high_temp(b, "lower_bound_check");
  if (!(epsilon > XReal(0)) || !(epsilon < XReal(1))) {
    throw std::domain_error("lower_bound_check requires 0 < epsilon < 1");
  }
  if (n_lo < 2 || n_lo > n_hi) {
    throw std::domain_error("lower_bound_check requires 2 <= n_lo <= n_hi");
  }
  if (n_hi > t.count()) {
    throw std::domain_error("prime table does not cover q_index " + std::to_string(n_hi));
  }
  if (!(k_hat > XReal(0))) throw std::domain_error("lower_bound_check requires k_hat > 0");

  std::vector<XReal> prefix;
  kms::log_psi_ratio_prefix(n_hi, b, t, prefix);

  const XReal mb = -b;
  const auto integrand = [&mb](const XReal& u) { return pow(u, mb) / log(u); };
  const XReal threshold = k_hat * (XReal(1) - epsilon);
  const XReal beta = b + XReal(1);

  // B_b(p_n) marches prime gap by prime gap: one adaptive integral up to
  // p_{n_lo}, then a single Gauss panel per gap (the integrand is analytic
  // and the gaps are tiny, so each panel is far below the global tolerance).
  CompensatedSum B(kms::product_precision());
  B.add(specfun::bertrand_B(b, XReal(static_cast<unsigned long>(t.primes[n_lo - 1])), quad));
  std::vector<kms::CriterionRow> rows;
  rows.reserve(n_hi - n_lo + 1);
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    if (n > n_lo) {
      B.add(specfun::gl15_panel(integrand, XReal(static_cast<unsigned long>(t.primes[n - 2])),
                                XReal(static_cast<unsigned long>(t.primes[n - 1]))));
    }
    // ratio = [psi_b(N_n)/N_n] * exp(B) / ln theta(p_n), threshold = k_hat(1-eps)
    rows.push_back(kms::assemble_row(n, beta, prefix[n - 1] + B.value(), t.theta_at(n), threshold));
  }
  return finish_scan(std::move(rows));
}

ScanResult lower_bound_check(const XReal& b, const XReal& epsilon, std::size_t n_lo,
                             std::size_t n_hi, const primes::PrimeTable& t,
                             const specfun::Quadrature& quad) {
  const AsymptoticsReport est = k_b_estimate(b, {n_hi / 2, n_hi}, t, quad);
  return lower_bound_check(b, epsilon, n_lo, n_hi, est.samples.back().second, t, quad);
}

std::string lower_bound_description() {
  return "check: psi_b(N_n)/N_n > k_hat*(1-eps)*ln(theta(p_n))*exp(-B_b(p_n)) with k_hat "
         "injected from the stabilized rho(n) estimate and the logarithmic factor read as the "
         "iterated logarithm ln ln N_n = ln theta(p_n); the stronger variant with an extra "
         "factor e^gamma*ln(theta(p_n)) is violated at every desk-scale n and is recorded "
         "here instead of being checked.";
}

AsymptoticsReport prop1_convergence(const XReal& b, const std::vector<std::uint64_t>& checkpoints,
                                    const primes::PrimeTable& t) {
  if (!(b > XReal(1))) throw std::domain_error("prop1_convergence requires b > 1");
  require_increasing(checkpoints, "prop1_convergence");
  const XReal threshold = kms::criterion_threshold(b);
  const unsigned P = XReal::default_precision();
  std::vector<std::pair<std::uint64_t, XReal>> samples;
  samples.reserve(checkpoints.size());
  for (std::uint64_t n : checkpoints) {
    if (n < 2) throw std::domain_error("prop1_convergence requires checkpoints >= 2");
    samples.emplace_back(n, round_to(ratio_R(static_cast<std::size_t>(n), b, t) / threshold, P));
  }
  return finish_report(b, std::move(samples));
}

}  // namespace primon::criteria
