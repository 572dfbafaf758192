#pragma once
// Criterion scans and convergence diagnostics over primorials.
//
// Low-temperature side (b > 1):
//   * Nicolas inequality N_q/phi(N_q) > e^gamma * ln ln N_q, scanned over
//     primorial indices with ln ln N_q = ln(theta(p_q)).
//   * The generalized ratio R_b(N_n) = [psi_b(N_n)/N_n] / ln ln N_n against
//     its limit e^gamma / zeta(b); the scan subject is R_b > e^gamma/zeta(b)
//     for all n >= 3.
//   * The proof-side functions
//       f(x) = e^gamma * ln theta(x) * prod_{p<=x} (1 - 1/p)
//       g(x) = e^gamma/zeta(b) * ln theta(x) * prod (1-1/p) / prod (1-1/p^b)
//     with the exact duality g(p_n) * R_b(N_n) = e^gamma/zeta(b).
//
// High-temperature side (0.5 < b < 1): empirical diagnostics only — the
// sum-vs-integral drift D(x) = S_b(x) - B_b(x), the normalized limit ratio
//   rho(n) = [psi_b(N_n)/N_n] / [ln(p_n) * exp(-B_b(p_n))]
// whose stabilized value estimates the constant K_b, and a lower-bound scan
// with an explicitly injected K_b estimate.  These report envelopes and
// stabilization measures; they do not assert any true asymptotic constant.
//
// All scans share the exact fold code of the kms module (same term function,
// same precision, same assembly), so a scan row and the corresponding point
// evaluation agree bit for bit, at any thread count.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "primon/kms.hpp"
#include "primon/primes.hpp"
#include "primon/specfun.hpp"
#include "primon/xreal.hpp"

namespace primon::criteria {

enum class Trend { increasing, decreasing, mixed };

// Sampled sequence diagnostic: values over an increasing index grid with the
// max-min drift, direction, and the relative change across the final pair
// (the stabilization measure).
struct AsymptoticsReport {
  XReal b;
  std::vector<std::pair<std::uint64_t, XReal>> samples;
  XReal drift;
  Trend trend = Trend::mixed;
  XReal final_rel_change;
};

struct ScanResult {
  std::vector<kms::CriterionRow> rows;
  std::optional<std::size_t> first_failure;  // index into rows
  bool all_hold = true;
};

// Nicolas inequality at one primorial index (q_index >= 2):
// ratio_R = prod(1-1/p)^-1 / ln theta(p_q), threshold = e^gamma.
kms::CriterionRow nicolas_check(std::size_t q_index, const primes::PrimeTable& t);

// Rows for q = 2..q_max via one shared prefix fold; row q is bit-identical
// to nicolas_check(q).
ScanResult nicolas_scan(std::size_t q_max, const primes::PrimeTable& t);

// R_b(N_q) = [psi_b(N_q)/N_q] / ln theta(p_q).  Requires b > 0, q_index >= 2;
// b = 1 reproduces 1/ln ln N_q exactly (every product factor collapses).
XReal ratio_R(std::size_t q_index, const XReal& b, const primes::PrimeTable& t);

// Criterion rows R_b(N_n) > e^gamma/zeta(b) for n = 3..q_max.  b > 1.
ScanResult conjecture_scan(const XReal& b, std::size_t q_max, const primes::PrimeTable& t);

// g(x) for b > 1, x >= 2; evaluated at the largest prime <= x.
XReal g_function(std::uint64_t x, const XReal& b, const primes::PrimeTable& t);

// f(x) for x >= 2; f(p_n) < 1 is equivalent to the Nicolas inequality at n.
XReal f_function(std::uint64_t x, const primes::PrimeTable& t);

// D(x) = S_b(x) - B_b(x) over strictly increasing checkpoints (0.5 < b < 1).
AsymptoticsReport sum_vs_integral_report(const XReal& b, const std::vector<std::uint64_t>& checkpoints,
                                         const primes::PrimeTable& t,
                                         const specfun::Quadrature& quad = {});

// rho(n) over strictly increasing primorial indices (0.5 < b < 1); the last
// sample is the K_b estimate, final_rel_change its stabilization measure.
AsymptoticsReport k_b_estimate(const XReal& b, const std::vector<std::uint64_t>& checkpoints,
                               const primes::PrimeTable& t, const specfun::Quadrature& quad = {});

// Lower-bound scan for n in [n_lo, n_hi] with an injected estimate k_hat:
//   holds(n)  <=>  psi_b(N_n)/N_n > k_hat * (1-epsilon) * ln theta(p_n) * exp(-B_b(p_n)).
// Row fields: ratio_R = [psi_b(N_n)/N_n] / [ln theta(p_n) exp(-B_b(p_n))],
// threshold = k_hat*(1-epsilon).  See lower_bound_description() for the
// reading of the logarithmic factor and the rejected stronger variant.
ScanResult lower_bound_check(const XReal& b, const XReal& epsilon, std::size_t n_lo,
                             std::size_t n_hi, const XReal& k_hat, const primes::PrimeTable& t,
                             const specfun::Quadrature& quad = {});

// Convenience overload: k_hat taken from k_b_estimate at {n_hi/2, n_hi}.
ScanResult lower_bound_check(const XReal& b, const XReal& epsilon, std::size_t n_lo,
                             std::size_t n_hi, const primes::PrimeTable& t,
                             const specfun::Quadrature& quad = {});

// One-line statement of the inequality the lower-bound scan checks, the
// iterated-logarithm reading it adopts, and the stronger variant (extra
// factor e^gamma * ln theta) that is recorded as empirically violated at
// every desk-scale index and therefore not used as the check.
std::string lower_bound_description();

// Samples R_b(N_n) * zeta(b) / e^gamma over checkpoints; expected to
// approach 1 from above.  b > 1.
AsymptoticsReport prop1_convergence(const XReal& b, const std::vector<std::uint64_t>& checkpoints,
                                    const primes::PrimeTable& t);

}  // namespace primon::criteria
