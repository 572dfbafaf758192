#pragma once
// Bost-Connes KMS state values on integers, the beta=infinity state, the
// primorial criterion quantity epsilon_beta(q), and truncated Gibbs sums.
//
// The state at inverse temperature beta > 1 on a positive integer q is
//   phi_beta(q) = q^-beta * prod_{p | q} (1 - p^(beta-1)) / (1 - 1/p),
// evaluated in log-space because |phi_beta| underflows any fixed-range type
// already at modest q. Each factor (1 - p^(beta-1)) is negative for beta > 1,
// so the sign is (-1)^omega(q) with omega the number of distinct prime
// factors. At beta = 1 every factor vanishes; that point is reported as a
// degenerate zero (sign 0, log_abs = -inf, vanishing_factor set) rather than
// an error so that parameter sweeps crossing beta = 1 keep working.
//
// On primorials N_q (product of the first q primes) the normalized magnitude
//   N_q * |phi_beta(N_q)| = prod_{p <= p_q} (1 - p^-(beta-1)) / (1 - 1/p)
// equals psi_b(N_q)/N_q with b = beta - 1 (generalized Dedekind psi); it is
// computed over the prime table without ever materializing N_q.
//
// The criterion row for (q, beta) compares
//   ratio_R  = [psi_b(N_q)/N_q] / ln(theta(p_q))        (theta(p_q) = ln N_q)
//   threshold = e^gamma / zeta(b)
// and reports epsilon = ratio_R - threshold; the inequality epsilon > 0 is
// the scan subject. beta > 2 is the criterion regime proper; 1 < beta <= 2 is
// accepted but flagged (rh_equivalent_regime = false).
//
// Determinism: every prime-indexed reduction goes through the deterministic
// folding in util (ascending index order, fixed chunking), so results are
// byte-identical for any thread count. The building blocks shared with the
// scan module (term function, working precision, row assembly) live here so
// both paths produce bit-identical rows.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "primon/primes.hpp"
#include "primon/xreal.hpp"

namespace primon::kms {

struct KmsValue {
  mpz_class q;
  XReal beta;
  XReal log_abs;  // ln |phi_beta(q)|; -inf at the degenerate point
  int sign = 0;   // -1, 0, +1
  bool vanishing_factor = false;  // true exactly when beta = 1
};

struct CriterionRow {
  std::uint64_t q = 0;  // primorial index
  XReal beta;
  XReal ratio_R;
  XReal threshold;
  XReal epsilon;
  bool holds = false;
  bool rh_equivalent_regime = false;  // beta > 2
};

// phi_beta on a general integer via factorization. beta < 1 is rejected
// (the formula does not give the state there); beta = 1 degenerates as
// documented above. q >= 2 required.
KmsValue phi_beta(std::uint64_t q, const XReal& beta);

// Same for big integers (e.g. exact primorials). Factors by trial division
// over the first-million prime list plus a primality certificate on the
// cofactor; throws std::domain_error if a composite cofactor survives.
KmsValue phi_beta(const mpz_class& q, const XReal& beta);

// Ground state: phi_inf(q) = mu(q)/phi(q), exact.
mpq_class phi_infinity(std::uint64_t q);

// N_q * |phi_beta(N_q)| = psi_{beta-1}(N_q)/N_q over the prime table.
// Requires beta - 1 > 0 and table coverage of the first q_index primes.
XReal kms_primorial_ratio(std::size_t q_index, const XReal& beta, const primes::PrimeTable& t);

// Full criterion row at (q_index, beta); q_index >= 2 so ln ln N_q > 0.
CriterionRow epsilon_beta(std::size_t q_index, const XReal& beta, const primes::PrimeTable& t);

// e^gamma / zeta(b); the single authority for criterion thresholds.
XReal criterion_threshold(const XReal& b);

// Truncated partition sum: sum_{n<=N} n^-beta, compensated. beta > 1.
XReal partition_truncated(const XReal& beta, std::uint64_t N);

// Gibbs expectation of a diagonal observable m_n (n = 1..diag.size()):
// sum m_n n^-beta / sum n^-beta. beta > 1; diag nonempty.
XReal gibbs_expectation(const std::vector<XReal>& diag, const XReal& beta);

// --- shared internals (used by the scan module; stable contract) ----------

// Working precision for prime-product accumulations: default + 32 guard bits.
unsigned product_precision();

// ln[psi_b(N_q)/N_q] = sum over the first q primes of
// log1p(-p^-b) - log1p(-1/p), folded deterministically at product_precision().
// Requires b > 0.
XReal log_psi_ratio(std::size_t q_index, const XReal& b, const primes::PrimeTable& t);

// Prefix variant: out[i] = log_psi_ratio(i+1, ...) for i < q_max, each entry
// bit-identical to the corresponding single-call value.
void log_psi_ratio_prefix(std::size_t q_max, const XReal& b, const primes::PrimeTable& t,
                          std::vector<XReal>& out);

// Assembles a row from the log-space product, theta(p_q) = ln N_q, and a
// precomputed threshold; ratio and epsilon are rounded to the default
// precision so independently assembled rows agree bitwise.
CriterionRow assemble_row(std::uint64_t q, const XReal& beta, const XReal& log_ratio,
                          const XReal& theta, const XReal& threshold);

}  // namespace primon::kms
