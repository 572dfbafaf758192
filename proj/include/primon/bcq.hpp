#pragma once
// Desk-scale operator checks for the modular-multiplication dynamics:
// permutation operators U_a|n> = |a n mod q>, their per-orbit Fourier
// eigenvectors, phase and logarithmic-Hamiltonian diagonals, the scaling
// flow sigma_t, and exact multiplicativity U_a U_b = U_{ab mod q}.
//
// Everything here is a correctness witness at small dimension (q <= 4096),
// in ordinary double-precision complex arithmetic with dense Eigen matrices;
// tolerances are set accordingly (residuals ~1e-12, permutation identities
// exact in 0/1 arithmetic).
//
// Conventions fixed here:
//  * fourier_eigenvector works on the actual multiplicative orbit of j0
//    (default j0 = 1, whose orbit length equals ord_q(a)); for an orbit of
//    length L the valid Fourier labels are 0 <= k < L, with eigenvalue
//    exp(2 pi i k / L).
//  * build_phase_operator defaults to the scalar convention
//    exp(2 pi i p/q) * Identity; the clock convention diag(exp(2 pi i n p/q))
//    is available behind the mode switch, since both appear in the
//    literature for "phase operator" and the scalar reading degenerates the
//    cross-product structure.  The default reproduces the scalar reading.
//  * the flow check uses mu_a as the isometry |n> -> |an> on the truncated
//    space {1..N} (columns with a*n > N clipped to zero and excluded from
//    the deviation), because sigma_t(mu_a) = a^{it} mu_a holds exactly in
//    that reading; the mod-q permutation reading lives in build_Ua.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace primon::bcq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class OpTag { permutation, diagonal, general };

struct LinearOperator {
  Matrix m;
  OpTag tag = OpTag::general;
  Eigen::Index dimension() const { return m.rows(); }
};

struct StateVector {
  Vector amplitudes;  // indexed by basis label (residue mod q, or n-1 for 1..N)
  double norm = 0;    // stored at construction; invariant: matches recomputed
  Eigen::Index dimension() const { return amplitudes.size(); }
};

enum class PhaseConvention { scalar, clock };

// Permutation operator of multiplication by a on residues {0..q-1}.
// Requires 2 <= q <= 4096 and gcd(a, q) = 1 (otherwise not a bijection).
LinearOperator build_Ua(std::uint64_t a, std::uint64_t q);

// Multiplicative orbit of j0 under a mod q: {j0, a j0, a^2 j0, ...} until it
// closes.  For gcd(j0, q) = 1 the length is ord_q(a).
std::vector<std::uint64_t> orbit_of(std::uint64_t a, std::uint64_t q, std::uint64_t j0);

// Fourier eigenvector on the orbit of j0 (default 1):
//   |u_k> = L^{-1/2} sum_j exp(-2 pi i k j / L) |a^j j0 mod q>,
// an eigenvector of U_a with eigenvalue exp(2 pi i k / L); 0 <= k < L.
StateVector fourier_eigenvector(std::uint64_t a, std::uint64_t q, std::uint64_t k,
                                std::uint64_t j0 = 1);

// Phase diagonal at delta = num/den (0 <= num < den) on dimension d.
LinearOperator build_phase_operator(std::uint64_t delta_num, std::uint64_t delta_den,
                                    Eigen::Index d,
                                    PhaseConvention mode = PhaseConvention::scalar);

// Logarithmic Hamiltonian on the truncated space: diag(ln n), n = 1..N.
LinearOperator build_H0(Eigen::Index N);

// sigma_t covariance report: max |(e^{itH0} mu_a e^{-itH0} - a^{it} mu_a)|
// entry over unclipped columns (n <= N/a), across the given t values.
struct FlowReport {
  std::uint64_t a = 0;
  Eigen::Index N = 0;
  double max_deviation = 0;
  Eigen::Index clipped_columns = 0;
  bool ok = false;  // max_deviation < 1e-12
};
FlowReport flow_covariance_check(std::uint64_t a, Eigen::Index N,
                                 const std::vector<double>& t_values);

// Exact matrix identity U_a U_b == U_{ab mod q} (0/1 arithmetic, no tolerance).
bool multiplicativity_check(std::uint64_t a, std::uint64_t b, std::uint64_t q);

// U_a^dagger U_a == identity, exact.
bool is_unitary_exact(const LinearOperator& op);

// ||U_a|u_k> - exp(2 pi i k/L)|u_k>|| maximized over all k < L on the orbit
// of j0.
double max_eigen_residual(std::uint64_t a, std::uint64_t q, std::uint64_t j0 = 1);

// Eigenvalues of U_a restricted to the orbit of 1 match the L-th roots of
// unity (each exactly once) within tol.
bool orbit_spectrum_matches(std::uint64_t a, std::uint64_t q, double tol);

// Bundle for one (a, q) pair, as emitted by the CLI quantum report.
struct QuantumReport {
  std::uint64_t q = 0;
  std::uint64_t a = 0;
  std::uint64_t r = 0;  // ord_q(a) = orbit length of 1
  double max_residual = 0;
  bool unitary = false;
  // U_a U_b == U_{ab mod q} against every coprime partner b < q when
  // q <= 64; above that, against a fixed sample of partners (cost control).
  bool multiplicative = false;
};
QuantumReport verify_pair(std::uint64_t a, std::uint64_t q);

}  // namespace primon::bcq
