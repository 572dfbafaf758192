#include "primon/bcq.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace primon::bcq {

namespace {

constexpr std::uint64_t kMaxDim = 4096;
constexpr double kPi = std::numbers::pi;

void require_coprime_pair(std::uint64_t a, std::uint64_t q, const char* what) {
  if (q < 2 || q > kMaxDim) {
    throw std::domain_error(std::string(what) + " requires 2 <= q <= " + std::to_string(kMaxDim));
  }
  if (std::gcd(a % q, q) != 1) {
    throw std::domain_error(std::string(what) + ": not unitary: a has no inverse mod q");
  }
}

Complex root_of_unity(double num, double den) { return std::polar(1.0, 2.0 * kPi * num / den); }

}  // namespace

LinearOperator build_Ua(std::uint64_t a, std::uint64_t q) {
  require_coprime_pair(a, q, "build_Ua");
  a %= q;
  LinearOperator op;
  op.m = Matrix::Zero(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
  for (std::uint64_t n = 0; n < q; ++n) {
    op.m(static_cast<Eigen::Index>((a * n) % q), static_cast<Eigen::Index>(n)) = 1.0;
  }
  op.tag = OpTag::permutation;
  return op;
}

std::vector<std::uint64_t> orbit_of(std::uint64_t a, std::uint64_t q, std::uint64_t j0) {
  require_coprime_pair(a, q, "orbit_of");
  a %= q;
  j0 %= q;
  std::vector<std::uint64_t> orbit;
  std::uint64_t cur = j0;
  do {
    orbit.push_back(cur);
    cur = (a * cur) % q;
  } while (cur != j0);
  return orbit;
}

StateVector fourier_eigenvector(std::uint64_t a, std::uint64_t q, std::uint64_t k,
                                std::uint64_t j0) {
  const std::vector<std::uint64_t> orbit = orbit_of(a, q, j0);
  const std::uint64_t L = orbit.size();
  if (k >= L) {
    throw std::domain_error("fourier_eigenvector: k = " + std::to_string(k) +
                            " outside orbit length " + std::to_string(L));
  }
  StateVector v;
  v.amplitudes = Vector::Zero(static_cast<Eigen::Index>(q));
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  for (std::uint64_t j = 0; j < L; ++j) {
    // exp(-2 pi i k j / L), phase reduced mod L before the trig call
    v.amplitudes(static_cast<Eigen::Index>(orbit[j])) =
        scale * root_of_unity(-static_cast<double>((k * j) % L), static_cast<double>(L));
  }
  v.norm = v.amplitudes.norm();
  return v;
}

LinearOperator build_phase_operator(std::uint64_t delta_num, std::uint64_t delta_den,
                                    Eigen::Index d, PhaseConvention mode) {
  if (delta_den == 0 || delta_num >= delta_den) {
    throw std::domain_error("build_phase_operator requires 0 <= num < den");
  }
  if (d < 1 || static_cast<std::uint64_t>(d) > kMaxDim) {
    throw std::domain_error("build_phase_operator requires 1 <= d <= " + std::to_string(kMaxDim));
  }
  LinearOperator op;
  op.m = Matrix::Zero(d, d);
  if (mode == PhaseConvention::scalar) {
    const Complex z = root_of_unity(static_cast<double>(delta_num), static_cast<double>(delta_den));
    for (Eigen::Index i = 0; i < d; ++i) op.m(i, i) = z;
  } else {
    for (Eigen::Index i = 0; i < d; ++i) {
      const std::uint64_t phase = (static_cast<std::uint64_t>(i) * delta_num) % delta_den;
      op.m(i, i) = root_of_unity(static_cast<double>(phase), static_cast<double>(delta_den));
    }
  }
  op.tag = OpTag::diagonal;
  return op;
}

LinearOperator build_H0(Eigen::Index N) {
  if (N < 1 || static_cast<std::uint64_t>(N) > kMaxDim) {
    throw std::domain_error("build_H0 requires 1 <= N <= " + std::to_string(kMaxDim));
  }
  LinearOperator op;
  op.m = Matrix::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i) op.m(i, i) = std::log(static_cast<double>(i + 1));
  op.tag = OpTag::diagonal;
  return op;
}

FlowReport flow_covariance_check(std::uint64_t a, Eigen::Index N,
                                 const std::vector<double>& t_values) {
  if (a < 2) throw std::domain_error("flow_covariance_check requires a >= 2");
  if (N < 1 || static_cast<std::uint64_t>(N) > kMaxDim) {
    throw std::domain_error("flow_covariance_check requires 1 <= N <= " + std::to_string(kMaxDim));
  }
  FlowReport rep;
  rep.a = a;
  rep.N = N;

  // mu_a as the isometry |n> -> |an> on {1..N}; columns with an > N are zero.
  Matrix mu = Matrix::Zero(N, N);
  const Eigen::Index unclipped = static_cast<Eigen::Index>(static_cast<std::uint64_t>(N) / a);
  for (Eigen::Index n = 1; n <= unclipped; ++n) {
    mu(static_cast<Eigen::Index>(a * static_cast<std::uint64_t>(n)) - 1, n - 1) = 1.0;
  }
  rep.clipped_columns = N - unclipped;

  Vector diag(N);
  for (double t : t_values) {
    for (Eigen::Index n = 1; n <= N; ++n) {
      diag(n - 1) = std::polar(1.0, t * std::log(static_cast<double>(n)));
    }
    const Matrix conj = diag.asDiagonal() * mu * diag.conjugate().asDiagonal();
    const Complex a_it = std::polar(1.0, t * std::log(static_cast<double>(a)));
    const Matrix expected = a_it * mu;
    double dev = 0;
    for (Eigen::Index c = 0; c < unclipped; ++c) {
      dev = std::max(dev, (conj.col(c) - expected.col(c)).cwiseAbs().maxCoeff());
    }
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  rep.ok = rep.max_deviation < 1e-12;
  return rep;
}

bool multiplicativity_check(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  const LinearOperator Ua = build_Ua(a, q);
  const LinearOperator Ub = build_Ua(b, q);
  const LinearOperator Uab = build_Ua(((a % q) * (b % q)) % q, q);
  // 0/1 matrix products are exact in doubles: equality needs no tolerance.
  return ((Ua.m * Ub.m) - Uab.m).cwiseAbs().maxCoeff() == 0.0;
}

bool is_unitary_exact(const LinearOperator& op) {
  const Eigen::Index d = op.dimension();
  return ((op.m.adjoint() * op.m) - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() == 0.0;
}

double max_eigen_residual(std::uint64_t a, std::uint64_t q, std::uint64_t j0) {
  const LinearOperator U = build_Ua(a, q);
  const std::uint64_t L = orbit_of(a, q, j0).size();
  double worst = 0;
  for (std::uint64_t k = 0; k < L; ++k) {
    const StateVector v = fourier_eigenvector(a, q, k, j0);
    const Complex lambda = root_of_unity(static_cast<double>(k), static_cast<double>(L));
    worst = std::max(worst, (U.m * v.amplitudes - lambda * v.amplitudes).norm());
  }
  return worst;
}

bool orbit_spectrum_matches(std::uint64_t a, std::uint64_t q, double tol) {
  const LinearOperator U = build_Ua(a, q);
  const std::vector<std::uint64_t> orbit = orbit_of(a, q, 1);
  const Eigen::Index L = static_cast<Eigen::Index>(orbit.size());
  Matrix sub(L, L);
  for (Eigen::Index i = 0; i < L; ++i) {
    for (Eigen::Index j = 0; j < L; ++j) {
      sub(i, j) = U.m(static_cast<Eigen::Index>(orbit[static_cast<std::size_t>(i)]),
                      static_cast<Eigen::Index>(orbit[static_cast<std::size_t>(j)]));
    }
  }
  Eigen::ComplexEigenSolver<Matrix> solver(sub, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) return false;
  const Vector ev = solver.eigenvalues();

  // Greedy matching of the computed spectrum against the L-th roots of unity.
  std::vector<bool> used(static_cast<std::size_t>(L), false);
  for (Eigen::Index k = 0; k < L; ++k) {
    const Complex root = root_of_unity(static_cast<double>(k), static_cast<double>(L));
    double best = tol;
    Eigen::Index best_i = -1;
    for (Eigen::Index i = 0; i < L; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const double d = std::abs(ev(i) - root);
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    if (best_i < 0) return false;
    used[static_cast<std::size_t>(best_i)] = true;
  }
  return true;
}

QuantumReport verify_pair(std::uint64_t a, std::uint64_t q) {
  require_coprime_pair(a, q, "verify_pair");
  QuantumReport rep;
  rep.q = q;
  rep.a = a % q;
  rep.r = orbit_of(a, q, 1).size();
  rep.unitary = is_unitary_exact(build_Ua(a, q));
  rep.max_residual = max_eigen_residual(a, q, 1);

  rep.multiplicative = true;
  if (q <= 64) {
    for (std::uint64_t b = 1; b < q; ++b) {
      if (std::gcd(b, q) != 1) continue;
      if (!multiplicativity_check(a, b, q)) {
        rep.multiplicative = false;
        break;
      }
    }
  } else {
    std::size_t taken = 0;
    for (std::uint64_t b = 2; b < q && taken < 8; ++b) {
      if (std::gcd(b, q) != 1) continue;
      ++taken;
      if (!multiplicativity_check(a, b, q)) {
        rep.multiplicative = false;
        break;
      }
    }
    if (rep.multiplicative && !multiplicativity_check(a, q - 1, q)) rep.multiplicative = false;
  }
  return rep;
}

}  // namespace primon::bcq
