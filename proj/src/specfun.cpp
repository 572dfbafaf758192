#include "primon/specfun.hpp"

#include <gmpxx.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "primon/errors.hpp"
#include "primon/util.hpp"

namespace primon::specfun {

namespace {

// ---------------------------------------------------------------------------
// 15-point Gauss-Legendre nodes, cached per working precision.

struct GlNodes {
  std::vector<XReal> x;  // nodes on [-1, 1]
  std::vector<XReal> w;  // weights
};

// Evaluates P_15 and its derivative at x by the three-term recurrence.
void legendre15(const XReal& x, XReal& pn, XReal& dpn) {
  constexpr int n = 15;
  XReal p0(1), p1 = x;
  for (int k = 1; k < n; ++k) {
    XReal p2 = (XReal(2 * k + 1) * x * p1 - XReal(k) * p0) / XReal(k + 1);
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  dpn = XReal(n) * (x * p1 - p0) / (x * x - XReal(1));
}

GlNodes compute_gl15(unsigned prec) {
  constexpr int n = 15;
  GlNodes nd;
  const XReal pi = XReal::const_pi(prec);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-angle initial guess, then Newton to full precision.
    XReal xk = XReal::with_precision(prec);
    {
      XReal arg = pi * XReal(4 * i + 3) / XReal(4 * n + 2);
      mpfr_cos(xk.raw(), arg.raw(), MPFR_RNDN);
    }
    XReal pn = XReal::with_precision(prec), dpn = XReal::with_precision(prec);
    for (int it = 0; it < 12; ++it) {
      legendre15(xk, pn, dpn);
      xk = xk - pn / dpn;
    }
    legendre15(xk, pn, dpn);
    nd.x.push_back(xk);
    nd.w.push_back(XReal(2) / ((XReal(1) - xk * xk) * dpn * dpn));
  }
  return nd;
}

const GlNodes& gl15_nodes(unsigned prec) {
  static std::mutex mu;
  static std::map<unsigned, GlNodes> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(prec);
  if (it == cache.end()) it = cache.emplace(prec, compute_gl15(prec)).first;
  return it->second;
}

unsigned quad_precision() { return XReal::default_precision() + 16; }

XReal gl15_on(const GlNodes& nd, const std::function<XReal(const XReal&)>& f,
              const XReal& a, const XReal& b) {
  const XReal c = (a + b) / XReal(2);
  const XReal h = (b - a) / XReal(2);
  XReal acc(0);
  for (std::size_t i = 0; i < nd.x.size(); ++i) {
    acc += nd.w[i] * f(c + h * nd.x[i]);
  }
  return acc * h;
}

// ---------------------------------------------------------------------------
// Bernoulli numbers (exact rationals) and factorials, grown on demand.

class BernoulliCache {
 public:
  // B_m in the convention with B_1 = -1/2.
  mpq_class at(unsigned m) {
    std::lock_guard<std::mutex> lock(mu_);
    while (b_.size() <= m) {
      const unsigned k = static_cast<unsigned>(b_.size());
      // sum_{j=0}^{k} C(k+1, j) B_j = 0  =>  B_k = -1/(k+1) * sum_{j<k} ...
      mpq_class s = 0;
      for (unsigned j = 0; j < k; ++j) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), k + 1, j);
        s += mpq_class(binom) * b_[j];
      }
      b_.push_back(k == 0 ? mpq_class(1) : mpq_class(-s / (k + 1)));
    }
    return b_[m];
  }

 private:
  std::mutex mu_;
  std::vector<mpq_class> b_;
};

BernoulliCache& bernoulli_cache() {
  static BernoulliCache c;
  return c;
}

mpz_class factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

// One Euler-Maclaurin attempt with N direct terms; fails (returns false)
// if the correction series stops shrinking before reaching the target.
bool zeta_attempt(const XReal& b, unsigned W, unsigned P, unsigned long N, XReal& out) {
  const XReal mb = XReal::with_precision(W) - b;  // -b at working precision
  CompensatedSum direct(W);
  XReal t = XReal::with_precision(W);
  for (unsigned long k = 1; k < N; ++k) {
    mpfr_set_ui(t.raw(), k, MPFR_RNDN);
    mpfr_pow(t.raw(), t.raw(), mb.raw(), MPFR_RNDN);
    direct.add(t);
  }
  const XReal xN(static_cast<unsigned long>(N));
  XReal sum = direct.value() + pow(xN, XReal(1) - b) / (b - XReal(1)) + pow(xN, mb) / XReal(2);

  // Correction terms T_j = B_2j/(2j)! * (b)(b+1)...(b+2j-2) * N^(1-b-2j).
  XReal poch = b;                        // rising factorial, 1 factor so far
  XReal npow = pow(xN, mb) / (xN);       // N^(-b-1), the j = 1 power
  const XReal invN2 = XReal(1) / (xN * xN);
  XReal eps = abs(sum);
  {
    XReal scale = XReal::with_precision(W);
    mpfr_set_ui_2exp(scale.raw(), 1, -static_cast<mpfr_exp_t>(P + 16), MPFR_RNDN);
    eps *= scale;
  }
  XReal prev_mag(0);
  for (unsigned j = 1; j <= 2 * N; ++j) {
    const mpq_class coeff = bernoulli_cache().at(2 * j) / mpq_class(factorial(2 * j));
    const XReal term = XReal(coeff) * poch * npow;
    const XReal mag = abs(term);
    if (j > 1 && mag > prev_mag) return false;  // diverging: N too small
    sum += term;
    if (mag < eps) {
      out = sum;
      return true;
    }
    prev_mag = mag;
    poch *= (b + XReal(2 * j - 1)) * (b + XReal(2 * j));
    npow *= invN2;
  }
  return false;
}

}  // namespace

XReal gl15_panel(const std::function<XReal(const XReal&)>& f, const XReal& a, const XReal& b) {
  return gl15_on(gl15_nodes(quad_precision()), f, a, b);
}

QuadResult integrate(const std::function<XReal(const XReal&)>& f, const XReal& a,
                     const XReal& b, const Quadrature& q) {
  if (!(a <= b)) throw std::domain_error("integrate requires a <= b");
  QuadResult res{XReal(0), XReal(0), 0};
  if (a == b) return res;
  const unsigned W = quad_precision();
  const GlNodes& nd = gl15_nodes(W);
  const XReal total_len = b - a;

  struct Seg {
    XReal a, len, whole;
    unsigned depth;
  };
  std::vector<Seg> todo;
  todo.push_back({a, total_len, gl15_on(nd, f, a, b), 0});
  CompensatedSum val(W), errs(W);
  std::size_t panels = 0;

  while (!todo.empty()) {
    Seg s = std::move(todo.back());
    todo.pop_back();
    const XReal half = s.len / XReal(2);
    const XReal m = s.a + half;
    const XReal hi = s.a + s.len;
    const XReal left = gl15_on(nd, f, s.a, m);
    const XReal right = gl15_on(nd, f, m, hi);
    const XReal refined = left + right;
    const XReal delta = abs(refined - s.whole);
    const XReal budget = q.abs_tol * (s.len / total_len);
    if (delta <= budget) {
      val.add(refined);
      errs.add(delta);
      panels += 2;
    } else if (s.depth + 1 >= q.max_depth) {
      throw ResourceError("adaptive quadrature did not reach tolerance", delta.to_double());
    } else {
      todo.push_back({s.a, half, left, s.depth + 1});
      todo.push_back({m, half, right, s.depth + 1});
    }
  }
  res.value = val.value();
  res.error_estimate = errs.value();
  res.panels = panels;
  return res;
}

XReal zeta_real(const XReal& b) {
  // Euler-Maclaurin continues zeta through (0,1): the N^(1-b)/(b-1) term
  // cancels the divergent partial sum, leaving the analytic value (negative
  // on that interval).  Only the pole itself and b <= 0 are rejected.
  if (!(b > XReal(0))) throw std::domain_error("zeta_real requires b > 0");
  if (b == XReal(1)) throw std::domain_error("zeta_real: pole at b = 1");
  const unsigned P = std::max(XReal::default_precision(), b.precision());
  const unsigned W = P + 64;
  XReal bw = XReal::with_precision(W);
  mpfr_set(bw.raw(), b.raw(), MPFR_RNDN);
  XReal out = XReal::with_precision(W);
  for (unsigned long N = std::max(32u, P);; N *= 2) {
    if (zeta_attempt(bw, W, P, N, out)) break;
    if (N > 1u << 20) throw ResourceError("zeta Euler-Maclaurin failed to converge");
  }
  XReal r = XReal::with_precision(P);
  mpfr_set(r.raw(), out.raw(), MPFR_RNDN);
  return r;
}

XReal euler_gamma() {
  static std::mutex mu;
  static std::map<unsigned, XReal> cache;
  const unsigned P = XReal::default_precision();
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(P);
  if (it != cache.end()) return it->second;

  // Brent-McMillan: gamma = A(n)/B(n) - ln n + O(e^-4n) with
  // A = sum H_k (n^k/k!)^2 and B = sum (n^k/k!)^2.
  const unsigned W = P + 32;
  const unsigned long n =
      static_cast<unsigned long>((static_cast<double>(W) + 8.0) * 0.17328679513998632) + 2;
  const unsigned long K = 6 * n + 20;  // terms decay like e^-9.5n well before this

  XReal t = XReal::with_precision(W);
  mpfr_set_ui(t.raw(), 1, MPFR_RNDN);
  XReal A = XReal::with_precision(W), B = XReal::with_precision(W);
  XReal H = XReal::with_precision(W);
  mpfr_set_ui(B.raw(), 1, MPFR_RNDN);
  const XReal n2 = XReal(n) * XReal(n);
  for (unsigned long k = 1; k <= K; ++k) {
    t = t * n2 / XReal(k * k);
    H = H + XReal(1) / XReal(k);
    A = A + t * H;
    B = B + t;
  }
  XReal g = A / B - log(XReal(n));
  XReal r = XReal::with_precision(P);
  mpfr_set(r.raw(), g.raw(), MPFR_RNDN);
  cache.emplace(P, r);
  return r;
}

QuadResult li_offset_result(const XReal& x, const Quadrature& q) {
  if (!(x >= XReal(2))) throw std::domain_error("li_offset requires x >= 2");
  if (x == XReal(2)) return {XReal(0), XReal(0), 0};
  return integrate([](const XReal& t) { return XReal(1) / log(t); }, XReal(2), x, q);
}

XReal li_offset(const XReal& x, const Quadrature& q) { return li_offset_result(x, q).value; }

QuadResult bertrand_B_result(const XReal& b, const XReal& x, const Quadrature& q) {
  if (!(b > XReal(0)) || !(b < XReal(1))) {
    throw std::domain_error("bertrand_B requires 0 < b < 1");
  }
  if (!(x >= XReal(2))) throw std::domain_error("bertrand_B requires x >= 2");
  if (x == XReal(2)) return {XReal(0), XReal(0), 0};
  const XReal mb = -b;
  return integrate([&mb](const XReal& t) { return pow(t, mb) / log(t); }, XReal(2), x, q);
}

XReal bertrand_B(const XReal& b, const XReal& x, const Quadrature& q) {
  return bertrand_B_result(b, x, q).value;
}

XReal prime_sum_S(const XReal& b, std::uint64_t x, const primes::PrimeTable& t) {
  if (!(b > XReal(0))) throw std::domain_error("prime_sum_S requires b > 0");
  const std::size_t m = t.index_below(x);
  const unsigned W = XReal::default_precision() + 32;
  XReal mb = XReal::with_precision(W);
  mpfr_neg(mb.raw(), b.raw(), MPFR_RNDN);
  const bool integral_b = mpfr_integer_p(b.raw()) && mpfr_fits_ulong_p(b.raw(), MPFR_RNDN);
  const unsigned long bu = integral_b ? mpfr_get_ui(b.raw(), MPFR_RNDN) : 0;
  const auto& primes = t.primes;
  return util::deterministic_sum(m, W, [&](std::size_t i, mpfr_ptr out) {
    mpfr_set_ui(out, primes[i], MPFR_RNDN);
    if (integral_b) {
      mpfr_pow_ui(out, out, bu, MPFR_RNDN);
      mpfr_ui_div(out, 1, out, MPFR_RNDN);
    } else {
      mpfr_pow(out, out, mb.raw(), MPFR_RNDN);
    }
  });
}

XReal J_b_closed(const XReal& b, std::uint64_t x, const primes::PrimeTable& t) {
  if (!(b > XReal(0)) || !(b < XReal(1))) {
    throw std::domain_error("J_b_closed requires 0 < b < 1");
  }
  const std::size_t m = t.index_below(x);
  const unsigned W = XReal::default_precision() + 32;
  XReal mb = XReal::with_precision(W);
  mpfr_neg(mb.raw(), b.raw(), MPFR_RNDN);
  XReal xb = XReal::with_precision(W);
  mpfr_set_ui(xb.raw(), x, MPFR_RNDN);
  mpfr_pow(xb.raw(), xb.raw(), mb.raw(), MPFR_RNDN);
  const auto& primes = t.primes;
  // sum (p^-b - x^-b), divided by b once at the end (same algebra, fewer ops).
  XReal s = util::deterministic_sum(m, W, [&](std::size_t i, mpfr_ptr out) {
    mpfr_set_ui(out, primes[i], MPFR_RNDN);
    mpfr_pow(out, out, mb.raw(), MPFR_RNDN);
    mpfr_sub(out, out, xb.raw(), MPFR_RNDN);
  });
  return s / b;
}

XReal I_b(const XReal& b, const XReal& x, const Quadrature& q) {
  if (!(b > XReal(0.5)) || !(b < XReal(1))) {
    throw std::domain_error("I_b requires 0.5 < b < 1");
  }
  if (!(x >= XReal(2))) throw std::domain_error("I_b requires x >= 2");
  // Integration by parts against d(-t^-b/b); the boundary term at 2
  // vanishes because Li(2) = 0 under the offset convention.
  return (bertrand_B(b, x, q) - li_offset(x, q) * pow(x, -b)) / b;
}

XReal mertens_product(std::uint64_t x, const primes::PrimeTable& t) {
  const std::size_t m = t.index_below(x);
  const unsigned W = XReal::default_precision() + 32;
  const auto& primes = t.primes;
  // prod (1 - 1/p)^-1 = exp(-sum log1p(-1/p))
  XReal s = util::deterministic_sum(m, W, [&](std::size_t i, mpfr_ptr out) {
    mpfr_set_si(out, -1, MPFR_RNDN);
    mpfr_div_ui(out, out, primes[i], MPFR_RNDN);
    mpfr_log1p(out, out, MPFR_RNDN);
    mpfr_neg(out, out, MPFR_RNDN);
  });
  return exp(s);
}

CbResult c_b_constant(const XReal& b, const primes::PrimeTable& t) {
  if (!(b > XReal(0.5)) || !(b < XReal(1))) {
    throw std::domain_error("c_b_constant requires 0.5 < b < 1");
  }
  const unsigned W = XReal::default_precision() + 32;
  XReal mb = XReal::with_precision(W);
  mpfr_neg(mb.raw(), b.raw(), MPFR_RNDN);
  const auto& primes = t.primes;
  // Each term ln(1 - u) + u with u = p^-b; analytically negative.
  XReal s = util::deterministic_sum(t.count(), W, [&](std::size_t i, mpfr_ptr out) {
    XReal u = XReal::with_precision(static_cast<unsigned>(mpfr_get_prec(out)));
    mpfr_set_ui(u.raw(), primes[i], MPFR_RNDN);
    mpfr_pow(u.raw(), u.raw(), mb.raw(), MPFR_RNDN);
    mpfr_neg(out, u.raw(), MPFR_RNDN);
    mpfr_log1p(out, out, MPFR_RNDN);
    mpfr_add(out, out, u.raw(), MPFR_RNDN);
  });

  // Tail over p > x, x the last table prime:
  //   |ln(1-u) + u| <= u^2 / (2 (1 - u)), u = p^-b <= x^-b,
  //   sum p^-2b over p > x  <=  integral_x^inf t^-2b dt = x^(1-2b)/(2b-1).
  const XReal x(t.primes.back());
  const XReal xb = pow(x, -b);
  const XReal tail =
      pow(x, XReal(1) - XReal(2) * b) / ((XReal(2) * b - XReal(1)) * XReal(2) * (XReal(1) - xb));
  return {s, tail};
}

CbResult c_b_constant(const XReal& b, const primes::PrimeTable& t, const XReal& required_radius) {
  CbResult r = c_b_constant(b, t);
  if (r.tail_radius > required_radius) {
    throw ResourceError("c_b tail radius " + r.tail_radius.str(6) +
                            " not reachable with this prime table (requested " +
                            required_radius.str(6) + ")",
                        r.tail_radius.to_double());
  }
  return r;
}

}  // namespace primon::specfun
