#pragma once

// Extended-precision real scalar backed by MPFR.
//
// Every analytic quantity in the toolkit travels through XReal.  The mantissa
// width is configurable per process (default 128 bits, never below 53); each
// value remembers the precision it was created with, and binary operations
// round once, correctly, into the wider of the two operand precisions.  That
// gives the two properties the numerics rely on:
//
//   * arithmetic is correctly rounded to <= 1 ulp,
//   * results are a pure function of operand bits -- no hidden state, so
//     reductions that fix their operation order are bit-reproducible across
//     thread counts.
//
// CompensatedSum implements Neumaier's variant of Kahan summation on XReal.
// With a fixed add order the running error stays O(1) ulp instead of O(n),
// which is what lets theta prefixes and 10^6-term partition sums meet their
// stated error bounds.

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <string>

namespace primon {

class XReal {
 public:
  // Zero at the process default precision.
  XReal() { mpfr_init2(v_, static_cast<mpfr_prec_t>(default_precision())); mpfr_set_zero(v_, 1); }

  // Implicit numeric conversions are deliberate: formulas read naturally
  // (x + 1, 0.5 * y) and every conversion below is exact.
  XReal(double v) : XReal() { mpfr_set_d(v_, v, MPFR_RNDN); }
  XReal(int v) : XReal() { mpfr_set_si(v_, v, MPFR_RNDN); }
  XReal(long v) : XReal() { mpfr_set_si(v_, v, MPFR_RNDN); }
  XReal(unsigned v) : XReal() { mpfr_set_ui(v_, v, MPFR_RNDN); }
  XReal(unsigned long v) : XReal() { mpfr_set_ui(v_, v, MPFR_RNDN); }
  explicit XReal(const mpz_class& z) : XReal() { mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
  explicit XReal(const mpq_class& q) : XReal() { mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }

  // Parse a decimal string at the process default precision.
  // Throws std::invalid_argument on malformed input.
  explicit XReal(const std::string& decimal);

  XReal(const XReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  XReal(XReal&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  XReal& operator=(const XReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  XReal& operator=(XReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~XReal() { mpfr_clear(v_); }

  // An uninitialized-value slot at an explicit precision (for accumulators
  // that need guard bits beyond the process default).
  static XReal with_precision(unsigned bits);

  // Process default mantissa width.  Must be >= 53; throws std::domain_error.
  static void set_default_precision(unsigned bits);
  static unsigned default_precision();

  unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  // Shortest-faithful decimal with the given significant digit count.
  std::string str(int sig_digits = 20) const;

  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_inf() const { return mpfr_inf_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  XReal& operator+=(const XReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  XReal& operator-=(const XReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  XReal& operator*=(const XReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  XReal& operator/=(const XReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  XReal operator-() const {
    XReal r = with_precision(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  // Escape hatch for module internals written against raw MPFR (hot loops,
  // special functions).  The invariants above still apply: callers must not
  // change the precision of a live value.
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  friend XReal operator+(const XReal& a, const XReal& b);
  friend XReal operator-(const XReal& a, const XReal& b);
  friend XReal operator*(const XReal& a, const XReal& b);
  friend XReal operator/(const XReal& a, const XReal& b);

  friend bool operator<(const XReal& a, const XReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const XReal& a, const XReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const XReal& a, const XReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const XReal& a, const XReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const XReal& a, const XReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const XReal& a, const XReal& b) { return !(a == b); }

  friend XReal abs(const XReal& x);
  friend XReal sqrt(const XReal& x);
  friend XReal exp(const XReal& x);
  friend XReal expm1(const XReal& x);
  friend XReal log(const XReal& x);
  friend XReal log1p(const XReal& x);
  friend XReal log10(const XReal& x);
  friend XReal pow(const XReal& base, const XReal& e);
  friend XReal pow(const XReal& base, long e);
  friend XReal floor(const XReal& x);

  // pi at an explicit precision (quadrature node generation).
  static XReal const_pi(unsigned bits);

 private:
  mpfr_t v_;
};

// Relative distance |a-b| / max(|a|,|b|); 0 when both are zero.  The
// workhorse of every "agrees to 10^-k" assertion.
XReal rel_diff(const XReal& a, const XReal& b);

// One unit in the last place of x at x's own precision (0 for zero/non-finite).
XReal ulp_of(const XReal& x);

// x rounded once, correctly, to the given precision.  Guard-bit accumulators
// pass through this on their way to public results.
inline XReal round_to(const XReal& x, unsigned bits) {
  XReal r = XReal::with_precision(bits);
  mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

// Neumaier-compensated accumulator.  add() order defines the result bits;
// callers that need reproducibility fix that order (ascending index).
class CompensatedSum {
 public:
  explicit CompensatedSum(unsigned prec_bits)
      : s_(XReal::with_precision(prec_bits)), c_(XReal::with_precision(prec_bits)) {
    mpfr_set_zero(s_.raw(), 1);
    mpfr_set_zero(c_.raw(), 1);
  }

  void add(const XReal& x) { add(x.raw()); }
  void add(mpfr_srcptr x);

  // Rounded current value s + c.
  XReal value() const;

 private:
  XReal s_;  // running sum
  XReal c_;  // running compensation
};

}  // namespace primon
