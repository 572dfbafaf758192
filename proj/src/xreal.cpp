#include "primon/xreal.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace primon {

namespace {
std::atomic<unsigned> g_default_prec{128};

mpfr_prec_t max_prec(const XReal& a, const XReal& b) {
  return static_cast<mpfr_prec_t>(std::max(a.precision(), b.precision()));
}
}  // namespace

XReal XReal::with_precision(unsigned bits) {
  if (bits < MPFR_PREC_MIN) throw std::domain_error("XReal precision below MPFR minimum");
  XReal r;
  mpfr_set_prec(r.v_, static_cast<mpfr_prec_t>(bits));  // erases the value
  mpfr_set_zero(r.v_, 1);
  return r;
}

void XReal::set_default_precision(unsigned bits) {
  if (bits < 53) throw std::domain_error("default precision must be at least 53 bits");
  g_default_prec.store(bits, std::memory_order_relaxed);
}

unsigned XReal::default_precision() { return g_default_prec.load(std::memory_order_relaxed); }

XReal::XReal(const std::string& decimal) : XReal() {
  if (decimal.empty() || mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a decimal number: '" + decimal + "'");
  }
}

std::string XReal::str(int sig_digits) const {
  if (sig_digits < 1) sig_digits = 1;
  char* out = nullptr;
  if (mpfr_asprintf(&out, "%.*Rg", sig_digits, v_) < 0) {
    throw std::runtime_error("mpfr_asprintf failed");
  }
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

XReal operator+(const XReal& a, const XReal& b) {
  XReal r = XReal::with_precision(static_cast<unsigned>(max_prec(a, b)));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
XReal operator-(const XReal& a, const XReal& b) {
  XReal r = XReal::with_precision(static_cast<unsigned>(max_prec(a, b)));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
XReal operator*(const XReal& a, const XReal& b) {
  XReal r = XReal::with_precision(static_cast<unsigned>(max_prec(a, b)));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
XReal operator/(const XReal& a, const XReal& b) {
  XReal r = XReal::with_precision(static_cast<unsigned>(max_prec(a, b)));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

#define PRIMON_UNARY(name, mpfr_fn)                          \
  XReal name(const XReal& x) {                               \
    XReal r = XReal::with_precision(x.precision());          \
    mpfr_fn(r.v_, x.v_, MPFR_RNDN);                          \
    return r;                                                \
  }

PRIMON_UNARY(abs, mpfr_abs)
PRIMON_UNARY(sqrt, mpfr_sqrt)
PRIMON_UNARY(exp, mpfr_exp)
PRIMON_UNARY(expm1, mpfr_expm1)
PRIMON_UNARY(log, mpfr_log)
PRIMON_UNARY(log1p, mpfr_log1p)
PRIMON_UNARY(log10, mpfr_log10)
#undef PRIMON_UNARY

XReal floor(const XReal& x) {
  XReal r = XReal::with_precision(x.precision());
  mpfr_floor(r.v_, x.v_);
  return r;
}

XReal pow(const XReal& base, const XReal& e) {
  XReal r = XReal::with_precision(static_cast<unsigned>(max_prec(base, e)));
  mpfr_pow(r.v_, base.v_, e.v_, MPFR_RNDN);
  return r;
}

XReal pow(const XReal& base, long e) {
  XReal r = XReal::with_precision(base.precision());
  mpfr_pow_si(r.v_, base.v_, e, MPFR_RNDN);
  return r;
}

XReal XReal::const_pi(unsigned bits) {
  XReal r = with_precision(bits);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

XReal rel_diff(const XReal& a, const XReal& b) {
  XReal d = abs(a - b);
  XReal m = abs(a);
  XReal mb = abs(b);
  if (mb > m) m = mb;
  if (m.is_zero()) return XReal(0);
  return d / m;
}

XReal ulp_of(const XReal& x) {
  if (x.is_zero() || x.is_nan() || x.is_inf()) return XReal(0);
  // ulp = 2^(exponent - precision); mpfr_get_exp uses the [0.5, 1) mantissa
  // convention, so this is exact.
  XReal r = XReal::with_precision(x.precision());
  mpfr_set_ui_2exp(r.raw(), 1,
                   mpfr_get_exp(x.raw()) - static_cast<mpfr_exp_t>(x.precision()),
                   MPFR_RNDN);
  return r;
}

void CompensatedSum::add(mpfr_srcptr x) {
  // Neumaier: t = s + x; the compensation picks up whichever operand was
  // truncated.  All temporaries live at the accumulator precision.
  XReal t = XReal::with_precision(s_.precision());
  mpfr_add(t.raw(), s_.raw(), x, MPFR_RNDN);
  XReal d = XReal::with_precision(s_.precision());
  if (mpfr_cmpabs(s_.raw(), x) >= 0) {
    mpfr_sub(d.raw(), s_.raw(), t.raw(), MPFR_RNDN);
    mpfr_add(d.raw(), d.raw(), x, MPFR_RNDN);
  } else {
    mpfr_sub(d.raw(), x, t.raw(), MPFR_RNDN);
    mpfr_add(d.raw(), d.raw(), s_.raw(), MPFR_RNDN);
  }
  mpfr_add(c_.raw(), c_.raw(), d.raw(), MPFR_RNDN);
  mpfr_swap(s_.raw(), t.raw());
}

XReal CompensatedSum::value() const { return s_ + c_; }

}  // namespace primon
