#include "primon/arith.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "primon/primes.hpp"

namespace primon::arith {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Trial-division primes, shared and built once.
const std::vector<u64>& small_primes() {
  static const std::vector<u64> table = primes::primes_upto(1'000'000);
  return table;
}

u64 pollard_rho(u64 n) {
  // Brent's cycle-finding variant with batched gcds.
  if ((n & 1) == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto step = [n, c](u64 x) { return (static_cast<u64>((u128)x * x % n) + c) % n; };
    u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      for (u64 k = 0; k < r && g == 1; k += 128) {
        ys = y;
        const u64 lim = std::min<u64>(128, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = step(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r <<= 1;
    }
    if (g == n) {
      // Backtrack one step at a time.
      g = 1;
      while (g == 1) {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n) return g;
  }
}

void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  const u64 d = (n - 1) >> std::countr_zero(n - 1);
  const int s = std::countr_zero(n - 1);
  // This base set is a proven deterministic witness family below 2^64.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::uint64_t Factorization::reconstruct() const {
  u64 v = 1;
  for (const PrimePower& f : factors) {
    for (unsigned i = 0; i < f.k; ++i) v *= f.p;
  }
  return v;
}

Factorization factorize(u64 n) {
  if (n < 1 || n >= (u64{1} << 63)) {
    throw std::domain_error("factorize requires 1 <= n < 2^63");
  }
  Factorization f;
  f.n = n;
  std::vector<u64> ps;
  u64 rest = n;
  for (u64 p : small_primes()) {
    if (p * p > rest) break;
    while (rest % p == 0) {
      ps.push_back(p);
      rest /= p;
    }
  }
  if (rest > 1) {
    if (rest < u64{1'000'000} * 1'000'000 || is_prime_u64(rest)) {
      // Below 10^12 any surviving cofactor is prime (no factor <= 10^6).
      ps.push_back(rest);
    } else {
      factor_rec(rest, ps);
    }
  }
  std::sort(ps.begin(), ps.end());
  for (u64 p : ps) {
    if (!f.factors.empty() && f.factors.back().p == p) {
      ++f.factors.back().k;
    } else {
      f.factors.push_back({p, 1});
    }
  }
  return f;
}

u64 euler_phi(u64 n) {
  if (n == 0) throw std::domain_error("euler_phi requires n >= 1");
  u64 r = n;
  for (const PrimePower& f : factorize(n).factors) {
    r -= r / f.p;
  }
  return r;
}

int mobius(u64 n) {
  if (n == 0) throw std::domain_error("mobius requires n >= 1");
  const Factorization f = factorize(n);
  for (const PrimePower& pp : f.factors) {
    if (pp.k > 1) return 0;
  }
  return (f.factors.size() % 2 == 0) ? 1 : -1;
}

u64 carmichael_lambda(u64 n) {
  if (n == 0) throw std::domain_error("carmichael_lambda requires n >= 1");
  u64 lam = 1;
  for (const PrimePower& f : factorize(n).factors) {
    u64 pk = 1;
    for (unsigned i = 0; i < f.k; ++i) pk *= f.p;
    u64 part;
    if (f.p == 2) {
      part = (f.k == 1) ? 1 : (f.k == 2) ? 2 : pk >> 2;  // 2^(k-2) for k >= 3
    } else {
      part = pk - pk / f.p;  // phi(p^k)
    }
    lam = std::lcm(lam, part);
  }
  return lam;
}

u64 multiplicative_order(u64 a, u64 q) {
  if (q < 2) throw std::domain_error("multiplicative_order requires q >= 2");
  a %= q;
  if (std::gcd(a, q) != 1) {
    throw std::domain_error("multiplicative_order requires gcd(a, q) = 1");
  }
  u64 r = carmichael_lambda(q);
  // a^r = 1 is guaranteed; shrink r by removing prime factors while the
  // congruence survives.
  for (const PrimePower& f : factorize(r).factors) {
    for (unsigned i = 0; i < f.k; ++i) {
      if (powmod(a, r / f.p, q) == 1) {
        r /= f.p;
      } else {
        break;
      }
    }
  }
  return r;
}

XReal dedekind_psi_b(u64 n, const XReal& b, PsiScale scale) {
  if (n == 0) throw std::domain_error("dedekind_psi_b requires n >= 1");
  if (!(b > XReal(0))) throw std::domain_error("dedekind_psi_b requires b > 0");
  // Factor sum S = sum over p|n of [ln(1 - p^-b) - ln(1 - p^-1)].  At b = 1
  // both logs see the same rounded operand (correct rounding makes p^-1 and
  // 1/p identical bits), so S vanishes exactly and psi_1(n) comes back as
  // the exact integer n.
  XReal s(0);
  for (const PrimePower& f : factorize(n).factors) {
    const XReal p(f.p);
    s += log1p(-pow(p, -b)) - log1p(-(XReal(1) / p));
  }
  return scale == PsiScale::log ? log(XReal(n)) + s : XReal(n) * exp(s);
}

}  // namespace primon::arith
