#include "primon/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "primon/errors.hpp"
#include "primon/util.hpp"

namespace primon::primes {

namespace {

// Simple sieve for the base primes (only ever needed up to sqrt(limit)).
std::vector<std::uint64_t> small_sieve(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> comp(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!comp[i]) {
      out.push_back(i);
      for (std::uint64_t j = i * i; j <= limit; j += i) comp[j] = true;
    }
  }
  return out;
}

// Segmented sieve of Eratosthenes up to `limit` inclusive, stopping early
// once `max_count` primes have been collected.  Segment size is fixed so
// memory stays flat regardless of limit.
std::vector<std::uint64_t> segmented_sieve(std::uint64_t limit, std::size_t max_count) {
  std::vector<std::uint64_t> out;
  if (limit < 2 || max_count == 0) return out;
  const std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 2;
  const std::vector<std::uint64_t> base = small_sieve(root);
  std::vector<char> seg(kSegmentSize);
  for (std::uint64_t lo = 2; lo <= limit; lo += kSegmentSize) {
    const std::uint64_t hi = std::min(limit, lo + kSegmentSize - 1);
    std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(hi - lo + 1), 0);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
      for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = 1;
    }
    for (std::uint64_t v = lo; v <= hi; ++v) {
      if (!seg[v - lo]) {
        out.push_back(v);
        if (out.size() == max_count) return out;
      }
    }
  }
  return out;
}

// Rosser-style upper bound for the n-th prime, safe for n >= 6; padded
// below that.
std::uint64_t nth_prime_bound(std::size_t n) {
  if (n < 6) return 14;
  const double d = static_cast<double>(n);
  return static_cast<std::uint64_t>(d * (std::log(d) + std::log(std::log(d)))) + 16;
}

std::vector<std::uint64_t> first_n_primes(std::size_t n) {
  std::uint64_t limit = nth_prime_bound(n);
  for (;;) {
    std::vector<std::uint64_t> out = segmented_sieve(limit, n);
    if (out.size() == n) return out;
    limit += limit / 2 + 16;  // bound undershoot: only possible for tiny n
  }
}

std::vector<XReal> theta_from_primes(const std::vector<std::uint64_t>& primes,
                                     unsigned prec_bits) {
  std::vector<XReal> theta;
  util::deterministic_prefix(
      primes.size(), prec_bits,
      [&primes](std::size_t i, mpfr_ptr out) {
        mpfr_set_ui(out, primes[i], MPFR_RNDN);
        mpfr_log(out, out, MPFR_RNDN);
      },
      theta);
  return theta;
}

// Grow-on-demand cache backing the standalone helpers.
struct SharedPrimes {
  std::mutex mu;
  std::vector<std::uint64_t> primes;
  std::uint64_t covered = 1;  // every prime <= covered is present
};

SharedPrimes& shared() {
  static SharedPrimes s;
  return s;
}

void ensure_count_locked(SharedPrimes& s, std::size_t n, std::size_t cap) {
  if (s.primes.size() >= n) return;
  if (n > cap) {
    throw ResourceError("prime table cap exceeded: " + std::to_string(n) + " > " +
                        std::to_string(cap));
  }
  const std::size_t goal = std::max(n, std::min(s.primes.size() * 2, cap));
  s.primes = first_n_primes(goal);
  s.covered = s.primes.back();
}

void ensure_covered_locked(SharedPrimes& s, std::uint64_t x) {
  if (s.covered >= x) return;
  const std::uint64_t target = std::max<std::uint64_t>(x, s.covered * 2);
  s.primes = segmented_sieve(target, static_cast<std::size_t>(-1));
  s.covered = target;
}

}  // namespace

std::size_t PrimeTable::index_below(std::uint64_t x) const {
  if (!covers(x)) {
    throw std::domain_error("prime table does not cover " + std::to_string(x));
  }
  return static_cast<std::size_t>(
      std::upper_bound(primes.begin(), primes.end(), x) - primes.begin());
}

const XReal& PrimeTable::theta_at(std::size_t q) const {
  if (q < 1 || q > count()) {
    throw std::domain_error("primorial index out of range: " + std::to_string(q));
  }
  return theta_prefix[q - 1];
}

PrimeTable sieve_first(std::size_t n, std::size_t cap) {
  if (n == 0) throw std::domain_error("sieve_first requires n >= 1");
  if (n > cap) {
    throw ResourceError("prime table cap exceeded: " + std::to_string(n) + " > " +
                        std::to_string(cap));
  }
  PrimeTable t;
  t.primes = first_n_primes(n);
  t.theta_precision_bits = XReal::default_precision() + 32;
  t.theta_prefix = theta_from_primes(t.primes, t.theta_precision_bits);
  return t;
}

std::vector<std::uint64_t> primes_upto(std::uint64_t limit) {
  return segmented_sieve(limit, static_cast<std::size_t>(-1));
}

std::uint64_t nth_prime(std::size_t n, std::size_t cap) {
  if (n == 0) throw std::domain_error("nth_prime requires n >= 1");
  SharedPrimes& s = shared();
  std::lock_guard<std::mutex> lock(s.mu);
  ensure_count_locked(s, n, cap);
  return s.primes[n - 1];
}

std::uint64_t prime_count(std::uint64_t x) {
  if (x < 2) return 0;
  SharedPrimes& s = shared();
  std::lock_guard<std::mutex> lock(s.mu);
  ensure_covered_locked(s, x);
  return static_cast<std::uint64_t>(
      std::upper_bound(s.primes.begin(), s.primes.end(), x) - s.primes.begin());
}

XReal log_primorial(std::size_t q) {
  if (q == 0) throw std::domain_error("log_primorial requires q >= 1");
  std::vector<std::uint64_t> head;
  {
    SharedPrimes& s = shared();
    std::lock_guard<std::mutex> lock(s.mu);
    ensure_count_locked(s, q, kDefaultSieveCap);
    head.assign(s.primes.begin(), s.primes.begin() + static_cast<std::ptrdiff_t>(q));
  }
  const unsigned prec = XReal::default_precision() + 32;
  return util::deterministic_sum(q, prec, [&head](std::size_t i, mpfr_ptr out) {
    mpfr_set_ui(out, head[i], MPFR_RNDN);
    mpfr_log(out, out, MPFR_RNDN);
  });
}

XReal log_primorial(std::size_t q, const PrimeTable& t) { return t.theta_at(q); }

mpz_class primorial_exact(std::size_t q) {
  if (q < 1 || q > kPrimorialExactMax) {
    throw std::domain_error("primorial_exact supports 1 <= q <= " +
                            std::to_string(kPrimorialExactMax));
  }
  mpz_class n = 1;
  SharedPrimes& s = shared();
  std::lock_guard<std::mutex> lock(s.mu);
  ensure_count_locked(s, q, kDefaultSieveCap);
  for (std::size_t i = 0; i < q; ++i) n *= static_cast<unsigned long>(s.primes[i]);
  return n;
}

namespace {
constexpr char kMagic[4] = {'P', 'R', 'T', 'B'};
constexpr std::uint32_t kVersion = 1;

void serialize_payload(const PrimeTable& t, std::ostream& os) {
  os.write(kMagic, 4);
  util::write_u32le(os, kVersion);
  util::write_u64le(os, static_cast<std::uint64_t>(t.count()));
  for (std::uint64_t p : t.primes) util::write_u64le(os, p);
  for (const XReal& th : t.theta_prefix) util::write_f64le(os, th.to_double());
}
}  // namespace

std::uint32_t table_crc32(const PrimeTable& t) {
  std::ostringstream payload(std::ios::binary);
  serialize_payload(t, payload);
  const std::string bytes = payload.str();
  return util::crc32_bytes(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
}

void save_table(const PrimeTable& t, const std::string& path) {
  std::ostringstream payload(std::ios::binary);
  serialize_payload(t, payload);
  const std::string bytes = payload.str();
  const std::uint32_t crc =
      util::crc32_bytes(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError("cannot open cache file for writing: " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  util::write_u32le(f, crc);
  f.flush();
  if (!f) throw FormatError("write failed: " + path);
}

PrimeTable load_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open cache file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

  constexpr std::size_t kHeader = 4 + 4 + 8;
  if (bytes.size() < kHeader + 4) throw FormatError("cache file too short: " + path);
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("bad magic bytes (not a prime cache): " + path);
  }

  std::istringstream is(bytes.substr(4), std::ios::binary);
  const std::uint32_t version = util::read_u32le(is);
  if (version != kVersion) {
    throw FormatError("unsupported cache version " + std::to_string(version));
  }
  const std::uint64_t count = util::read_u64le(is);
  const std::size_t expect = kHeader + static_cast<std::size_t>(count) * 16 + 4;
  if (bytes.size() != expect) {
    throw FormatError(bytes.size() < expect ? "truncated cache file: " + path
                                            : "trailing bytes in cache file: " + path);
  }

  const std::size_t payload_len = bytes.size() - 4;
  const std::uint32_t stored_crc = [&] {
    std::istringstream tail(bytes.substr(payload_len), std::ios::binary);
    return util::read_u32le(tail);
  }();
  const std::uint32_t actual_crc = util::crc32_bytes(
      reinterpret_cast<const unsigned char*>(bytes.data()), payload_len);
  if (stored_crc != actual_crc) throw FormatError("cache checksum mismatch: " + path);

  PrimeTable t;
  t.primes.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t i = 0; i < count; ++i) t.primes.push_back(util::read_u64le(is));
  for (std::size_t i = 0; i < t.primes.size(); ++i) {
    const bool ok = t.primes[i] >= 2 && (i == 0 ? t.primes[i] == 2 : t.primes[i] > t.primes[i - 1]);
    if (!ok) throw FormatError("cache primes are not the ascending initial segment: " + path);
  }

  const unsigned configured = XReal::default_precision();
  if (configured > 53) {
    // Stored doubles are only a 53-bit snapshot; re-derive theta at full
    // precision from the primes themselves.
    t.theta_precision_bits = configured + 32;
    t.theta_prefix = theta_from_primes(t.primes, t.theta_precision_bits);
    // Consume and sanity-check the stored doubles against the recomputation.
    for (std::size_t i = 0; i < t.primes.size(); ++i) {
      const double stored = util::read_f64le(is);
      const double fresh = t.theta_prefix[i].to_double();
      if (std::abs(stored - fresh) > 1e-9 * std::max(1.0, std::abs(fresh))) {
        throw FormatError("cache theta disagrees with its primes: " + path);
      }
    }
  } else {
    t.theta_precision_bits = 53;
    for (std::uint64_t i = 0; i < count; ++i) {
      t.theta_prefix.push_back(XReal(util::read_f64le(is)));
    }
  }
  return t;
}

}  // namespace primon::primes
