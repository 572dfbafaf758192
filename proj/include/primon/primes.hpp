#pragma once

// Prime generation and log-space primorials.
//
// PrimeTable carries the first n primes together with the Chebyshev theta
// prefix: theta_prefix[k] = sum of ln(p_i) for i <= k, which equals
// ln(primorial of order k+1).  Everything downstream (KMS ratios, criterion
// scans) reads "log log N_q" as log(theta_prefix[q-1]) and never
// materializes the primorial itself.
//
// theta is accumulated with 32 guard bits beyond the configured precision,
// in fixed ascending order with Neumaier compensation.  The guard bits are
// what make exp(theta_prefix[q-1]) match the exact primorial to relative
// error < 2^(1-P) even at q = 200, where theta ~ 1223 costs ~11 bits of
// headroom on its own.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "primon/xreal.hpp"

namespace primon::primes {

inline constexpr std::size_t kDefaultSieveCap = 100'000'000;  // table entries
inline constexpr std::size_t kSegmentSize = std::size_t{1} << 20;
inline constexpr std::size_t kPrimorialExactMax = 200;

struct PrimeTable {
  std::vector<std::uint64_t> primes;  // first count() primes, ascending
  std::vector<XReal> theta_prefix;    // theta_prefix[k] = ln(p_0) + ... + ln(p_k)
  unsigned theta_precision_bits = 0;  // accumulation precision (configured + 32)

  std::size_t count() const { return primes.size(); }

  // True when every prime <= x is present (the table is a contiguous
  // initial segment, so covering reduces to comparing against the back).
  bool covers(std::uint64_t x) const { return !primes.empty() && primes.back() >= x; }

  // Number of table primes <= x.  Requires covers(x).
  std::size_t index_below(std::uint64_t x) const;

  // ln(N_q) = theta at the q-th prime; 1 <= q <= count().
  const XReal& theta_at(std::size_t q) const;
};

// First n primes with theta prefix sums; n = 0 is rejected.
// Throws ResourceError when n exceeds the cap.
PrimeTable sieve_first(std::size_t n, std::size_t cap = kDefaultSieveCap);

// All primes <= limit (no theta); the raw sieve engine.
std::vector<std::uint64_t> primes_upto(std::uint64_t limit);

// Standalone conveniences over an internal, grow-on-demand prime cache.
std::uint64_t nth_prime(std::size_t n, std::size_t cap = kDefaultSieveCap);
std::uint64_t prime_count(std::uint64_t x);

// ln(N_q) without a caller-supplied table / from a table.
XReal log_primorial(std::size_t q);
XReal log_primorial(std::size_t q, const PrimeTable& t);

// Exact big-integer primorial for cross-checks; q <= 200.
mpz_class primorial_exact(std::size_t q);

// Cache file: little-endian; magic "PRTB", u32 version = 1, u64 count,
// count u64 primes, count f64 theta values (storage precision), then the
// CRC32 of every preceding byte.  load_table re-derives theta from the
// primes at the current configured precision when that exceeds 53 bits;
// at exactly 53 bits the stored doubles are used as-is.
void save_table(const PrimeTable& t, const std::string& path);
PrimeTable load_table(const std::string& path);

// Checksum of the serialized table (the same value the cache file stores);
// reports use it to identify the prime table a run was based on.
std::uint32_t table_crc32(const PrimeTable& t);

}  // namespace primon::primes
