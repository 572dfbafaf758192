#pragma once
// Command implementations behind the primon binary.
//
// Every command is a pure function (RunConfig, args, ostream) -> exit code,
// so tests drive them directly without spawning processes.  The binary in
// tools/ only parses flags, resolves the cache path (--cache beats the
// PRIMON_CACHE environment variable), and maps exceptions to exit code 2.
//
// Exit-code contract (CI-consumable):
//   0  success / every scanned criterion holds
//   1  at least one criterion row failed (evidence, not a crash)
//   2  operational error: bad arguments, domain violations, cache damage
//
// Report rules:
//   * extended-precision numbers serialize as decimal strings with a fixed
//     significant-digit count (default 20) -- no double rounding downstream;
//   * JSON reports are a single object carrying a provenance block
//     (version, precision, tolerance, prime-table CRC32); thread count is
//     deliberately absent so reports are byte-identical across -j settings;
//   * CSV is RFC-4180, rows streamed as produced, one '#' summary line last.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "primon/primes.hpp"
#include "primon/specfun.hpp"

namespace primon::cli {

inline constexpr const char* kVersion = "1.0.0";

enum class Format { automatic, csv, json };

struct RunConfig {
  unsigned precision_bits = 128;
  std::string quadrature_tolerance = "1e-20";  // parsed at configured precision
  std::string prime_cache_path;                // empty: build in memory
  Format output_format = Format::automatic;    // automatic: csv for scans, json otherwise
  unsigned thread_count = 0;                   // 0 = hardware
  int sig_digits = 20;
};

// Applies precision and thread budget to process state; validates tolerance.
void apply(const RunConfig& cfg);

// Quadrature settings derived from the config.
specfun::Quadrature quadrature_of(const RunConfig& cfg);

// Prime table with at least min_count primes, honoring the cache lifecycle:
// load when the file exists (format damage propagates as FormatError),
// rebuild-and-save when too small or absent.
primes::PrimeTable acquire_table(const RunConfig& cfg, std::size_t min_count);

// primes --count N: build (and cache) a table, emit an info report.
int cmd_primes(const RunConfig& cfg, std::size_t count, std::ostream& os);

// arith phi|lambda|mobius|order|psi --n N [--a A] [--b B]
int cmd_arith(const RunConfig& cfg, const std::string& op, std::uint64_t n,
              std::optional<std::uint64_t> a, const std::optional<std::string>& b,
              std::ostream& os);

// specfun zeta|li|bertrand|cb [--b B] [--x X]
int cmd_specfun(const RunConfig& cfg, const std::string& op, const std::optional<std::string>& b,
                const std::optional<std::string>& x, std::ostream& os);

// kms epsilon --beta B --q Q
int cmd_kms_epsilon(const RunConfig& cfg, const std::string& beta, std::size_t q,
                    std::ostream& os);

// kms table1: the 3x4 epsilon grid plus primorial magnitudes.
int cmd_table1(const RunConfig& cfg, std::ostream& os);

// scan nicolas|conjecture|asymp [--b B] [--qmax N] [--eps E]
int cmd_scan(const RunConfig& cfg, const std::string& mode, const std::optional<std::string>& b,
             std::size_t q_max, const std::optional<std::string>& eps, std::ostream& os);

// quantum verify [--q Q] [--a A] [--max-q M]
int cmd_quantum(const RunConfig& cfg, std::optional<std::uint64_t> q,
                std::optional<std::uint64_t> a, std::uint64_t max_q, std::ostream& os);

// constants [--b B]
int cmd_constants(const RunConfig& cfg, const std::optional<std::string>& b, std::ostream& os);

}  // namespace primon::cli
