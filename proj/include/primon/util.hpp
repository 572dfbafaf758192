#pragma once

// Deterministic parallelism and binary-IO helpers.
//
// The reproducibility contract for every parallel loop in the toolkit:
// workers only ever write disjoint, pre-assigned slots, and any reduction
// over those slots happens sequentially in ascending index order.  The
// result is then a pure function of the inputs -- identical bytes for 1,
// 4, or 16 threads.

#include <mpfr.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <vector>

#include "primon/xreal.hpp"

namespace primon::util {

// Process-wide worker budget for internal parallelism. 0 = one worker per
// hardware thread.  Changing it never changes computed bytes.
void set_thread_budget(unsigned n);
unsigned thread_budget();

// Calls body(i) for every 0 <= i < n, parallel across fixed 4096-wide chunks.
// body must only touch state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Sum of term(i, slot) for 0 <= i < n, folded by Neumaier compensation in
// ascending index order at precision prec_bits.  Terms are produced in
// parallel into a bounded buffer (block items at a time), so memory stays
// flat for million-term sums.
XReal deterministic_sum(std::size_t n, unsigned prec_bits,
                        const std::function<void(std::size_t, mpfr_ptr)>& term,
                        std::size_t block = std::size_t{1} << 16);

// Running prefix of the same fold: out[i] = rounded value of term_0 + ... +
// term_i.  The fold state is shared with deterministic_sum's (same order,
// same compensation), so out[q-1] is bit-identical to deterministic_sum(q).
void deterministic_prefix(std::size_t n, unsigned prec_bits,
                          const std::function<void(std::size_t, mpfr_ptr)>& term,
                          std::vector<XReal>& out);

// CRC32 (zlib polynomial) of a byte range.
std::uint32_t crc32_bytes(const unsigned char* data, std::size_t len);

// Little-endian primitive IO.  Readers throw FormatError on short reads.
void write_u32le(std::ostream& os, std::uint32_t v);
void write_u64le(std::ostream& os, std::uint64_t v);
void write_f64le(std::ostream& os, double v);
std::uint32_t read_u32le(std::istream& is);
std::uint64_t read_u64le(std::istream& is);
double read_f64le(std::istream& is);

}  // namespace primon::util
