#include "primon/util.hpp"

#include <zlib.h>

#include <atomic>
#include <bit>
#include <cstring>
#include <thread>

#include "primon/errors.hpp"

namespace primon::util {

namespace {
std::atomic<unsigned> g_thread_budget{0};
constexpr std::size_t kChunk = 4096;

unsigned effective_threads() {
  unsigned n = g_thread_budget.load(std::memory_order_relaxed);
  if (n == 0) n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  return n;
}
}  // namespace

void set_thread_budget(unsigned n) { g_thread_budget.store(n, std::memory_order_relaxed); }
unsigned thread_budget() { return effective_threads(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  unsigned workers = effective_threads();
  if (workers > nchunks) workers = static_cast<unsigned>(nchunks);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1, std::memory_order_relaxed);
      if (k >= nchunks) return;
      const std::size_t lo = k * kChunk;
      const std::size_t hi = std::min(n, lo + kChunk);
      for (std::size_t i = lo; i < hi; ++i) body(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

namespace {
// Shared engine: stream blocks of terms through a reusable buffer, fold
// sequentially.  When `prefix_out` is non-null every rounded running value
// is recorded.
XReal folded_sum(std::size_t n, unsigned prec_bits,
                 const std::function<void(std::size_t, mpfr_ptr)>& term,
                 std::size_t block, std::vector<XReal>* prefix_out) {
  CompensatedSum acc(prec_bits);
  if (n == 0) return acc.value();
  if (block == 0) block = 1;
  if (prefix_out) {
    prefix_out->clear();
    prefix_out->reserve(n);
  }
  std::vector<XReal> buf;
  buf.reserve(std::min(n, block));
  for (std::size_t i = 0; i < std::min(n, block); ++i)
    buf.push_back(XReal::with_precision(prec_bits));
  for (std::size_t base = 0; base < n; base += block) {
    const std::size_t len = std::min(block, n - base);
    parallel_for(len, [&](std::size_t j) { term(base + j, buf[j].raw()); });
    for (std::size_t j = 0; j < len; ++j) {
      acc.add(buf[j]);
      if (prefix_out) prefix_out->push_back(acc.value());
    }
  }
  return acc.value();
}
}  // namespace

XReal deterministic_sum(std::size_t n, unsigned prec_bits,
                        const std::function<void(std::size_t, mpfr_ptr)>& term,
                        std::size_t block) {
  return folded_sum(n, prec_bits, term, block, nullptr);
}

void deterministic_prefix(std::size_t n, unsigned prec_bits,
                          const std::function<void(std::size_t, mpfr_ptr)>& term,
                          std::vector<XReal>& out) {
  folded_sum(n, prec_bits, term, std::size_t{1} << 16, &out);
}

std::uint32_t crc32_bytes(const unsigned char* data, std::size_t len) {
  return static_cast<std::uint32_t>(::crc32(0L, data, static_cast<uInt>(len)));
}

void write_u32le(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64le(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

void write_f64le(std::ostream& os, double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  write_u64le(os, bits);
}

namespace {
void read_exact(std::istream& is, unsigned char* b, std::size_t len) {
  is.read(reinterpret_cast<char*>(b), static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(is.gcount()) != len) {
    throw FormatError("unexpected end of file");
  }
}
}  // namespace

std::uint32_t read_u32le(std::istream& is) {
  unsigned char b[4];
  read_exact(is, b, 4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t read_u64le(std::istream& is) {
  unsigned char b[8];
  read_exact(is, b, 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double read_f64le(std::istream& is) {
  std::uint64_t bits = read_u64le(is);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

}  // namespace primon::util
