#pragma once

#include <stdexcept>
#include <string>

namespace primon {

// Malformed persistent data: bad magic, version, checksum, or a short read.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource cap was exceeded (sieve size, quadrature depth,
// unreachable tail radius).  Carries an optional "best achieved" figure so
// callers can report how close the computation got.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
  ResourceError(const std::string& what, double best_achieved)
      : std::runtime_error(what), best_achieved_(best_achieved), has_best_(true) {}
  bool has_best_achieved() const { return has_best_; }
  double best_achieved() const { return best_achieved_; }

 private:
  double best_achieved_ = 0.0;
  bool has_best_ = false;
};

}  // namespace primon
