#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace dglab {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

enum class ErrorKind {
  InvalidParameter,
  DomainError,
  ConstructionFailure,
  SeriesDivergence,
  ZeroModeDivergence,
  SizeLimit,
  LogDomain,
  Subcritical,
  Dependency,
  Sampling,
  InsufficientSampling,
  IncreaseWindow,
  PreconditionViolation,
  InvalidInput,
  Checksum
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1u : n;
}

// Static block partition of [0, n) over worker threads; fn(begin, end, worker).
inline void parallel_blocks(std::size_t n, const std::function<void(std::size_t, std::size_t, unsigned)>& fn,
                            unsigned workers = 0) {
  if (workers == 0) workers = worker_count();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t b = w * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, b, e, w);
  }
  for (auto& t : pool) t.join();
}

}  // namespace dglab
