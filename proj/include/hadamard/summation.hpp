#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace hadamard {

namespace detail {

inline std::atomic<unsigned>& max_threads_setting() {
  static std::atomic<unsigned> n{std::max(1u, std::thread::hardware_concurrency())};
  return n;
}

inline bool& inside_parallel_region() {
  thread_local bool inside = false;
  return inside;
}

inline void neumaier_add(double& sum, double& comp, double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x)) {
    comp += (sum - t) + x;
  } else {
    comp += (x - t) + sum;
  }
  sum = t;
}

}  // namespace detail

/// Upper bound on worker threads used by per-factor loops. Results never
/// depend on this value.
inline void set_max_threads(unsigned n) { detail::max_threads_setting() = std::max(1u, n); }
inline unsigned max_threads() { return detail::max_threads_setting(); }

// Neumaier (error-recycling) accumulator.
template <class T>
class CompensatedSum;

template <>
class CompensatedSum<double> {
 public:
  void add(double x) { detail::neumaier_add(sum_, comp_, x); }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <>
class CompensatedSum<std::complex<double>> {
 public:
  void add(std::complex<double> x) {
    detail::neumaier_add(re_, re_comp_, x.real());
    detail::neumaier_add(im_, im_comp_, x.imag());
  }
  std::complex<double> value() const { return {re_ + re_comp_, im_ + im_comp_}; }

 private:
  double re_ = 0.0, re_comp_ = 0.0;
  double im_ = 0.0, im_comp_ = 0.0;
};

inline constexpr std::size_t kReductionBlock = 256;
inline constexpr std::size_t kMinItemsPerThread = 4096;

// Runs body(begin, end) over [0, n) split into contiguous chunks. Callers
// write into pre-assigned slots, so the outcome is independent of the split.
// Nested calls run serially.
template <class Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_per_thread = kMinItemsPerThread) {
  const std::size_t wanted = std::min<std::size_t>(max_threads(), n / std::max<std::size_t>(1, min_per_thread));
  if (wanted <= 1 || detail::inside_parallel_region()) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + wanted - 1) / wanted;
  std::vector<std::jthread> workers;
  workers.reserve(wanted - 1);
  for (std::size_t t = 1; t < wanted; ++t) {
    const std::size_t b = std::min(n, t * chunk);
    const std::size_t e = std::min(n, b + chunk);
    workers.emplace_back([&body, b, e] {
      detail::inside_parallel_region() = true;
      body(b, e);
    });
  }
  detail::inside_parallel_region() = true;
  body(std::size_t{0}, std::min(n, chunk));
  detail::inside_parallel_region() = false;
}

namespace detail {

template <class T>
T pairwise(std::span<const T> v) {
  if (v.empty()) return T{};
  if (v.size() == 1) return v[0];
  const std::size_t mid = v.size() / 2;
  return pairwise(v.first(mid)) + pairwise(v.subspan(mid));
}

}  // namespace detail

// Reduces `count` items that each contribute `width` values. Items are summed
// with compensation inside fixed blocks of kReductionBlock, then block sums
// are combined by a pairwise tree. The shape depends only on `count`, which
// makes the result bit-identical across runs and thread counts.
//
// contribute(i, out) must overwrite all `width` entries of `out`.
template <class T, class Contribute>
std::vector<T> deterministic_reduce(std::size_t count, std::size_t width, Contribute&& contribute) {
  const std::size_t blocks = (count + kReductionBlock - 1) / kReductionBlock;
  std::vector<T> block_sums(blocks * width);
  parallel_for(blocks, [&](std::size_t b0, std::size_t b1) {
    std::vector<T> item(width);
    std::vector<CompensatedSum<T>> acc(width);
    for (std::size_t b = b0; b < b1; ++b) {
      std::fill(acc.begin(), acc.end(), CompensatedSum<T>{});
      const std::size_t lo = b * kReductionBlock;
      const std::size_t hi = std::min(count, lo + kReductionBlock);
      for (std::size_t i = lo; i < hi; ++i) {
        contribute(i, std::span<T>(item));
        for (std::size_t w = 0; w < width; ++w) acc[w].add(item[w]);
      }
      for (std::size_t w = 0; w < width; ++w) block_sums[b * width + w] = acc[w].value();
    }
  }, kMinItemsPerThread / kReductionBlock);
  std::vector<T> out(width);
  std::vector<T> column(blocks);
  for (std::size_t w = 0; w < width; ++w) {
    for (std::size_t b = 0; b < blocks; ++b) column[b] = block_sums[b * width + w];
    out[w] = detail::pairwise(std::span<const T>(column));
  }
  return out;
}

template <class T>
T deterministic_sum(std::span<const T> values) {
  return deterministic_reduce<T>(values.size(), 1, [&](std::size_t i, std::span<T> out) {
    out[0] = values[i];
  })[0];
}

}  // namespace hadamard
