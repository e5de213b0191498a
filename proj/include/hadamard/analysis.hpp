#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "hadamard/core_types.hpp"
#include "hadamard/error.hpp"
#include "hadamard/fit.hpp"
#include "hadamard/product_engine.hpp"
#include "hadamard/summation.hpp"

namespace hadamard {

// Finite-data surrogate for the order: slope of log log MV(v) against log v.
struct OrderEstimate {
  double slope = 0.0;
  std::vector<double> radii;          // radii with MV(v) > e, ascending
  std::vector<double> loglog_values;  // log log MV(v) at those radii
  double residual = 0.0;              // fit RMS
};

// Finite-data surrogate for the exponent of convergence: slope of log N(r)
// against log r.
struct ExponentEstimate {
  double gamma_hat = 0.0;
  std::vector<std::pair<double, std::size_t>> counting_pairs;  // (r, N(r))
  double residual = 0.0;
};

// Winding number of S around a circle.
struct MultiplicityResult {
  complex center;
  double radius = 0.0;
  int winding = 0;
  complex raw_integral;
  std::size_t nodes = 0;
};

inline constexpr std::size_t kDefaultContourNodes = 512;
inline constexpr double kWindingSnapWindow = 0.1;
inline constexpr double kContourClearance = 1e-6;

namespace detail {

inline double log_abs_product(const EntireFunctionSpec& spec, complex s, std::size_t n) {
  const auto lp = log_product(spec, s, n);
  if (lp.vanished) return -std::numeric_limits<double>::infinity();
  return lp.log_sum.real();
}

// log of the max over equally spaced angles 2 pi j / M of |S(v e^{i theta})|.
// Angles for M are a subset of those for 2M.
inline double log_max_modulus(const EntireFunctionSpec& spec, double v, std::size_t angular_samples, std::size_t n) {
  if (!(v > 0.0)) throw Error("max_modulus: radius must be positive");
  if (angular_samples < 8) throw Error("max_modulus: need at least 8 angular samples");
  check_truncation(spec, n);
  std::vector<double> logs(angular_samples);
  parallel_for(
      angular_samples,
      [&](std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) {
          const double theta = (2.0 * std::numbers::pi * static_cast<double>(j)) / static_cast<double>(angular_samples);
          logs[j] = log_abs_product(spec, std::polar(v, theta), n);
        }
      },
      1);
  return *std::max_element(logs.begin(), logs.end());
}

}  // namespace detail

/// Maximum of |S| over the sampled circle |s| = v; a lower bound of the true
/// maximum modulus.
inline double max_modulus(const EntireFunctionSpec& spec, double v, std::size_t angular_samples, std::size_t n_terms) {
  return std::exp(detail::log_max_modulus(spec, v, angular_samples, n_terms));
}

inline OrderEstimate estimate_order(const EntireFunctionSpec& spec, double v_min, double v_max, std::size_t n_radii,
                                    std::size_t n_terms, std::size_t angular_samples = 64) {
  if (!(v_min > 1.0)) throw Error("estimate_order: v_min must exceed 1");
  if (!(v_max > v_min)) throw Error("estimate_order: v_max must exceed v_min");
  if (n_radii < 3) throw Error("insufficient growth range");
  OrderEstimate out;
  std::vector<double> lx;
  const double ratio = std::log(v_max / v_min) / static_cast<double>(n_radii - 1);
  for (std::size_t j = 0; j < n_radii; ++j) {
    const double v = j + 1 == n_radii ? v_max : v_min * std::exp(ratio * static_cast<double>(j));
    const double log_mv = detail::log_max_modulus(spec, v, angular_samples, n_terms);
    if (!(log_mv > 1.0)) continue;  // MV(v) <= e
    out.radii.push_back(v);
    out.loglog_values.push_back(std::log(log_mv));
    lx.push_back(std::log(v));
  }
  if (out.radii.size() < 3) throw Error("insufficient growth range");
  const auto fit = least_squares(lx, out.loglog_values);
  out.slope = fit.slope;
  out.residual = fit.rms;
  return out;
}

inline ExponentEstimate estimate_exponent(const ZeroSequence& seq, double r_min, double r_max, std::size_t n_radii = 32) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw Error("estimate_exponent: need 0 < r_min < r_max");
  if (n_radii < 3) throw Error("estimate_exponent: need at least 3 radii");
  std::vector<double> moduli;
  moduli.reserve(seq.size());
  for (const auto& z : seq.zeros()) moduli.push_back(std::abs(z));
  std::sort(moduli.begin(), moduli.end());
  const auto in_range = std::upper_bound(moduli.begin(), moduli.end(), r_max) -
                        std::lower_bound(moduli.begin(), moduli.end(), r_min);
  if (in_range < 10) throw Error("insufficient zeros in range: need at least 10");

  ExponentEstimate out;
  std::vector<double> lx, ly;
  const double ratio = std::log(r_max / r_min) / static_cast<double>(n_radii - 1);
  for (std::size_t j = 0; j < n_radii; ++j) {
    const double r = j + 1 == n_radii ? r_max : r_min * std::exp(ratio * static_cast<double>(j));
    const auto count = static_cast<std::size_t>(std::upper_bound(moduli.begin(), moduli.end(), r) - moduli.begin());
    out.counting_pairs.emplace_back(r, count);
    if (count == 0) continue;
    lx.push_back(std::log(r));
    ly.push_back(std::log(static_cast<double>(count)));
  }
  if (lx.size() < 2) throw Error("insufficient zeros in range");
  const auto fit = least_squares(lx, ly);
  out.gamma_hat = fit.slope;
  out.residual = fit.rms;
  return out;
}

/// Counts zeros inside |s - center| = radius as (1/2 pi i) of the contour
/// integral of S'/S, using the trapezoidal rule on `nodes` equally spaced
/// points. The result is snapped to the nearest integer and rejected when
/// it sits more than kWindingSnapWindow away.
inline MultiplicityResult verify_multiplicity(const EntireFunctionSpec& spec, complex center, double radius,
                                              std::size_t nodes, std::size_t n_terms) {
  if (!(radius > 0.0)) throw Error("contour radius must be positive");
  if (nodes < 8) throw Error("contour needs at least 8 nodes");
  detail::check_truncation(spec, n_terms);
  const auto zeros = spec.zero_sequence().zeros();
  for (std::size_t i = 0; i < n_terms; ++i) {
    if (std::abs(std::abs(zeros[i] - center) - radius) < kContourClearance) throw Error("contour through zero");
  }
  std::vector<complex> samples(nodes);
  parallel_for(
      nodes,
      [&](std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) {
          const double theta = (2.0 * std::numbers::pi * static_cast<double>(j)) / static_cast<double>(nodes);
          const complex offset = std::polar(radius, theta);
          samples[j] = log_derivative(spec, center + offset, n_terms) * offset;
        }
      },
      1);
  const complex integral = deterministic_sum<complex>(samples) / static_cast<double>(nodes);
  MultiplicityResult out;
  out.center = center;
  out.radius = radius;
  out.raw_integral = integral;
  out.nodes = nodes;
  out.winding = static_cast<int>(std::lround(integral.real()));
  if (std::abs(integral - complex(out.winding, 0.0)) > kWindingSnapWindow) throw Error("quadrature unresolved");
  return out;
}

}  // namespace hadamard
