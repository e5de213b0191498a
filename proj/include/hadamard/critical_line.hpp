#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "hadamard/core_types.hpp"
#include "hadamard/error.hpp"
#include "hadamard/product_engine.hpp"
#include "hadamard/series_engine.hpp"
#include "hadamard/summation.hpp"

namespace hadamard {

// V(x) = S(xi + i x) sampled on an ascending grid.
struct CriticalLineProfile {
  double xi = 0.0;
  std::vector<double> grid;
  std::vector<complex> values;
  complex v0;
  double imag_max = 0.0;
  std::size_t truncation = 0;
};

// V^{(k)}(0) = i^k S^{(k)}(xi).
struct RotatedDerivatives {
  std::vector<int> orders;
  std::vector<complex> values;
  std::size_t truncation = 0;
};

struct RealZero {
  double tau = 0.0;
  double residual = 0.0;  // |V(tau)|
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

enum class ZeroScanMethod { sign_change_bisection };

struct RealZeroSet {
  std::vector<RealZero> zeros;
  ZeroScanMethod method = ZeroScanMethod::sign_change_bisection;
};

inline constexpr int kDefaultSamplesPerUnit = 64;
inline constexpr double kRealityGate = 1e-6;
inline constexpr double kBisectionWidth = 1e-12;

namespace detail {

inline void require_symmetric(const EntireFunctionSpec& spec) {
  if (!is_symmetric_class(spec.class_tag()))
    throw Error("critical-line restriction requires a symmetric-class spec");
}

inline complex line_value(const EntireFunctionSpec& spec, double x, std::size_t n) {
  return eval_product(spec, complex{*spec.center_xi(), x}, n).value;
}

inline std::vector<double> retained_taus(const EntireFunctionSpec& spec, std::size_t n) {
  const auto zeros = spec.zero_sequence().zeros();
  std::vector<double> taus;
  taus.reserve(n);
  for (std::size_t i = 0; i < n; ++i) taus.push_back(zeros[i].imag());
  return taus;
}

}  // namespace detail

inline CriticalLineProfile critical_line_profile(const EntireFunctionSpec& spec, double x_min, double x_max,
                                                 std::size_t samples, std::size_t n_terms) {
  detail::require_symmetric(spec);
  if (samples < 2) throw Error("profile needs at least two samples");
  if (!(x_max > x_min)) throw Error("profile range must satisfy x_min < x_max");
  detail::check_truncation(spec, n_terms);

  CriticalLineProfile p;
  p.xi = *spec.center_xi();
  p.truncation = n_terms;
  p.v0 = detail::line_value(spec, 0.0, n_terms);
  if (p.v0 == 0.0) throw Error("V(0) = S(xi) vanishes");
  p.grid.resize(samples);
  const double step = (x_max - x_min) / static_cast<double>(samples - 1);
  for (std::size_t j = 0; j < samples; ++j) p.grid[j] = x_min + step * static_cast<double>(j);
  p.grid.back() = x_max;
  p.values.resize(samples);
  // parallel over grid points; each sample owns its slot
  parallel_for(
      samples,
      [&](std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) p.values[j] = detail::line_value(spec, p.grid[j], n_terms);
      },
      1);
  for (const auto& v : p.values) p.imag_max = std::max(p.imag_max, std::abs(v.imag()));
  return p;
}

/// Real zeros of V from sign changes of Re V on the profile grid, each
/// refined by bisection to width 1e-12 (1 + |x|). Requires the profile to be
/// real up to kRealityGate * max |V|.
inline RealZeroSet scan_real_zeros(const CriticalLineProfile& profile, const EntireFunctionSpec& spec) {
  detail::require_symmetric(spec);
  double vmax = 0.0;
  for (const auto& v : profile.values) vmax = std::max(vmax, std::abs(v));
  if (profile.imag_max > kRealityGate * vmax) throw Error("profile not real; zero scan undefined");

  const auto& x = profile.grid;
  const auto& v = profile.values;
  const std::size_t n = profile.truncation;
  RealZeroSet out;
  auto sign = [](double a) { return (a > 0.0) - (a < 0.0); };
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double vj = v[j].real();
    if (vj == 0.0) {
      out.zeros.push_back({x[j], std::abs(v[j]), x[j], x[j]});
      continue;
    }
    if (j + 1 == x.size()) break;
    const double vk = v[j + 1].real();
    if (vk == 0.0 || sign(vj) == sign(vk)) continue;
    double lo = x[j], hi = x[j + 1];
    double flo = vj;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (hi - lo <= kBisectionWidth * (1.0 + std::abs(mid)) || mid <= lo || mid >= hi) break;
      const double fm = detail::line_value(spec, mid, n).real();
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if (sign(fm) == sign(flo)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    const double root = 0.5 * (lo + hi);
    out.zeros.push_back({root, std::abs(detail::line_value(spec, root, n)), x[j], x[j + 1]});
  }
  return out;
}

/// V(0) prod (1 - x^2 / tau_hat^2) over the (+tau, -tau) pairs among the
/// first n_terms zeros of a Y_tilde spec.
inline complex even_product_form(const EntireFunctionSpec& spec, double x, std::size_t n_terms) {
  if (spec.class_tag() != ClassTag::Y_tilde) throw Error("even product form requires a Y_tilde spec");
  detail::check_truncation(spec, n_terms);
  const auto taus = detail::retained_taus(spec, n_terms);
  if (!detail::sign_symmetric(taus)) throw Error("even product form requires a sign-symmetric tau list");
  std::vector<double> positive;
  for (double t : taus)
    if (t > 0.0) positive.push_back(t);
  const complex v0 = detail::line_value(spec, 0.0, n_terms);

  std::vector<double> logs(positive.size());
  std::size_t negatives = 0;
  for (std::size_t k = 0; k < positive.size(); ++k) {
    const double r = x / positive[k];
    const double f = (1.0 - r) * (1.0 + r);
    if (f == 0.0) return 0.0;
    if (f < 0.0) ++negatives;
    logs[k] = std::log(std::abs(f));
  }
  const double magnitude = std::exp(deterministic_sum<double>(logs));
  return v0 * (negatives % 2 ? -magnitude : magnitude);
}

/// The line product in the rotated variable:
///   genus 1: V(0) e^{i x Q} prod (1 - x/tau_k) e^{i x / sigma_k}
///   genus 0: V(0) prod (1 - x/tau_k)
/// computed from tau_k directly (independent of the s-plane factors).
inline complex line_product_form(const EntireFunctionSpec& spec, double x, std::size_t n_terms) {
  detail::require_symmetric(spec);
  detail::check_truncation(spec, n_terms);
  const complex v0 = detail::line_value(spec, 0.0, n_terms);
  const auto zeros = spec.zero_sequence().zeros();
  const bool genus1 = spec.genus() == 1;
  const complex ix{0.0, x};
  const auto lp = detail::accumulate_factor_logs(spec.zero_sequence(), n_terms, [&](std::size_t i) -> std::optional<complex> {
    const double tau = zeros[i].imag();
    const double w = x / tau;
    const auto l = detail::log_primary(complex{w, 0.0}, complex{(tau - x) / tau, 0.0}, 0);
    if (!l) return std::nullopt;
    return genus1 ? *l + ix / zeros[i] : *l;
  });
  if (lp.vanished) return 0.0;
  return v0 * std::exp((genus1 ? ix * spec.q_constant() : complex{0.0, 0.0}) + lp.log_sum);
}

inline RotatedDerivatives rotated_derivatives(const EntireFunctionSpec& spec, int k_max, std::size_t n_terms) {
  detail::require_symmetric(spec);
  if (k_max < 0) throw Error("rotated_derivatives: k_max must be nonnegative");
  const auto t = taylor_coefficients(spec, complex{*spec.center_xi(), 0.0}, static_cast<std::size_t>(k_max), n_terms);
  RotatedDerivatives out;
  out.truncation = n_terms;
  complex rot = 1.0;
  double factorial = 1.0;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) {
      rot *= complex{0.0, 1.0};
      factorial *= k;
    }
    out.orders.push_back(k);
    out.values.push_back(rot * factorial * t.coefficients[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace hadamard
