#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>

#include "hadamard/error.hpp"
#include "hadamard/summation.hpp"

namespace hadamard {

using complex = std::complex<double>;

// Weierstrass primary factor H(s, p) = (1 - s) exp(s + s^2/2 + ... + s^p/p).
struct PrimaryFactorValue {
  complex value;
  std::optional<complex> log_value;  // absent exactly when value == 0
  int genus_used = 0;
};

// Below this modulus log H is summed from its power series instead of the
// closed form, which cancels badly for small s.
inline constexpr double kSeriesRadius = 0.5;

namespace detail {

// -(s^{p+1}/(p+1) + ... + s^{p+terms}/(p+terms)) by Horner; the terms shrink
// geometrically, so no compensation is needed.
inline complex series_tail(complex s, int p, int terms) {
  complex acc = 0.0;
  for (int m = p + terms; m >= p + 1; --m) acc = acc * s + 1.0 / static_cast<double>(m);
  complex lead = s;
  for (int m = 1; m <= p; ++m) lead *= s;
  return -(lead * acc);
}

}  // namespace detail

/// Returns -(s^{p+1}/(p+1) + ... + s^{p+terms}/(p+terms)), the truncated
/// series of log H(s, p). Requires |s| < 1.
inline complex log_primary_factor_tail(complex s, int p, int terms) {
  if (std::abs(s) >= 1.0) throw Error("log_primary_factor_tail: series domain requires |s| < 1");
  if (p < 0) throw Error("log_primary_factor_tail: genus must be nonnegative");
  if (terms < 1) throw Error("log_primary_factor_tail: need at least one term");
  return detail::series_tail(s, p, terms);
}

namespace detail {

inline constexpr double kSeriesTarget = 1e-17;

inline constexpr int kMaxSeriesTerms = 64;

// Squared radius below which T terms reach kSeriesTarget: 1e-17^{2/T}.
inline const std::array<double, kMaxSeriesTerms + 1>& series_thresholds() {
  static const auto table = [] {
    std::array<double, kMaxSeriesTerms + 1> t{};
    for (int k = 1; k <= kMaxSeriesTerms; ++k) t[k] = std::pow(kSeriesTarget, 2.0 / k);
    return t;
  }();
  return table;
}

// Number of series terms for |z|^2 = r2.
inline int series_terms_for_norm(double r2) {
  const auto& t = series_thresholds();
  const auto it = std::lower_bound(t.begin() + 1, t.end(), r2);
  return it == t.end() ? kMaxSeriesTerms : static_cast<int>(it - t.begin());
}

inline int series_terms_for(double r) { return series_terms_for_norm(r * r); }

// s + s^2/2 + ... + s^p/p by Horner.
inline complex exponent_polynomial(complex s, int p) {
  complex acc = 0.0;
  for (int m = p; m >= 1; --m) acc = acc * s + 1.0 / static_cast<double>(m);
  return acc * s;
}

// log H(z, p) where the caller supplies 1 - z, so it can be formed without
// cancellation (e.g. (sigma - s) / sigma instead of 1 - s / sigma).
inline std::optional<complex> log_primary(complex z, complex one_minus_z, int p) {
  if (one_minus_z == 0.0) return std::nullopt;
  const double r2 = std::norm(z);
  if (r2 <= kSeriesRadius * kSeriesRadius) {
    if (r2 == 0.0) return complex{0.0, 0.0};
    return series_tail(z, p, series_terms_for_norm(r2));
  }
  return std::log(one_minus_z) + exponent_polynomial(z, p);
}

}  // namespace detail

inline PrimaryFactorValue primary_factor(complex s, int p) {
  if (p < 0) throw Error("primary_factor: genus must be nonnegative");
  const complex one_minus = 1.0 - s;
  const auto log_value = detail::log_primary(s, one_minus, p);
  if (!log_value) return {complex{0.0, 0.0}, std::nullopt, p};
  if (std::abs(s) <= kSeriesRadius) return {std::exp(*log_value), log_value, p};
  return {one_minus * std::exp(detail::exponent_polynomial(s, p)), log_value, p};
}

}  // namespace hadamard
