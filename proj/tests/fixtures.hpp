#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "hadamard/hadamard.hpp"

namespace fixtures {

using hadamard::complex;
inline constexpr double pi = std::numbers::pi;

// ---- closed forms -----------------------------------------------------------

// sinh(pi u) / (pi u), continuous at u = 0.
inline complex sinhc(complex u) {
  if (std::abs(u) < 1e-8) return 1.0 + (pi * pi / 6.0) * u * u;
  return std::sinh(pi * u) / (pi * u);
}

// sin(pi x) / (pi x)
inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(pi * x) / (pi * x); }

// pi^{2k} / (2k+1)!
inline double sinhc_even_coefficient(int k) {
  double v = 1.0;
  for (int j = 1; j <= 2 * k + 1; ++j) v /= j;
  return v * std::pow(pi, 2 * k);
}

// ---- specs ---------------------------------------------------------------------

inline std::vector<double> pm_integers(std::size_t k_max) {
  std::vector<double> taus;
  for (std::size_t k = 1; k <= k_max; ++k) {
    taus.push_back(static_cast<double>(k));
    taus.push_back(-static_cast<double>(k));
  }
  return taus;
}

/// Y_tilde with zeros 1 + i k, |k| <= k_max, S(1) = 1: truncation of
/// sinh(pi (s - 1)) / (pi (s - 1)).
inline hadamard::EntireFunctionSpec sinh_line(std::size_t k_max, double xi = 1.0) {
  return hadamard::make_symmetric_spec(xi, pm_integers(k_max), 1.0, hadamard::ClassTag::Y_tilde);
}

/// L_bar with the same zeros and Q = -sum 1/sigma_k, which makes it equal to
/// sinh_line on the same data.
inline hadamard::EntireFunctionSpec sinh_line_genus1(std::size_t k_max, double xi = 1.0) {
  double sum = 0.0;
  for (std::size_t k = k_max; k >= 1; --k) sum += 2.0 * xi / (xi * xi + static_cast<double>(k * k));
  return hadamard::make_symmetric_spec(xi, pm_integers(k_max), 1.0, hadamard::ClassTag::L_bar, -sum);
}

inline std::vector<complex> pm_imaginary_integers(std::size_t k_max) {
  std::vector<complex> z;
  for (std::size_t k = 1; k <= k_max; ++k) {
    z.emplace_back(0.0, static_cast<double>(k));
    z.emplace_back(0.0, -static_cast<double>(k));
  }
  return z;
}

/// Zeros +-i k with S(0) = 1: truncation of sinh(pi s) / (pi s).
inline hadamard::EntireFunctionSpec sinh_origin(std::size_t k_max, hadamard::ClassTag tag = hadamard::ClassTag::L) {
  hadamard::ZeroSequence seq(pm_imaginary_integers(k_max), hadamard::Ordering::by_modulus,
                             hadamard::Pairing::conjugate_pairs, "sinh_origin");
  return hadamard::EntireFunctionSpec(tag, 1.0, 0.0, std::nullopt, std::move(seq));
}

/// Polynomial (1 - s/2)(1 - s/(1+i))(1 - s/(1-i)).
inline std::vector<complex> cubic_zeros() { return {2.0, {1.0, 1.0}, {1.0, -1.0}}; }

inline hadamard::EntireFunctionSpec cubic() {
  hadamard::ZeroSequence seq(cubic_zeros(), hadamard::Ordering::by_modulus, hadamard::Pairing::conjugate_pairs);
  return hadamard::EntireFunctionSpec(hadamard::ClassTag::Y, 1.0, 0.0, std::nullopt, std::move(seq));
}

inline hadamard::EntireFunctionSpec from_zeros(std::vector<complex> zeros, hadamard::ClassTag tag = hadamard::ClassTag::Y,
                                                complex s0 = 1.0, complex q = 0.0) {
  hadamard::ZeroSequence seq(std::move(zeros));
  return hadamard::EntireFunctionSpec(tag, s0, q, std::nullopt, std::move(seq));
}

// ---- brute-force oracle ------------------------------------------------------

/// Direct left-to-right multiplication in long double over the first n zeros.
inline complex direct_product(const hadamard::EntireFunctionSpec& spec, complex s, std::size_t n) {
  using cl = std::complex<long double>;
  const cl sl(s.real(), s.imag());
  cl acc(spec.value_at_zero().real(), spec.value_at_zero().imag());
  const auto zeros = spec.zero_sequence().zeros();
  const bool genus1 = spec.genus() == 1;
  for (std::size_t i = 0; i < n; ++i) {
    const cl z(zeros[i].real(), zeros[i].imag());
    acc *= (z - sl) / z;
    if (genus1) acc *= std::exp(sl / z);
  }
  if (genus1) {
    const cl q(spec.q_constant().real(), spec.q_constant().imag());
    acc *= std::exp(q * sl);
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

inline double rel(complex a, complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace fixtures
