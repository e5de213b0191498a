#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "hadamard/core_types.hpp"
#include "hadamard/error.hpp"
#include "hadamard/product_engine.hpp"
#include "hadamard/summation.hpp"

namespace hadamard {

// p_m = sum_k (sigma_k - center)^{-m}, m = 1..M.
struct PowerSums {
  complex center;
  std::vector<complex> values;  // values[m - 1] = p_m
  std::size_t terms_used = 0;
  // p_1 of a genus-1 spec only converges conditionally (paired-sum value).
  bool first_conditionally_convergent = false;

  complex operator()(std::size_t m) const { return values.at(m - 1); }
};

// Taylor coefficients c_k = S^{(k)}(center) / k!.
struct TaylorExpansion {
  complex center;
  std::vector<complex> coefficients;
  std::size_t terms_used = 0;
  int genus = 0;
};

inline PowerSums power_sums(const EntireFunctionSpec& spec, complex center, std::size_t m_max, std::size_t n_terms) {
  if (m_max < 1) throw Error("power_sums: m_max must be at least 1");
  detail::check_truncation(spec, n_terms);
  const auto& seq = spec.zero_sequence();
  if (detail::zero_at(seq, n_terms, center)) throw Error("power sum center is a zero");
  const auto zeros = seq.zeros();
  const auto groups = seq.groups(n_terms);
  auto sums = deterministic_reduce<complex>(groups.size(), m_max, [&](std::size_t g, std::span<complex> out) {
    std::fill(out.begin(), out.end(), complex{0.0, 0.0});
    for (std::size_t idx : {groups[g].first, groups[g].second}) {
      if (idx == npos) continue;
      const complex r = 1.0 / (zeros[idx] - center);
      complex power = r;
      for (std::size_t m = 0; m < m_max; ++m) {
        out[m] += power;
        power *= r;
      }
    }
  });
  return {center, std::move(sums), n_terms, spec.genus() == 1};
}

/// Taylor coefficients about `center` from the zero data. With
///   log S(center + u) - log S(center) = sum_m g_m u^m,
///   g_1 = -p_1 (genus 0),  g_1 = Q + sum (1/sigma_k - 1/(sigma_k - center)) (genus 1),
///   g_m = -p_m / m (m >= 2),
/// the coefficients follow from n c_n = sum_{m=1..n} m g_m c_{n-m}.
inline TaylorExpansion taylor_coefficients(const EntireFunctionSpec& spec, complex center, std::size_t k_max,
                                           std::size_t n_terms) {
  detail::check_truncation(spec, n_terms);
  const auto& seq = spec.zero_sequence();
  if (detail::zero_at(seq, n_terms, center)) throw Error("Taylor center is a zero");
  const complex c0 = eval_product(spec, center, n_terms).value;
  if (c0 == 0.0) throw Error("Taylor center is a zero");

  TaylorExpansion out;
  out.center = center;
  out.terms_used = n_terms;
  out.genus = spec.genus();
  out.coefficients.assign(k_max + 1, complex{0.0, 0.0});
  out.coefficients[0] = c0;
  if (k_max == 0) return out;

  const PowerSums p = power_sums(spec, center, k_max, n_terms);
  std::vector<complex> g(k_max + 1, complex{0.0, 0.0});
  for (std::size_t m = 1; m <= k_max; ++m) g[m] = -p(m) / static_cast<double>(m);
  if (spec.genus() == 1) {
    // 1/sigma - 1/(sigma - c) = -c / (sigma (sigma - c)): absolutely convergent
    const auto zeros = seq.zeros();
    const auto groups = seq.groups(n_terms);
    auto term = [&](std::size_t i) { return -center / (zeros[i] * (zeros[i] - center)); };
    const auto sum = deterministic_reduce<complex>(groups.size(), 1, [&](std::size_t gi, std::span<complex> o) {
      o[0] = term(groups[gi].first) + (groups[gi].paired() ? term(groups[gi].second) : complex{0.0, 0.0});
    });
    g[1] = spec.q_constant() + sum[0];
  }

  // ratios a_n = c_n / c_0
  std::vector<complex> a(k_max + 1, complex{0.0, 0.0});
  a[0] = 1.0;
  for (std::size_t n = 1; n <= k_max; ++n) {
    complex acc = 0.0;
    for (std::size_t m = 1; m <= n; ++m) acc += static_cast<double>(m) * g[m] * a[n - m];
    a[n] = acc / static_cast<double>(n);
    out.coefficients[n] = c0 * a[n];
  }
  return out;
}

/// Horner evaluation of sum c_k (s - center)^k.
inline complex eval_series(const TaylorExpansion& exp, complex s) {
  const complex u = s - exp.center;
  complex acc = 0.0;
  for (auto it = exp.coefficients.rbegin(); it != exp.coefficients.rend(); ++it) acc = acc * u + *it;
  return acc;
}

inline constexpr double kOddCoefficientTolerance = 1e-8;

struct EvenSeries {
  TaylorExpansion expansion;          // odd coefficients forced to 0
  std::vector<double> odd_magnitudes; // |c_k| before forcing, k = 1, 3, 5, ...
  double max_even = 0.0;
};

/// Expansion of a Y_tilde spec about xi with odd coefficients forced to zero,
/// after checking that each measured odd coefficient is below
/// kOddCoefficientTolerance * max |c_even|. The retained tau list must be
/// sign-symmetric.
inline EvenSeries even_series(const EntireFunctionSpec& spec, std::size_t k_max, std::size_t n_terms) {
  if (spec.class_tag() != ClassTag::Y_tilde) throw Error("even series requires a Y_tilde spec");
  detail::check_truncation(spec, n_terms);
  const auto zeros = spec.zero_sequence().zeros();
  std::vector<double> taus;
  taus.reserve(n_terms);
  for (std::size_t i = 0; i < n_terms; ++i) taus.push_back(zeros[i].imag());
  if (!detail::sign_symmetric(taus)) throw Error("symmetry hypothesis violated");

  EvenSeries out;
  out.expansion = taylor_coefficients(spec, complex{*spec.center_xi(), 0.0}, k_max, n_terms);
  auto& c = out.expansion.coefficients;
  for (std::size_t k = 0; k < c.size(); k += 2) out.max_even = std::max(out.max_even, std::abs(c[k]));
  for (std::size_t k = 1; k < c.size(); k += 2) {
    const double m = std::abs(c[k]);
    out.odd_magnitudes.push_back(m);
    if (m > kOddCoefficientTolerance * out.max_even)
      throw Error("odd residual too large at k = " + std::to_string(k));
    c[k] = 0.0;
  }
  return out;
}

}  // namespace hadamard
