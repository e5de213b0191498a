#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include "hadamard/core_types.hpp"
#include "hadamard/error.hpp"
#include "hadamard/primary_factors.hpp"
#include "hadamard/summation.hpp"

namespace hadamard {

// A truncated product value with its truncation metadata.
struct TruncatedEvaluation {
  complex value;
  std::size_t terms_used = 0;
  std::optional<double> tail_bound;  // relative modulus error estimate; nullopt = indeterminate
  double nearest_zero_distance = 0.0;
  bool near_zero = false;
};

inline constexpr double kNearZeroRelative = 1e-9;

namespace detail {

inline void check_truncation(const EntireFunctionSpec& spec, std::size_t n_terms) {
  if (n_terms > spec.available_zeros())
    throw Error("insufficient zeros: requested " + std::to_string(n_terms) + ", available " +
                std::to_string(spec.available_zeros()));
}

// exp(w * T) - 1 with w = |s|^{genus+1}; paired genus-0 groups carry a
// first-order part as well, so they use max(|s|, |s|^2).
inline std::optional<double> tail_bound(const EntireFunctionSpec& spec, complex s, std::size_t n) {
  const auto& seq = spec.zero_sequence();
  const auto omitted = seq.tail_model(spec.genus()).omitted(n);
  if (!omitted) return std::nullopt;
  const double r = std::abs(s);
  double scale = r * r;
  if (spec.genus() == 0) scale = seq.pairing() == Pairing::none ? r : std::max(r, r * r);
  return std::expm1(scale * *omitted);
}

// log S(s) = log S(0) + Q s + sum log H(s / sigma_k, genus)
inline LogProduct log_product(const EntireFunctionSpec& spec, complex s, std::size_t n) {
  auto lp = canonical_log_product(spec.zero_sequence(), n, s, spec.genus());
  lp.log_sum += std::log(spec.value_at_zero()) + spec.q_constant() * s;
  return lp;
}

inline TruncatedEvaluation finish(const EntireFunctionSpec& spec, complex s, std::size_t n, complex value) {
  TruncatedEvaluation ev;
  ev.value = value;
  ev.terms_used = n;
  ev.tail_bound = tail_bound(spec, s, n);
  ev.nearest_zero_distance = nearest_zero_distance(spec.zero_sequence(), n, s);
  ev.near_zero = ev.nearest_zero_distance < kNearZeroRelative * (1.0 + std::abs(s));
  return ev;
}

inline void check_shift_point(const EntireFunctionSpec& spec, complex alpha, std::size_t n) {
  if (alpha == 0.0) throw Error("shift point must be nonzero");
  if (zero_at(spec.zero_sequence(), n, alpha)) throw Error("shift point is a zero");
}

}  // namespace detail

/// Truncated Weierstrass-Hadamard product over the first n_terms zeros:
///   genus 0: S(0) prod (1 - s/sigma_k)
///   genus 1: S(0) e^{Q s} prod (1 - s/sigma_k) e^{s/sigma_k}
/// Per-factor logs are summed in pairing-group order and re-exponentiated;
/// an exact zero factor short-circuits to 0.
inline TruncatedEvaluation eval_product(const EntireFunctionSpec& spec, complex s, std::size_t n_terms) {
  detail::check_truncation(spec, n_terms);
  const auto lp = detail::log_product(spec, s, n_terms);
  return detail::finish(spec, s, n_terms, lp.vanished ? complex{0.0, 0.0} : std::exp(lp.log_sum));
}

/// The product re-centered at alpha:
///   S(alpha) e^{Q(s-alpha)} prod (1 - (s-alpha)/(sigma_k-alpha)) e^{(s-alpha)/sigma_k}   (genus 1)
///   S(alpha) prod (1 - (s-alpha)/(sigma_k-alpha))                                       (genus 0)
/// with S(alpha) from eval_product at the same truncation.
inline TruncatedEvaluation eval_shifted_product(const EntireFunctionSpec& spec, complex alpha, complex s,
                                                std::size_t n_terms) {
  detail::check_truncation(spec, n_terms);
  detail::check_shift_point(spec, alpha, n_terms);
  const complex s_alpha = eval_product(spec, alpha, n_terms).value;
  if (s_alpha == 0.0) throw Error("shift point is a zero");
  const int genus = spec.genus();
  const complex u = s - alpha;
  const auto zeros = spec.zero_sequence().zeros();
  const auto lp = detail::accumulate_factor_logs(spec.zero_sequence(), n_terms, [&](std::size_t i) -> std::optional<complex> {
    const complex sigma = zeros[i];
    if (s == sigma) return std::nullopt;
    const complex d = sigma - alpha;
    const complex w = u / d;
    const auto lh = detail::log_primary(w, (sigma - s) / d, genus);
    if (!lh) return std::nullopt;
    // log H(w, 1) carries e^{w}; the shifted form wants e^{(s-alpha)/sigma}.
    return genus == 1 ? *lh + (u / sigma - w) : *lh;
  });
  const complex value = lp.vanished ? complex{0.0, 0.0} : s_alpha * std::exp(spec.q_constant() * u + lp.log_sum);
  return detail::finish(spec, s, n_terms, value);
}

/// Residual of the constant matching identity behind the shift:
///   genus 1: S(0) prod (1 - alpha/sigma_k)  vs  S(alpha) e^{-Q alpha} prod e^{-alpha/sigma_k}
///   genus 0: S(0) prod (1 - alpha/sigma_k)  vs  S(alpha)
/// Returns |L - R| / (|L| + |R|). S(alpha) defaults to eval_product at the
/// same truncation; pass it explicitly to compare against a closed form.
inline double shift_constant_residual(const EntireFunctionSpec& spec, complex alpha, std::size_t n_terms,
                                      std::optional<complex> s_alpha = std::nullopt) {
  detail::check_truncation(spec, n_terms);
  detail::check_shift_point(spec, alpha, n_terms);
  const auto& seq = spec.zero_sequence();
  const auto plain = detail::canonical_log_product(seq, n_terms, alpha, 0);
  if (plain.vanished) throw Error("shift point is a zero");
  const complex lhs = spec.value_at_zero() * std::exp(plain.log_sum);
  const complex at_alpha = s_alpha ? *s_alpha : eval_product(spec, alpha, n_terms).value;
  complex rhs = at_alpha;
  if (spec.genus() == 1) {
    const auto zeros = seq.zeros();
    const auto exps = detail::accumulate_factor_logs(seq, n_terms, [&](std::size_t i) -> std::optional<complex> {
      return -alpha / zeros[i];
    });
    rhs = at_alpha * std::exp(-spec.q_constant() * alpha + exps.log_sum);
  }
  const double denom = std::abs(lhs) + std::abs(rhs);
  return denom == 0.0 ? 0.0 : std::abs(lhs - rhs) / denom;
}

/// Truncated S'(s)/S(s):  sum 1/(s - sigma_k)  (genus 0),
/// Q + sum s / (sigma_k (s - sigma_k))  (genus 1, the two terms combined).
inline complex log_derivative(const EntireFunctionSpec& spec, complex s, std::size_t n_terms) {
  detail::check_truncation(spec, n_terms);
  const auto& seq = spec.zero_sequence();
  if (detail::zero_at(seq, n_terms, s) || detail::nearest_zero_distance(seq, n_terms, s) == 0.0)
    throw Error("pole of logarithmic derivative");
  const auto zeros = seq.zeros();
  const auto groups = seq.groups(n_terms);
  const bool genus1 = spec.genus() == 1;
  auto term = [&](std::size_t i) {
    const complex sigma = zeros[i];
    return genus1 ? s / (sigma * (s - sigma)) : 1.0 / (s - sigma);
  };
  const auto sum = deterministic_reduce<complex>(groups.size(), 1, [&](std::size_t g, std::span<complex> out) {
    out[0] = term(groups[g].first) + (groups[g].paired() ? term(groups[g].second) : complex{0.0, 0.0});
  });
  return (genus1 ? spec.q_constant() : complex{0.0, 0.0}) + sum[0];
}

/// Product centered on the line for Y_tilde / L_bar specs:
///   S(xi) e^{Q(s-xi)} prod (1 - (s-xi)/(i tau_k)) e^{(s-xi)/sigma_k}
/// (no exponential factors for genus 0). Factors use i tau_k directly
/// rather than sigma_k - xi.
inline TruncatedEvaluation eval_centered_product(const EntireFunctionSpec& spec, complex s, std::size_t n_terms) {
  if (!is_symmetric_class(spec.class_tag()))
    throw Error("centered product requires a symmetric-class spec");
  detail::check_truncation(spec, n_terms);
  const double xi = *spec.center_xi();
  const complex s_xi = eval_product(spec, complex{xi, 0.0}, n_terms).value;
  if (s_xi == 0.0) throw Error("center xi is a zero");
  const int genus = spec.genus();
  const complex u = s - xi;
  const auto zeros = spec.zero_sequence().zeros();
  const auto lp = detail::accumulate_factor_logs(spec.zero_sequence(), n_terms, [&](std::size_t i) -> std::optional<complex> {
    const complex it{0.0, zeros[i].imag()};
    const complex w = u / it;
    const auto lh = detail::log_primary(w, (it - u) / it, genus);
    if (!lh) return std::nullopt;
    return genus == 1 ? *lh + (u / zeros[i] - w) : *lh;
  });
  const complex value = lp.vanished ? complex{0.0, 0.0} : s_xi * std::exp(spec.q_constant() * u + lp.log_sum);
  return detail::finish(spec, s, n_terms, value);
}

/// |e^{Q(s-xi)} prod e^{(s-xi)/sigma_k} - 1|: how far the data is from the
/// assumption that lets a genus-1 product drop its exponential factors.
inline double exponential_prefactor_residual(const EntireFunctionSpec& spec, complex s, std::size_t n_terms) {
  if (!spec.center_xi()) throw Error("exponential prefactor residual requires a center xi");
  detail::check_truncation(spec, n_terms);
  const complex u = s - *spec.center_xi();
  const auto zeros = spec.zero_sequence().zeros();
  const auto lp = detail::accumulate_factor_logs(spec.zero_sequence(), n_terms, [&](std::size_t i) -> std::optional<complex> {
    return u / zeros[i];
  });
  return std::abs(std::exp(spec.q_constant() * u + lp.log_sum) - 1.0);
}

}  // namespace hadamard
