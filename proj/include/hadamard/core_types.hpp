#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hadamard/error.hpp"
#include "hadamard/fit.hpp"
#include "hadamard/primary_factors.hpp"
#include "hadamard/summation.hpp"
#include "hadamard/zero_sequence.hpp"

namespace hadamard {

// Y: genus 0, L: genus 1, Y_tilde / L_bar: the same with every zero on the
// vertical line Re s = xi.
enum class ClassTag { Y, L, Y_tilde, L_bar };

inline const char* to_string(ClassTag c) {
  switch (c) {
    case ClassTag::Y: return "Y";
    case ClassTag::L: return "L";
    case ClassTag::Y_tilde: return "Y_tilde";
    case ClassTag::L_bar: return "L_bar";
  }
  return "?";
}

inline int genus_of(ClassTag c) { return (c == ClassTag::L || c == ClassTag::L_bar) ? 1 : 0; }
inline bool is_symmetric_class(ClassTag c) { return c == ClassTag::Y_tilde || c == ClassTag::L_bar; }

// Relative distance below which a point counts as sitting on a zero.
inline constexpr double kOnZeroRelative = 1e-12;

class EntireFunctionSpec {
 public:
  EntireFunctionSpec(ClassTag class_tag, complex value_at_zero, complex q_constant,
                     std::optional<double> center_xi, ZeroSequence zeros,
                     std::optional<std::size_t> normalization_terms = std::nullopt)
      : class_tag_(class_tag),
        value_at_zero_(value_at_zero),
        q_(q_constant),
        xi_(center_xi),
        zeros_(std::move(zeros)),
        normalization_terms_(normalization_terms) {
    if (value_at_zero_ == 0.0 || !std::isfinite(value_at_zero_.real()) || !std::isfinite(value_at_zero_.imag()))
      throw Error("value at zero must be finite and nonzero");
    if (genus_of(class_tag_) == 0 && q_ != 0.0)
      throw Error(std::string("class ") + to_string(class_tag_) + " has genus 0 and requires Q = 0");
    for (const auto& z : zeros_.zeros()) {
      if (z == 0.0) throw Error("zero sequence contains sigma = 0");
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error("zero sequence contains a non-finite entry");
    }
    if (is_symmetric_class(class_tag_)) {
      if (!xi_) throw Error(std::string("class ") + to_string(class_tag_) + " requires a center xi");
      if (*xi_ == 0.0 || !std::isfinite(*xi_)) throw Error("center xi must be finite and nonzero");
      const double tol = kOnZeroRelative * std::max(1.0, std::abs(*xi_));
      for (const auto& z : zeros_.zeros()) {
        if (std::abs(z.real() - *xi_) > tol) throw Error("zero off the line Re s = xi violates class");
        if (z.imag() == 0.0) throw Error("zero imaginary part violates class");
      }
    }
  }

  ClassTag class_tag() const { return class_tag_; }
  int genus() const { return genus_of(class_tag_); }
  complex value_at_zero() const { return value_at_zero_; }
  complex q_constant() const { return q_; }
  std::optional<double> center_xi() const { return xi_; }
  const ZeroSequence& zero_sequence() const { return zeros_; }
  std::size_t available_zeros() const { return zeros_.size(); }
  // Truncation used when value_at_zero was derived from a value at the center.
  std::optional<std::size_t> normalization_terms() const { return normalization_terms_; }

 private:
  ClassTag class_tag_;
  complex value_at_zero_;
  complex q_;
  std::optional<double> xi_;
  ZeroSequence zeros_;
  std::optional<std::size_t> normalization_terms_;
};

namespace detail {

struct LogProduct {
  complex log_sum{0.0, 0.0};  // sum of per-factor principal logs
  bool vanished = false;      // an exact zero factor was hit
};

// Sums log-factors over the pairing groups of the first n zeros with the
// deterministic reduction. factor_log(i) returns the log of factor i or
// nullopt when the factor is exactly zero.
template <class FactorLog>
LogProduct accumulate_factor_logs(const ZeroSequence& seq, std::size_t n, FactorLog&& factor_log) {
  const auto groups = seq.groups(n);
  std::atomic<bool> vanished{false};
  const auto sum = deterministic_reduce<complex>(groups.size(), 1, [&](std::size_t g, std::span<complex> out) {
    const auto first = factor_log(groups[g].first);
    std::optional<complex> second = complex{0.0, 0.0};
    if (groups[g].paired()) second = factor_log(groups[g].second);
    if (!first || !second) {
      vanished.store(true, std::memory_order_relaxed);
      out[0] = 0.0;
      return;
    }
    out[0] = *first + *second;
  });
  return {sum[0], vanished.load()};
}

// log of prod_{k<n} H(s / sigma_k, genus), forming 1 - s/sigma as (sigma - s)/sigma.
inline LogProduct canonical_log_product(const ZeroSequence& seq, std::size_t n, complex s, int genus) {
  const auto zeros = seq.zeros();
  return accumulate_factor_logs(seq, n, [&](std::size_t i) -> std::optional<complex> {
    const complex sigma = zeros[i];
    if (s == sigma) return std::nullopt;
    const complex inv = std::conj(sigma) / std::norm(sigma);
    return log_primary(s * inv, (sigma - s) * inv, genus);
  });
}

inline double nearest_zero_distance(const ZeroSequence& seq, std::size_t n, complex s) {
  double best = std::numeric_limits<double>::infinity();
  const auto zeros = seq.zeros();
  for (std::size_t i = 0; i < std::min(n, zeros.size()); ++i) best = std::min(best, std::abs(s - zeros[i]));
  return best;
}

// Index of a retained zero within kOnZeroRelative of s, if any.
inline std::optional<std::size_t> zero_at(const ZeroSequence& seq, std::size_t n, complex s) {
  const auto zeros = seq.zeros();
  for (std::size_t i = 0; i < std::min(n, zeros.size()); ++i) {
    if (std::abs(s - zeros[i]) <= kOnZeroRelative * std::abs(zeros[i])) return i;
  }
  return std::nullopt;
}

}  // namespace detail

struct ValidationCheck {
  std::string name;
  Verdict verdict = Verdict::indeterminate;
  double measured = 0.0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  Verdict overall = Verdict::indeterminate;

  const ValidationCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Checks the conditions a zero sequence must meet for a canonical product
/// of the given genus: nonzero entries, modulus ordering, pairing
/// consistency, convergence of sum |sigma|^-(genus+1) (paired weights for
/// genus 0 with a pairing) and growth of |sigma_k| to infinity. Asymptotic
/// checks are three-valued on finite data.
inline ValidationReport validate_zero_sequence(const ZeroSequence& seq, int genus) {
  if (seq.empty()) throw Error("empty zero set");
  if (genus != 0 && genus != 1) throw Error("genus must be 0 or 1");
  const auto z = seq.zeros();
  ValidationReport report;

  std::size_t zero_count = 0;
  for (const auto& s : z)
    if (s == 0.0) ++zero_count;
  report.checks.push_back({"nonzero", zero_count == 0 ? Verdict::pass : Verdict::fail, double(zero_count)});

  std::size_t inversions = 0;
  for (std::size_t i = 1; i < z.size(); ++i)
    if (std::abs(z[i]) < std::abs(z[i - 1])) ++inversions;
  const bool ordering_required = seq.ordering() == Ordering::by_modulus;
  report.checks.push_back(
      {"modulus_ordering", (!ordering_required || inversions == 0) ? Verdict::pass : Verdict::fail, double(inversions)});

  if (seq.pairing() != Pairing::none) {
    std::size_t unmatched = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (seq.partner(i) != npos) continue;
      const complex target = seq.pairing() == Pairing::conjugate_pairs ? std::conj(z[i]) : 2.0 * *seq.center() - z[i];
      if (target != z[i]) ++unmatched;
    }
    report.checks.push_back({"pairing", unmatched == 0 ? Verdict::pass : Verdict::fail, double(unmatched)});
  }

  const TailModel& tail = seq.tail_model(genus);
  report.checks.push_back({"convergence_series", zero_count ? Verdict::fail : tail.verdict, tail.partial_sum});

  // |sigma_k| -> infinity: slope of log|sigma_k| against log k.
  ValidationCheck growth{"divergence_to_infinity", Verdict::indeterminate, 0.0};
  if (tail.finite_set) {
    growth.verdict = Verdict::pass;
  } else {
    std::vector<double> lx, ly;
    for (std::size_t i = z.size() / 2; i < z.size(); ++i) {
      if (z[i] == 0.0) continue;
      lx.push_back(std::log(static_cast<double>(i + 1)));
      ly.push_back(std::log(std::abs(z[i])));
    }
    if (lx.size() >= 2) {
      const auto fit = least_squares(lx, ly);
      growth.measured = fit.slope;
      if (fit.slope > kSlopeMargin) growth.verdict = Verdict::pass;
      else if (fit.slope < -kSlopeMargin) growth.verdict = Verdict::fail;
    }
  }
  report.checks.push_back(growth);

  report.overall = Verdict::pass;
  for (const auto& c : report.checks) {
    if (c.verdict == Verdict::fail) {
      report.overall = Verdict::fail;
      break;
    }
    if (c.verdict == Verdict::indeterminate) report.overall = Verdict::indeterminate;
  }
  return report;
}

namespace detail {

inline bool sign_symmetric(std::vector<double> taus) {
  std::vector<double> negated(taus.size());
  std::transform(taus.begin(), taus.end(), negated.begin(), [](double t) { return -t; });
  std::sort(taus.begin(), taus.end());
  std::sort(negated.begin(), negated.end());
  return taus == negated;
}

}  // namespace detail

/// Builds a Y_tilde or L_bar spec with zeros xi + i tau_k. S(0) is recovered
/// from the value at the center by dividing out the truncated product
/// S(xi) / S(0) = e^{Q xi} prod H(xi / sigma_k, genus) over every zero.
inline EntireFunctionSpec make_symmetric_spec(double xi, const std::vector<double>& taus, complex value_at_center,
                                              ClassTag class_tag, complex q = 0.0) {
  if (!is_symmetric_class(class_tag)) throw Error("make_symmetric_spec: class must be Y_tilde or L_bar");
  if (xi == 0.0 || !std::isfinite(xi)) throw Error("center xi must be finite and nonzero");
  if (value_at_center == 0.0) throw Error("value at the center must be nonzero");
  const int genus = genus_of(class_tag);
  if (genus == 0 && q != 0.0) throw Error("class Y_tilde has genus 0 and requires Q = 0");
  std::vector<complex> zeros;
  zeros.reserve(taus.size());
  for (double t : taus) {
    if (t == 0.0) throw Error("zero imaginary part violates class");
    if (!std::isfinite(t)) throw Error("non-finite tau");
    zeros.emplace_back(xi, t);
  }
  const Pairing pairing = detail::sign_symmetric(taus) ? Pairing::symmetric_about_center : Pairing::none;
  ZeroSequence seq(std::move(zeros), Ordering::by_modulus, pairing, "constructed", xi);
  const auto lp = detail::canonical_log_product(seq, seq.size(), complex{xi, 0.0}, genus);
  if (lp.vanished) throw Error("center xi is a zero");
  const complex log_ratio = lp.log_sum + q * xi;
  const complex value_at_zero = value_at_center * std::exp(-log_ratio);
  const std::size_t used = seq.size();
  return EntireFunctionSpec(class_tag, value_at_zero, q, xi, std::move(seq), used);
}

}  // namespace hadamard
