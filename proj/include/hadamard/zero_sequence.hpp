#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hadamard/error.hpp"
#include "hadamard/fit.hpp"

namespace hadamard {

using complex = std::complex<double>;

enum class Ordering { by_modulus, as_given };
enum class Pairing { none, conjugate_pairs, symmetric_about_center };
enum class Verdict { pass, fail, indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

inline const char* to_string(Pairing p) {
  switch (p) {
    case Pairing::none: return "none";
    case Pairing::conjugate_pairs: return "conjugate_pairs";
    case Pairing::symmetric_about_center: return "symmetric_about_center";
  }
  return "?";
}

// Sequences shorter than this (in summation groups) are treated as complete
// finite zero sets rather than truncations of an infinite sequence.
inline constexpr std::size_t kMinAsymptoticGroups = 8;
// Slope thresholds around the critical decay exponent -1.
inline constexpr double kSlopeMargin = 0.1;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

// A summation group: a single zero or a pair (zero, partner).
struct ZeroGroup {
  std::size_t first = 0;
  std::size_t second = npos;
  bool paired() const { return second != npos; }
};

// Tail series of a zero sequence for one genus. Each group contributes a
// weight measuring how far its factors can move the product from 1; the
// weight is attributed to the last index of the group.
struct TailModel {
  std::vector<double> suffix;  // suffix[n]: weight of groups not fully retained at truncation n
  double partial_sum = 0.0;    // sum of all available weights
  double extrapolated = 0.0;   // estimated weight beyond the available data; NaN when unknown
  Verdict verdict = Verdict::indeterminate;
  std::optional<LinearFit> fit;  // log weight vs log group index over the last half
  bool finite_set = false;

  // Omitted weight at truncation n, or nullopt if it cannot be estimated.
  std::optional<double> omitted(std::size_t n) const {
    if (verdict != Verdict::pass) return std::nullopt;
    return suffix[std::min(n, suffix.size() - 1)] + extrapolated;
  }
};

// Ordered zero data sigma_k with a pairing hint. Immutable; copies share
// storage.
class ZeroSequence {
 public:
  ZeroSequence() : ZeroSequence(std::vector<complex>{}) {}

  explicit ZeroSequence(std::vector<complex> zeros, Ordering ordering = Ordering::by_modulus,
                        Pairing pairing = Pairing::none, std::string source = "constructed",
                        std::optional<double> center = std::nullopt) {
    if (pairing == Pairing::symmetric_about_center && !center)
      throw Error("symmetric_about_center pairing requires a center");
    auto d = std::make_shared<Data>();
    d->ordering = ordering;
    d->pairing = pairing;
    d->source = std::move(source);
    d->center = center;
    if (ordering == Ordering::by_modulus) sort_by_modulus(zeros);
    d->zeros = std::move(zeros);
    d->partner = match_partners(d->zeros, pairing, center);
    data_ = d;
    d->tails[0] = build_tail(0);
    d->tails[1] = build_tail(1);
  }

  std::span<const complex> zeros() const { return data_->zeros; }
  std::size_t size() const { return data_->zeros.size(); }
  bool empty() const { return data_->zeros.empty(); }
  const complex& operator[](std::size_t i) const { return data_->zeros[i]; }
  Ordering ordering() const { return data_->ordering; }
  Pairing pairing() const { return data_->pairing; }
  const std::string& source() const { return data_->source; }
  std::optional<double> center() const { return data_->center; }

  // Index of the paired zero, or npos.
  std::size_t partner(std::size_t i) const { return data_->partner[i]; }

  // Summation groups over the first n zeros, ordered by first index. A pair
  // whose partner lies beyond n degrades to a singleton.
  std::vector<ZeroGroup> groups(std::size_t n) const {
    n = std::min(n, size());
    std::vector<ZeroGroup> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t p = data_->partner[i];
      if (p == npos || p >= n) {
        out.push_back({i, npos});
      } else if (p > i) {
        out.push_back({i, p});
      }
    }
    return out;
  }

  const TailModel& tail_model(int genus) const { return data_->tails.at(genus == 0 ? 0 : 1); }

  // Sorts by |sigma|, ties broken by Im descending then Re ascending.
  static void sort_by_modulus(std::vector<complex>& z) {
    std::stable_sort(z.begin(), z.end(), [](const complex& a, const complex& b) {
      const double ma = std::abs(a), mb = std::abs(b);
      if (ma != mb) return ma < mb;
      if (a.imag() != b.imag()) return a.imag() > b.imag();
      return a.real() < b.real();
    });
  }

 private:
  struct Data {
    std::vector<complex> zeros;
    std::vector<std::size_t> partner;
    Ordering ordering = Ordering::by_modulus;
    Pairing pairing = Pairing::none;
    std::string source;
    std::optional<double> center;
    std::array<TailModel, 2> tails;
  };

  static std::vector<std::size_t> match_partners(const std::vector<complex>& z, Pairing pairing,
                                                 std::optional<double> center) {
    std::vector<std::size_t> partner(z.size(), npos);
    if (pairing == Pairing::none) return partner;
    using Key = std::pair<double, double>;
    std::map<Key, std::vector<std::size_t>> unmatched;
    for (std::size_t i = 0; i < z.size(); ++i) {
      complex target;
      if (pairing == Pairing::conjugate_pairs) {
        target = std::conj(z[i]);
      } else {
        target = 2.0 * *center - z[i];
      }
      if (target == z[i]) continue;  // self-symmetric: stays a singleton
      auto it = unmatched.find(Key{target.real(), target.imag()});
      if (it != unmatched.end() && !it->second.empty()) {
        const std::size_t j = it->second.front();
        it->second.erase(it->second.begin());
        partner[i] = j;
        partner[j] = i;
      } else {
        unmatched[Key{z[i].real(), z[i].imag()}].push_back(i);
      }
    }
    return partner;
  }

  // Per-group weights (first- and second-order parts folded together):
  //   genus 1:            sum |sigma|^-2
  //   genus 0, singleton: |sigma|^-1
  //   genus 0, pair:      |1/sigma + 1/sigma'| + (|sigma|^-2 + |sigma'|^-2) / 2
  TailModel build_tail(int genus) const {
    const auto& z = data_->zeros;
    TailModel t;
    t.suffix.assign(z.size() + 1, 0.0);
    const auto all = groups(z.size());
    std::vector<double> weights;
    weights.reserve(all.size());
    std::vector<double> at_index(z.size(), 0.0);
    for (const auto& g : all) {
      const complex a = z[g.first];
      double w = 0.0;
      if (a == 0.0 || (g.paired() && z[g.second] == 0.0)) {
        w = std::numeric_limits<double>::infinity();
      } else if (genus == 1) {
        w = 1.0 / std::norm(a);
        if (g.paired()) w += 1.0 / std::norm(z[g.second]);
      } else if (!g.paired()) {
        w = 1.0 / std::abs(a);
      } else {
        const complex b = z[g.second];
        w = std::abs(1.0 / a + 1.0 / b) + 0.5 * (1.0 / std::norm(a) + 1.0 / std::norm(b));
      }
      weights.push_back(w);
      at_index[g.paired() ? std::max(g.first, g.second) : g.first] += w;
    }
    for (std::size_t i = z.size(); i-- > 0;) t.suffix[i] = t.suffix[i + 1] + at_index[i];
    for (double w : weights) t.partial_sum += w;

    if (weights.size() < kMinAsymptoticGroups) {
      t.finite_set = true;
      t.extrapolated = 0.0;
      t.verdict = std::isfinite(t.partial_sum) ? Verdict::pass : Verdict::fail;
      return t;
    }
    std::vector<double> lx, ly;
    for (std::size_t g = weights.size() / 2; g < weights.size(); ++g) {
      if (!(weights[g] > 0.0) || !std::isfinite(weights[g])) continue;
      lx.push_back(std::log(static_cast<double>(g + 1)));
      ly.push_back(std::log(weights[g]));
    }
    t.extrapolated = std::numeric_limits<double>::quiet_NaN();
    if (lx.size() < 2 || lx.front() == lx.back()) return t;
    const LinearFit fit = least_squares(lx, ly);
    t.fit = fit;
    if (fit.slope < -1.0 - kSlopeMargin) {
      t.verdict = Verdict::pass;
      // integral of C x^a from G + 1/2 to infinity
      const double a = fit.slope;
      const double start = static_cast<double>(weights.size()) + 0.5;
      t.extrapolated = std::exp(fit.intercept) * std::pow(start, a + 1.0) / (-a - 1.0);
    } else if (fit.slope > -1.0 + kSlopeMargin) {
      t.verdict = Verdict::fail;
    }
    return t;
  }

  std::shared_ptr<const Data> data_;
};

}  // namespace hadamard
