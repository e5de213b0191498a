#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "hadamard/product_engine.hpp"

namespace {

using fixtures::pi;
using hadamard::ClassTag;
using hadamard::complex;
using hadamard::eval_product;
using hadamard::eval_shifted_product;

struct ThreadCap {
  unsigned saved = hadamard::max_threads();
  explicit ThreadCap(unsigned n) { hadamard::set_max_threads(n); }
  ~ThreadCap() { hadamard::set_max_threads(saved); }
};

// ---- eval_product ----------------------------------------------------------------

TEST(EvalProduct, EmptyProductIsValueAtZero) {
  const auto spec = fixtures::from_zeros({}, ClassTag::Y, complex(2.0, -1.0));
  const auto ev = eval_product(spec, complex(3.0, 4.0), 0);
  EXPECT_EQ(ev.value, complex(2.0, -1.0));
  EXPECT_EQ(ev.terms_used, 0u);
  const auto cubic = fixtures::cubic();
  EXPECT_LE(std::abs(eval_product(cubic, complex(0.7, 0.2), 0).value - 1.0), 1e-15);
}

TEST(EvalProduct, SinhAtOne) {
  const auto spec = fixtures::sinh_origin(1000);
  const auto ev = eval_product(spec, 1.0, 2000);
  const double oracle = std::sinh(pi) / pi;
  EXPECT_NEAR(oracle, 3.6760779103749777, 1e-14);
  EXPECT_LE(std::abs(ev.value - oracle) / oracle, 1e-3);
  EXPECT_EQ(ev.terms_used, 2000u);
  EXPECT_FALSE(ev.near_zero);
}

TEST(EvalProduct, VanishesAtRetainedZero) {
  const auto spec = fixtures::sinh_origin(1000);
  const auto ev = eval_product(spec, complex(0.0, 1.0), 2000);
  EXPECT_EQ(ev.value, complex(0.0, 0.0));
  EXPECT_TRUE(ev.near_zero);
  EXPECT_EQ(ev.nearest_zero_distance, 0.0);
}

TEST(EvalProduct, NearZeroFlagThreshold) {
  const auto spec = fixtures::cubic();
  EXPECT_TRUE(eval_product(spec, 2.0 + 1e-10, 3).near_zero);
  EXPECT_FALSE(eval_product(spec, 2.0 + 1e-6, 3).near_zero);
}

TEST(EvalProduct, InsufficientZeros) {
  const auto spec = fixtures::cubic();
  try {
    eval_product(spec, 0.5, 4);
    FAIL();
  } catch (const hadamard::Error& e) {
    EXPECT_NE(std::string(e.what()).find("insufficient zeros"), std::string::npos);
  }
}

TEST(EvalProduct, MatchesBruteForceOnPolynomial) {
  const auto spec = fixtures::cubic();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const complex s(u(rng), u(rng));
    const complex oracle = (1.0 - s / 2.0) * (1.0 - s / complex(1, 1)) * (1.0 - s / complex(1, -1));
    EXPECT_LE(std::abs(eval_product(spec, s, 3).value - oracle), 1e-13 * (1.0 + std::abs(oracle)));
  }
}

TEST(EvalProduct, MatchesBruteForceOnAllClasses) {
  std::vector<hadamard::EntireFunctionSpec> specs{fixtures::sinh_line(300), fixtures::sinh_line_genus1(300),
                                                  fixtures::sinh_origin(300), fixtures::sinh_origin(300, ClassTag::Y),
                                                  fixtures::from_zeros({{2, 1}, {-1, 3}, {0.5, -2}}, ClassTag::L,
                                                                       complex(1, 1), complex(0.25, -0.5))};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto& spec : specs) {
    const std::size_t n = spec.available_zeros();
    for (int i = 0; i < 50; ++i) {
      const complex s(u(rng), u(rng));
      const complex oracle = fixtures::direct_product(spec, s, n);
      EXPECT_LE(std::abs(eval_product(spec, s, n).value - oracle), 1e-11 * std::abs(oracle))
          << to_string(spec.class_tag()) << " s=" << s;
    }
  }
}

TEST(EvalProduct, ErrorDecreasesWithTruncation) {
  // each fixture holds exactly K pairs so its normalization matches the closed form
  std::vector<complex> pts;
  for (int j = 0; j < 25; ++j) pts.push_back(1.0 + std::polar(2.0 * (j % 5 + 1) / 5.0, 2 * pi * j / 25.0));
  std::vector<double> worst;
  for (std::size_t k : {50u, 500u, 5000u}) {
    const auto spec = fixtures::sinh_line(k);
    double w = 0.0;
    for (const auto& s : pts)
      w = std::max(w, fixtures::rel(eval_product(spec, s, spec.available_zeros()).value, fixtures::sinhc(s - 1.0)));
    worst.push_back(w);
  }
  EXPECT_GT(worst[0], worst[1]);
  EXPECT_GT(worst[1], worst[2]);
  EXPECT_LE(worst[2], 1e-3);
}

TEST(EvalProduct, TailBoundCoversOmittedFactors) {
  const auto spec = fixtures::sinh_origin(20000);
  for (std::size_t n : {200u, 2000u, 20000u}) {
    for (const complex s : {complex(1.0, 0.0), complex(0.5, 0.7), complex(-1.5, 0.3)}) {
      const auto ev = eval_product(spec, s, n);
      ASSERT_TRUE(ev.tail_bound.has_value());
      const double actual = std::abs(std::abs(ev.value) / std::abs(fixtures::sinhc(s)) - 1.0);
      EXPECT_LE(actual, *ev.tail_bound) << "n=" << n << " s=" << s;
    }
  }
  const auto g1 = fixtures::sinh_origin(20000, ClassTag::L);
  const auto ev = eval_product(g1, 1.0, 2000);
  ASSERT_TRUE(ev.tail_bound.has_value());
  EXPECT_LE(std::abs(std::abs(ev.value) / (std::sinh(pi) / pi) - 1.0), *ev.tail_bound);
}

TEST(EvalProduct, TailBoundIndeterminateForSlowDecay) {
  // unpaired genus-0 weights |sigma|^-1 ~ 1/k sit on the slope boundary
  std::vector<complex> z;
  for (int k = 1; k <= 2000; ++k) z.emplace_back(0.0, double(k));
  const auto spec = fixtures::from_zeros(z);
  EXPECT_FALSE(eval_product(spec, 0.5, 1000).tail_bound.has_value());
}

TEST(EvalProduct, BitIdenticalAcrossThreadCounts) {
  const auto spec = fixtures::sinh_line(50000);
  const complex s(1.3, 0.4);
  complex ref;
  {
    ThreadCap cap(1);
    ref = eval_product(spec, s, spec.available_zeros()).value;
  }
  for (unsigned t : {2u, 4u, 9u}) {
    ThreadCap cap(t);
    const complex v = eval_product(spec, s, spec.available_zeros()).value;
    EXPECT_EQ(v.real(), ref.real());
    EXPECT_EQ(v.imag(), ref.imag());
  }
}

// ---- eval_shifted_product ------------------------------------------------------

TEST(Shifted, AtAlphaEqualsDirectValue) {
  const auto spec = fixtures::sinh_origin(1000);
  for (const complex a : {complex(0.3, 0.0), complex(-0.2, 0.5)}) {
    EXPECT_EQ(eval_shifted_product(spec, a, a, 2000).value, eval_product(spec, a, 2000).value);
  }
}

TEST(Shifted, MatchesUnshiftedOnSinh) {
  const auto spec = fixtures::sinh_origin(1000);
  const complex shifted = eval_shifted_product(spec, 0.3, 1.0, 2000).value;
  const complex direct = eval_product(spec, 1.0, 2000).value;
  EXPECT_LE(fixtures::rel(shifted, direct), 1e-6);
}

TEST(Shifted, GenusZeroAtCenterEqualsLineForm) {
  const auto spec = fixtures::sinh_line(1000);
  const complex s(1.0, 0.5);
  const complex shifted = eval_shifted_product(spec, 1.0, s, 2000).value;
  // S(xi) prod (1 - (s - xi)/(i tau_k)), brute force
  std::complex<long double> acc(eval_product(spec, 1.0, 2000).value);
  const std::complex<long double> u(s.real() - 1.0, s.imag());
  for (const auto& z : spec.zero_sequence().zeros()) acc *= 1.0L - u / std::complex<long double>(0.0L, z.imag());
  const complex oracle(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
  EXPECT_LE(fixtures::rel(shifted, oracle), 1e-12);
  EXPECT_LE(fixtures::rel(hadamard::eval_centered_product(spec, s, 2000).value, oracle), 1e-12);
}

TEST(Shifted, RandomPairsAgreeWithDirectProduct) {
  const auto spec = fixtures::sinh_line(5000);
  const std::size_t n = spec.available_zeros();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto draw = [&] {
    while (true) {
      const complex p(1.0 + 2.0 * u(rng), 2.0 * u(rng));
      if (std::abs(p - 1.0) <= 2.0 && hadamard::detail::nearest_zero_distance(spec.zero_sequence(), n, p) > 1e-3)
        return p;
    }
  };
  for (int i = 0; i < 100; ++i) {
    const complex s = draw(), a = draw();
    const complex direct = eval_product(spec, s, n).value;
    EXPECT_LE(std::abs(eval_shifted_product(spec, a, s, n).value - direct) / (1.0 + std::abs(direct)), 1e-6);
  }
}

TEST(Shifted, VanishesAtRetainedZeros) {
  for (const auto& spec : {fixtures::sinh_line(100), fixtures::sinh_line_genus1(100)}) {
    for (std::size_t i = 0; i < 10; ++i)
      EXPECT_EQ(eval_shifted_product(spec, complex(1.2, 0.3), spec.zero_sequence()[i], 200).value, complex(0.0, 0.0));
  }
}

TEST(Shifted, Preconditions) {
  const auto spec = fixtures::sinh_origin(100);
  EXPECT_THROW(eval_shifted_product(spec, 0.0, 1.0, 200), hadamard::Error);
  try {
    eval_shifted_product(spec, complex(0.0, 3.0), 1.0, 200);
    FAIL();
  } catch (const hadamard::Error& e) {
    EXPECT_NE(std::string(e.what()).find("shift point is a zero"), std::string::npos);
  }
}

// ---- shift_constant_residual -----------------------------------------------------

TEST(ShiftConstant, AlgebraicOnSameData) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& spec : {fixtures::sinh_origin(2000), fixtures::sinh_origin(2000, ClassTag::Y),
                           fixtures::sinh_line_genus1(2000), fixtures::cubic()}) {
    for (int i = 0; i < 20; ++i) {
      const complex a(u(rng), u(rng));
      EXPECT_LT(hadamard::shift_constant_residual(spec, a, spec.available_zeros()), 1e-10);
    }
  }
}

TEST(ShiftConstant, DecreasesAgainstClosedForm) {
  const auto spec = fixtures::sinh_origin(1000, ClassTag::L);
  const complex closed = std::sinh(pi * 0.5) / (pi * 0.5);
  const double r100 = hadamard::shift_constant_residual(spec, 0.5, 100, closed);
  const double r1000 = hadamard::shift_constant_residual(spec, 0.5, 1000, closed);
  EXPECT_GT(r100, r1000);
}

TEST(ShiftConstant, Preconditions) {
  const auto spec = fixtures::cubic();
  EXPECT_THROW(hadamard::shift_constant_residual(spec, 2.0, 3), hadamard::Error);
  EXPECT_THROW(hadamard::shift_constant_residual(spec, 0.0, 3), hadamard::Error);
}

// ---- log_derivative --------------------------------------------------------------

TEST(LogDerivative, SymmetricCancellationAtOrigin) {
  const auto spec = fixtures::sinh_origin(1000, ClassTag::L);
  EXPECT_LE(std::abs(hadamard::log_derivative(spec, 0.0, 2000)), 1e-15);
}

TEST(LogDerivative, SinhClosedForm) {
  // d/ds log(sinh(pi s)/(pi s)) = pi coth(pi s) - 1/s
  const double oracle = pi / std::tanh(pi / 2) - 2.0;
  EXPECT_NEAR(oracle, 1.4253771499192955, 1e-14);
  for (const auto tag : {ClassTag::L, ClassTag::Y}) {
    const auto spec = fixtures::sinh_origin(10000, tag);
    // omitted terms: sum_{k>K} 2 s/(s^2 + k^2) ~ 1/K
    EXPECT_NEAR(hadamard::log_derivative(spec, 0.5, 20000).real(), oracle, 1.5e-4);
  }
}

TEST(LogDerivative, SingleZero) {
  const auto spec = fixtures::from_zeros({2.0});
  EXPECT_LE(std::abs(hadamard::log_derivative(spec, 1.0, 1) - (-1.0)), 1e-15);
}

TEST(LogDerivative, PoleIsAnError) {
  const auto spec = fixtures::cubic();
  EXPECT_THROW(hadamard::log_derivative(spec, 2.0, 3), hadamard::Error);
}

TEST(LogDerivative, MatchesFiniteDifference) {
  const auto spec = fixtures::from_zeros({{2, 1}, {-1, 3}, {0.5, -2}}, ClassTag::L, complex(1, 1), complex(0.25, -0.5));
  const complex s(0.3, 0.2);
  const double h = 1e-5;
  const complex fd = (eval_product(spec, s + h, 3).value - eval_product(spec, s - h, 3).value) / (2 * h);
  EXPECT_LE(std::abs(hadamard::log_derivative(spec, s, 3) - fd / eval_product(spec, s, 3).value), 1e-8);
}

// ---- centered product and exponential prefactor -------------------------------------

TEST(Centered, RequiresSymmetricClass) {
  EXPECT_THROW(hadamard::eval_centered_product(fixtures::cubic(), 0.5, 3), hadamard::Error);
}

TEST(Centered, GenusOneMatchesDirect) {
  const auto spec = fixtures::sinh_line_genus1(1000);
  for (const complex s : {complex(1.5, 0.2), complex(-0.3, 1.7), complex(2.5, -0.5)}) {
    const complex direct = eval_product(spec, s, 2000).value;
    EXPECT_LE(fixtures::rel(hadamard::eval_centered_product(spec, s, 2000).value, direct), 1e-12);
  }
}

TEST(ExponentialPrefactor, VanishesWhenQCancelsTheSum) {
  const auto spec = fixtures::sinh_line_genus1(1000);
  EXPECT_LE(hadamard::exponential_prefactor_residual(spec, complex(1.7, 0.4), 2000), 1e-12);
  const auto plain = hadamard::make_symmetric_spec(1.0, fixtures::pm_integers(1000), 1.0, ClassTag::L_bar);
  EXPECT_GT(hadamard::exponential_prefactor_residual(plain, complex(1.7, 0.4), 2000), 0.1);
}

}  // namespace
