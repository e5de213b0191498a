// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hadamard/hadamard.hpp"
#include "hadamard/io.hpp"

using namespace hadamard;
using fixtures::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double x) { return format_double(x); }

// Points with |s - center| <= radius, at least 1e-3 away from any retained zero.
std::vector<complex> disk_points(const EntireFunctionSpec& spec, complex center, double radius, int count,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = spec.available_zeros();
  std::vector<complex> out;
  while (static_cast<int>(out.size()) < count) {
    const complex p = center + std::polar(radius * std::sqrt(u(rng)), 2.0 * pi * u(rng));
    if (detail::nearest_zero_distance(spec.zero_sequence(), n, p) > 1e-3) out.push_back(p);
  }
  return out;
}

Outcome product_convergence() {
  const auto t0 = Clock::now();
  const auto spec = fixtures::sinh_line(10000);
  std::vector<complex> grid;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) grid.emplace_back(1.0 + 0.7 * a, 0.7 * b);
  double worst_big = 0.0, worst_small = 0.0;
  bool all_ok = true;
  for (const auto& s : grid) {
    const complex oracle = fixtures::sinhc(s - 1.0);
    const double e_big = fixtures::rel(eval_product(spec, s, 20000).value, oracle);
    const double e_small = fixtures::rel(eval_product(spec, s, 200).value, oracle);
    all_ok = all_ok && e_big <= 1e-3;
    worst_big = std::max(worst_big, e_big);
    worst_small = std::max(worst_small, e_small);
  }
  const double elapsed = seconds_since(t0);
  const bool pass = all_ok && worst_big < worst_small && elapsed < 5.0;
  return {pass, "max_rel_err(N=1e4)=" + num(worst_big) + " max_rel_err(N=1e2)=" + num(worst_small) +
                    " points=" + std::to_string(grid.size()) + " runtime_s=" + num(elapsed)};
}

Outcome shift_identity() {
  const auto spec = fixtures::sinh_line(10000);
  const std::size_t n = spec.available_zeros();
  const auto s = disk_points(spec, 1.0, 2.0, 100, 101);
  const auto alpha = disk_points(spec, 1.0, 2.0, 100, 202);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const complex direct = eval_product(spec, s[i], n).value;
    const complex shifted = eval_shifted_product(spec, alpha[i], s[i], n).value;
    worst = std::max(worst, fixtures::rel(shifted, direct));
  }
  return {worst <= 1e-6, "pairs=100 max_rel_disagreement=" + num(worst)};
}

Outcome constant_residual() {
  const auto spec = fixtures::sinh_line_genus1(10000);
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  int done = 0;
  while (done < 20) {
    const complex a(1.0 + u(rng), u(rng));
    if (detail::nearest_zero_distance(spec.zero_sequence(), spec.available_zeros(), a) <= 1e-3) continue;
    worst = std::max(worst, shift_constant_residual(spec, a, spec.available_zeros()));
    ++done;
  }
  return {worst <= 1e-10, "alphas=20 max_residual=" + num(worst)};
}

Outcome even_coefficients() {
  const std::size_t pairs = 20000;
  const auto spec = fixtures::sinh_line(pairs);
  const auto t = taylor_coefficients(spec, 1.0, 15, spec.available_zeros());
  const auto& c = t.coefficients;
  double max_even = 0.0, max_odd = 0.0, worst_even = 0.0;
  for (std::size_t k = 0; k <= 15; ++k) {
    if (k % 2 == 0)
      max_even = std::max(max_even, std::abs(c[k]));
    else
      max_odd = std::max(max_odd, std::abs(c[k]));
  }
  for (int k = 0; k <= 5; ++k) {
    const double oracle = fixtures::sinhc_even_coefficient(k);
    worst_even = std::max(worst_even, std::abs(c[2 * k] - oracle) / oracle);
  }
  const double ratio = max_odd / max_even;
  return {ratio <= 1e-8 && worst_even <= 1e-3,
          "pairs=" + std::to_string(pairs) + " odd_to_even_ratio=" + num(ratio) + " max_even_rel_err=" + num(worst_even)};
}

Outcome critical_line() {
  const auto spec = fixtures::sinh_line(10000);
  const std::size_t n = spec.available_zeros();
  const auto profile = critical_line_profile(spec, -10.0, 10.0, 801, n);

  const auto long_spec = fixtures::sinh_line(400000);
  const auto half = critical_line_profile(long_spec, 0.0, 0.5, 2, long_spec.available_zeros());
  const double v_err = std::abs(half.values[1] - 2.0 / pi);

  const auto scan_profile = critical_line_profile(spec, 0.5, 5.5, 321, n);
  const auto found = scan_real_zeros(scan_profile, spec);
  bool scan_ok = found.zeros.size() == 5;
  double scan_err = 0.0;
  for (std::size_t i = 0; scan_ok && i < 5; ++i) scan_err = std::max(scan_err, std::abs(found.zeros[i].tau - (i + 1.0)));
  scan_ok = scan_ok && scan_err <= 1e-9;

  double even_err = 0.0;
  for (std::size_t j = 0; j < profile.grid.size(); ++j)
    even_err = std::max(even_err, std::abs(even_product_form(spec, profile.grid[j], n) - profile.values[j]));

  const bool pass = profile.imag_max <= 1e-9 && v_err <= 1e-6 && scan_ok && even_err <= 1e-10;
  return {pass, "imag_max=" + num(profile.imag_max) + " V(0.5)_err=" + num(v_err) +
                    " zeros_found=" + std::to_string(found.zeros.size()) + " max_tau_err=" + num(scan_err) +
                    " even_product_max_err=" + num(even_err)};
}

Outcome simplicity() {
  const auto spec = fixtures::sinh_line(10000);
  const std::size_t n = spec.available_zeros();
  bool ok = true;
  std::string windings;
  for (int k = 1; k <= 5; ++k) {
    for (double sign : {1.0, -1.0}) {
      const auto r = verify_multiplicity(spec, {1.0, sign * k}, 0.3, 512, n);
      ok = ok && r.winding == 1;
      windings += std::to_string(r.winding);
    }
  }
  auto taus = fixtures::pm_integers(10000);
  taus.push_back(1.0);
  taus.push_back(-1.0);
  const auto doubled = make_symmetric_spec(1.0, taus, 1.0, ClassTag::Y_tilde);
  const int w2 = verify_multiplicity(doubled, {1.0, 1.0}, 0.3, 512, doubled.available_zeros()).winding;
  return {ok && w2 == 2, "windings=" + windings + " duplicated_zero_winding=" + std::to_string(w2)};
}

Outcome order_exponent() {
  const auto t0 = Clock::now();
  const auto spec = fixtures::sinh_line(10000);
  const double order = estimate_order(spec, 10.0, 200.0, 16, spec.available_zeros()).slope;
  const double gamma = estimate_exponent(spec.zero_sequence(), 5.0, 500.0).gamma_hat;
  const double elapsed = seconds_since(t0);
  const bool pass = order >= 0.9 && order <= 1.1 && gamma >= 0.9 && gamma <= 1.1 &&
                    std::abs(order - gamma) <= 0.2 && elapsed < 30.0;
  return {pass, "order=" + num(order) + " exponent=" + num(gamma) + " runtime_s=" + num(elapsed)};
}

Outcome duality() {
  struct Case {
    const char* name;
    EntireFunctionSpec spec;
    complex center;
  };
  std::vector<Case> cases{{"polynomial", fixtures::cubic(), 0.0},
                          {"genus0_symmetric", fixtures::sinh_line(10000), 1.0},
                          {"genus1_paired", fixtures::sinh_origin(10000, ClassTag::L), 0.0},
                          {"genus1_symmetric", fixtures::sinh_line_genus1(10000), 1.0}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const std::size_t n = c.spec.available_zeros();
    const auto t = taylor_coefficients(c.spec, c.center, 30, n);
    double worst = 0.0;
    for (const auto& s : disk_points(c.spec, c.center, 1.0, 50, 404)) {
      worst = std::max(worst, fixtures::rel(eval_series(t, s), eval_product(c.spec, s, n).value));
    }
    ok = ok && worst <= 1e-6;
    detail += std::string(detail.empty() ? "" : " ") + c.name + "=" + num(worst);
  }
  return {ok, detail};
}

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string(HADAMARD_CLI_PATH) + " " + args + " 2>&1";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) throw Error("cannot run " + cmd);
  std::string out;
  std::array<char, 4096> buf{};
  while (const auto got = fread(buf.data(), 1, buf.size(), pipe.get())) out.append(buf.data(), got);
  return out;
}

Outcome cli_determinism() {
  const std::string samples = HADAMARD_SAMPLES_DIR;
  const std::vector<std::string> commands{
      "eval --spec " + samples + "/sinh.spec --s 1.3+0.4i --s -0.5+2.5i",
      "scan --spec " + samples + "/sinh.spec --xmin 0.5 --xmax 5.5",
      "verify-identity --spec " + samples + "/sinh_lbar.spec --theorem T3",
  };
  const std::regex timing("record=timing[^\n]*\n");
  bool same = true;
  for (const auto& c : commands) {
    const auto a = std::regex_replace(run_cli(c), timing, "");
    const auto b = std::regex_replace(run_cli(c), timing, "");
    same = same && a == b && !a.empty();
  }

  std::vector<complex> zeros;
  std::mt19937_64 rng(505);
  std::normal_distribution<double> g(0.0, 30.0);
  for (int i = 0; i < 500; ++i) {
    const complex z(g(rng), g(rng));
    zeros.push_back(z);
    zeros.push_back(std::conj(z));
  }
  const ZeroSequence seq(zeros, Ordering::by_modulus, Pairing::conjugate_pairs);
  const auto path = (std::filesystem::temp_directory_path() / "hadamard_acceptance_zeros.txt").string();
  write_zero_table(path, seq, TableFormat::complex_pairs);
  const auto back = ingest_zero_table(path, TableFormat::complex_pairs);
  bool round_trip = back.size() == seq.size();
  for (std::size_t i = 0; round_trip && i < seq.size(); ++i) round_trip = back.zeros()[i] == seq.zeros()[i];
  std::filesystem::remove(path);

  return {same && round_trip, "commands=" + std::to_string(commands.size()) + " identical=" + (same ? "yes" : "no") +
                                  " round_trip_1000=" + (round_trip ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 product_convergence", product_convergence}, {"2 shift_identity", shift_identity},
      {"3 shift_constant_residual", constant_residual}, {"4 even_coefficients", even_coefficients},
      {"5 critical_line", critical_line},              {"6 simplicity_audit", simplicity},
      {"7 order_exponent", order_exponent},            {"8 series_product_duality", duality},
      {"9 cli_determinism_round_trip", cli_determinism}};
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << name << " " << o.detail
              << " elapsed_s=" << num(seconds_since(t0)) << std::endl;
  }
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
