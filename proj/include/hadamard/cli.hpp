#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "hadamard/analysis.hpp"
#include "hadamard/core_types.hpp"
#include "hadamard/critical_line.hpp"
#include "hadamard/error.hpp"
#include "hadamard/io.hpp"
#include "hadamard/product_engine.hpp"
#include "hadamard/series_engine.hpp"
#include "hadamard/summation.hpp"

namespace hadamard {

inline constexpr std::size_t kDefaultTerms = 10000;
inline constexpr double kDefaultTolerance = 1e-6;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

struct CommonOptions {
  std::string spec_path;
  std::optional<std::size_t> terms;
  double tolerance = kDefaultTolerance;
  unsigned threads = 0;
};

struct CommandOptions {
  std::vector<std::string> s_points;
  std::string center = "0";
  std::string alpha;
  int order = 30;
  double xmin = -10.0, xmax = 10.0;
  std::optional<std::size_t> samples;
  double vmin = 2.0, vmax = 20.0;
  std::size_t radii = 16;
  std::size_t angles = 64;
  std::optional<double> rmin, rmax;
  double radius = 0.0;
  std::size_t nodes = kDefaultContourNodes;
  std::string theorem;
  std::size_t zeros = 10;
  std::size_t points = 20;
  unsigned seed = 1;
};

inline std::string quote_argv(const std::vector<std::string>& argv) {
  std::string out = "\"";
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (i) out += ' ';
    for (char c : argv[i]) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
  }
  return out + "\"";
}

struct Context {
  EntireFunctionSpec spec;
  std::size_t n;
  double tol;
  Report& report;
};

inline complex natural_center(const EntireFunctionSpec& spec) {
  return spec.center_xi() ? complex{*spec.center_xi(), 0.0} : complex{0.0, 0.0};
}

// Deterministic points in the disk |s - c| <= r kept clear of the retained zeros.
inline std::vector<complex> sample_disk(const EntireFunctionSpec& spec, std::size_t n, complex c, double r,
                                        std::size_t count, std::mt19937_64& rng, bool avoid_origin) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<complex> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * count) throw Error("could not sample points clear of the zero set");
    const double rad = r * std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    const complex s = c + std::polar(rad, theta);
    if (nearest_zero_distance(spec.zero_sequence(), n, s) < 1e-3) continue;
    if (avoid_origin && std::abs(s) < 1e-3) continue;
    out.push_back(s);
  }
  return out;
}

inline double relative_gap(complex a, complex b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

inline void require_genus(const EntireFunctionSpec& spec, int genus, const std::string& theorem) {
  if (spec.genus() != genus)
    throw Error(theorem + " applies to genus-" + std::to_string(genus) + " specs; spec class is " +
                to_string(spec.class_tag()));
}

inline void require_symmetric_class(const EntireFunctionSpec& spec, const std::string& theorem) {
  if (!is_symmetric_class(spec.class_tag()))
    throw Error(theorem + " applies to Y_tilde or L_bar specs; spec class is " + to_string(spec.class_tag()));
}

// T1/T2: shifted-center product against the direct product, plus the constant identity.
inline void verify_shift(Context& ctx, const CommandOptions& o) {
  std::mt19937_64 rng(o.seed);
  const complex c = natural_center(ctx.spec);
  const auto s = sample_disk(ctx.spec, ctx.n, c, 2.0, o.points, rng, false);
  const auto a = sample_disk(ctx.spec, ctx.n, c, 2.0, o.points, rng, true);
  double worst = 0.0, worst_const = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const complex direct = eval_product(ctx.spec, s[j], ctx.n).value;
    const complex shifted = eval_shifted_product(ctx.spec, a[j], s[j], ctx.n).value;
    worst = std::max(worst, relative_gap(shifted, direct));
    worst_const = std::max(worst_const, shift_constant_residual(ctx.spec, a[j], ctx.n));
  }
  ctx.report.check("shift_identity_max_residual", worst, ctx.n, ctx.tol, {{"points", std::to_string(s.size())}});
  ctx.report.check("shift_constant_max_residual", worst_const, ctx.n, ctx.tol, {{"points", std::to_string(s.size())}});
}

// T3/T4: product centered on the line against the direct and shifted forms.
inline void verify_centered(Context& ctx, const CommandOptions& o) {
  std::mt19937_64 rng(o.seed);
  const complex c = natural_center(ctx.spec);
  const auto s = sample_disk(ctx.spec, ctx.n, c, 2.0, o.points, rng, false);
  double worst = 0.0, worst_shift = 0.0;
  for (const auto& p : s) {
    const complex centered = eval_centered_product(ctx.spec, p, ctx.n).value;
    worst = std::max(worst, relative_gap(centered, eval_product(ctx.spec, p, ctx.n).value));
    worst_shift = std::max(worst_shift, relative_gap(centered, eval_shifted_product(ctx.spec, c, p, ctx.n).value));
  }
  ctx.report.check("centered_vs_direct_max_residual", worst, ctx.n, ctx.tol, {{"points", std::to_string(s.size())}});
  ctx.report.check("centered_vs_shifted_max_residual", worst_shift, ctx.n, ctx.tol,
                   {{"points", std::to_string(s.size())}});
  if (ctx.spec.genus() == 1)
    ctx.report.value("exponential_prefactor_residual", exponential_prefactor_residual(ctx.spec, c + 1.0, ctx.n),
                     ctx.n, ctx.tol, {{"s", format_complex(c + 1.0)}});
}

// T5: odd coefficients about xi vanish, and the even series matches the product.
inline void verify_even_series(Context& ctx, const CommandOptions& o) {
  const std::size_t k = static_cast<std::size_t>(std::max(o.order, 1));
  const complex c = natural_center(ctx.spec);
  const auto t = taylor_coefficients(ctx.spec, c, k, ctx.n);
  double max_even = 0.0, max_odd = 0.0;
  for (std::size_t j = 0; j <= k; ++j) {
    double& slot = j % 2 ? max_odd : max_even;
    slot = std::max(slot, std::abs(t.coefficients[j]));
  }
  ctx.report.check("odd_coefficient_ratio", max_odd / max_even, ctx.n, kOddCoefficientTolerance,
                   {{"order", std::to_string(k)}});
  if (max_odd > kOddCoefficientTolerance * max_even) return;
  const auto even = even_series(ctx.spec, k, ctx.n);
  std::mt19937_64 rng(o.seed);
  const auto s = sample_disk(ctx.spec, ctx.n, c, 1.0, o.points, rng, false);
  double worst = 0.0;
  for (const auto& p : s) {
    const complex prod = eval_product(ctx.spec, p, ctx.n).value;
    worst = std::max(worst, std::abs(eval_series(even.expansion, p) - prod) / std::abs(prod));
  }
  ctx.report.check("even_series_vs_product_max_residual", worst, ctx.n, ctx.tol,
                   {{"order", std::to_string(k)}, {"points", std::to_string(s.size())}});
}

// T6/T7: the profile on the line is real and agrees with the line product forms.
inline void verify_line(Context& ctx, const CommandOptions& o) {
  const double x_max = std::max(std::abs(o.xmin), std::abs(o.xmax));
  const std::size_t samples = o.samples.value_or(static_cast<std::size_t>(2 * x_max * kDefaultSamplesPerUnit) + 1);
  const auto prof = critical_line_profile(ctx.spec, -x_max, x_max, samples, ctx.n);
  double vmax = 0.0;
  for (const auto& v : prof.values) vmax = std::max(vmax, std::abs(v));
  ctx.report.check("profile_imag_max_relative", prof.imag_max / vmax, ctx.n, ctx.tol,
                   {{"imag_max", format_double(prof.imag_max)}, {"samples", std::to_string(samples)}});
  double worst = 0.0, worst_even = 0.0;
  std::vector<double> taus;
  for (std::size_t i = 0; i < ctx.n; ++i) taus.push_back(ctx.spec.zero_sequence()[i].imag());
  const bool even = ctx.spec.class_tag() == ClassTag::Y_tilde && sign_symmetric(taus);
  for (std::size_t j = 0; j < prof.grid.size(); ++j) {
    const double x = prof.grid[j];
    worst = std::max(worst, std::abs(line_product_form(ctx.spec, x, ctx.n) - prof.values[j]) / (1.0 + vmax));
    if (even) worst_even = std::max(worst_even, std::abs(even_product_form(ctx.spec, x, ctx.n) - prof.values[j]) / (1.0 + vmax));
  }
  ctx.report.check("line_product_max_residual", worst, ctx.n, ctx.tol);
  if (even) ctx.report.check("even_product_max_residual", worst_even, ctx.n, ctx.tol);
}

// T8/T9: every audited zero is simple.
inline void verify_simple(Context& ctx, const CommandOptions& o) {
  const auto zeros = ctx.spec.zero_sequence().zeros();
  const std::size_t count = std::min(o.zeros, ctx.n);
  std::size_t simple = 0;
  for (std::size_t i = 0; i < count; ++i) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ctx.n; ++j)
      if (j != i && zeros[j] != zeros[i]) gap = std::min(gap, std::abs(zeros[j] - zeros[i]));
    const double radius = std::min(0.3, 0.45 * gap);
    const auto m = verify_multiplicity(ctx.spec, zeros[i], radius, o.nodes, ctx.n);
    const bool ok = m.winding == 1;
    simple += ok;
    ctx.report.flag("zero_is_simple", ok, ctx.n, kWindingSnapWindow,
                    {{"zero", format_complex(zeros[i])}, {"winding", std::to_string(m.winding)},
                     {"raw", format_complex(m.raw_integral)}, {"radius", format_double(radius)}});
  }
  ctx.report.value("simple_zero_count", static_cast<double>(simple), ctx.n, kWindingSnapWindow,
                   {{"audited", std::to_string(count)}});
}

inline void run_theorem(Context& ctx, const CommandOptions& o) {
  const std::string& t = o.theorem;
  if (t == "T1") {
    require_genus(ctx.spec, 1, t);
    verify_shift(ctx, o);
  } else if (t == "T2") {
    require_genus(ctx.spec, 0, t);
    verify_shift(ctx, o);
  } else if (t == "T3" || t == "T4") {
    require_symmetric_class(ctx.spec, t);
    require_genus(ctx.spec, t == "T3" ? 1 : 0, t);
    verify_centered(ctx, o);
  } else if (t == "T5") {
    if (ctx.spec.class_tag() != ClassTag::Y_tilde) throw Error("T5 applies to Y_tilde specs");
    verify_even_series(ctx, o);
  } else if (t == "T6" || t == "T7") {
    require_symmetric_class(ctx.spec, t);
    require_genus(ctx.spec, t == "T6" ? 1 : 0, t);
    verify_line(ctx, o);
  } else {
    require_symmetric_class(ctx.spec, t);
    verify_simple(ctx, o);
  }
}

inline std::size_t default_samples(double xmin, double xmax) {
  return static_cast<std::size_t>((xmax - xmin) * kDefaultSamplesPerUnit) + 1;
}

inline void run_subcommand(const std::string& name, Context& ctx, const CommandOptions& o) {
  const auto& spec = ctx.spec;
  const std::size_t n = ctx.n;
  const double tol = ctx.tol;
  Report& r = ctx.report;
  auto eval_extras = [](const TruncatedEvaluation& ev) {
    return std::vector<Report::Field>{
        {"tail_bound", ev.tail_bound ? format_double(*ev.tail_bound) : "indeterminate"},
        {"near_zero", ev.near_zero ? "true" : "false"}};
  };

  if (name == "eval") {
    for (const auto& text : o.s_points) {
      const complex s = parse_complex(text);
      const auto ev = eval_product(spec, s, n);
      auto extra = eval_extras(ev);
      extra.insert(extra.begin(), {"s", format_complex(s)});
      r.value("S", ev.value, n, tol, std::move(extra));
    }
  } else if (name == "series") {
    const complex c = parse_complex(o.center);
    const auto t = taylor_coefficients(spec, c, static_cast<std::size_t>(o.order), n);
    for (std::size_t k = 0; k < t.coefficients.size(); ++k)
      r.value("taylor_coefficient", t.coefficients[k], n, tol, {{"k", std::to_string(k)}, {"center", format_complex(c)}});
    for (const auto& text : o.s_points) {
      const complex s = parse_complex(text);
      const complex series = eval_series(t, s);
      const complex product = eval_product(spec, s, n).value;
      r.value("series_value", series, n, tol, {{"s", format_complex(s)}, {"order", std::to_string(o.order)}});
      r.value("product_value", product, n, tol, {{"s", format_complex(s)}});
      r.value("series_product_relative_gap", std::abs(series - product) / std::abs(product), n, tol,
              {{"s", format_complex(s)}});
    }
  } else if (name == "shift") {
    const complex alpha = parse_complex(o.alpha);
    for (const auto& text : o.s_points) {
      const complex s = parse_complex(text);
      const auto shifted = eval_shifted_product(spec, alpha, s, n);
      const complex direct = eval_product(spec, s, n).value;
      r.value("shifted_product", shifted.value, n, tol, {{"s", format_complex(s)}, {"alpha", format_complex(alpha)}});
      r.value("direct_product", direct, n, tol, {{"s", format_complex(s)}});
      r.value("shift_relative_gap", relative_gap(shifted.value, direct), n, tol, {{"s", format_complex(s)}});
    }
    r.value("shift_constant_residual", shift_constant_residual(spec, alpha, n), n, tol,
            {{"alpha", format_complex(alpha)}});
  } else if (name == "line") {
    const auto prof = critical_line_profile(spec, o.xmin, o.xmax, o.samples.value_or(default_samples(o.xmin, o.xmax)), n);
    r.value("V0", prof.v0, n, tol, {{"xi", format_double(prof.xi)}});
    r.value("imag_max", prof.imag_max, n, tol);
    for (std::size_t j = 0; j < prof.grid.size(); ++j)
      r.value("V", prof.values[j], n, tol, {{"x", format_double(prof.grid[j])}});
  } else if (name == "scan") {
    const auto prof = critical_line_profile(spec, o.xmin, o.xmax, o.samples.value_or(default_samples(o.xmin, o.xmax)), n);
    const auto zs = scan_real_zeros(prof, spec);
    r.value("imag_max", prof.imag_max, n, tol);
    for (const auto& z : zs.zeros)
      r.value("real_zero", z.tau, n, tol,
              {{"residual", format_double(z.residual)},
               {"bracket", "[" + format_double(z.bracket_lo) + "," + format_double(z.bracket_hi) + "]"}});
    r.value("real_zero_count", static_cast<double>(zs.zeros.size()), n, tol);
  } else if (name == "order") {
    const auto est = estimate_order(spec, o.vmin, o.vmax, o.radii, n, o.angles);
    for (std::size_t j = 0; j < est.radii.size(); ++j)
      r.value("loglog_max_modulus", est.loglog_values[j], n, tol, {{"v", format_double(est.radii[j])}});
    r.value("order_estimate", est.slope, n, tol, {{"fit_rms", format_double(est.residual)}});
  } else if (name == "exponent") {
    const auto& seq = spec.zero_sequence();
    const auto zeros = seq.zeros();
    double lo = std::abs(zeros[0]), hi = lo;
    for (std::size_t i = 0; i < n; ++i) {
      lo = std::min(lo, std::abs(zeros[i]));
      hi = std::max(hi, std::abs(zeros[i]));
    }
    const ZeroSequence head(std::vector<complex>(zeros.begin(), zeros.begin() + static_cast<std::ptrdiff_t>(n)),
                            Ordering::as_given);
    const auto est = estimate_exponent(head, o.rmin.value_or(lo), o.rmax.value_or(hi), o.radii);
    for (const auto& [rad, count] : est.counting_pairs)
      r.value("zero_count", static_cast<double>(count), n, tol, {{"r", format_double(rad)}});
    r.value("exponent_estimate", est.gamma_hat, n, tol, {{"fit_rms", format_double(est.residual)}});
  } else if (name == "mult") {
    const auto m = verify_multiplicity(spec, parse_complex(o.center), o.radius, o.nodes, n);
    r.value("winding", static_cast<double>(m.winding), n, kWindingSnapWindow,
            {{"center", format_complex(m.center)}, {"radius", format_double(m.radius)},
             {"raw", format_complex(m.raw_integral)}, {"nodes", std::to_string(m.nodes)}});
  } else if (name == "verify-identity") {
    run_theorem(ctx, o);
    r.header("verdict", {{"theorem", o.theorem}, {"status", r.all_passed() ? "pass" : "fail"}});
  }
}

}  // namespace detail

/// Runs one CLI invocation (argv excludes the program name) and writes the
/// report to `out`. Returns 0 on success, 1 on a validation error or failed
/// verification, 2 on a usage error.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Hadamard product toolkit", "hadamard"};
  app.require_subcommand(1);
  detail::CommonOptions common;
  detail::CommandOptions o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", common.spec_path, "spec file")->required();
    sub->add_option("--terms", common.terms, "truncation N (default min(10000, available zeros))");
    sub->add_option("--tol", common.tolerance, "tolerance")->capture_default_str();
    sub->add_option("--threads", common.threads, "worker thread cap (0 = hardware)");
  };
  auto* eval = app.add_subcommand("eval", "evaluate the truncated product");
  add_common(eval);
  eval->add_option("--s", o.s_points, "evaluation point(s)")->required();

  auto* series = app.add_subcommand("series", "Taylor coefficients from zero data");
  add_common(series);
  series->add_option("--center", o.center, "expansion center")->capture_default_str();
  series->add_option("--order", o.order, "highest coefficient index")->capture_default_str()->check(CLI::NonNegativeNumber);
  series->add_option("--s", o.s_points, "points at which to compare series and product");

  auto* shift = app.add_subcommand("shift", "shifted-center product");
  add_common(shift);
  shift->add_option("--alpha", o.alpha, "shift point")->required();
  shift->add_option("--s", o.s_points, "evaluation point(s)")->required();

  auto* line = app.add_subcommand("line", "profile V(x) = S(xi + i x)");
  auto* scan = app.add_subcommand("scan", "real zeros of V on [xmin, xmax]");
  for (auto* sub : {line, scan}) {
    add_common(sub);
    sub->add_option("--xmin", o.xmin)->required();
    sub->add_option("--xmax", o.xmax)->required();
    sub->add_option("--samples", o.samples, "grid size (default 64 per unit)");
  }

  auto* order = app.add_subcommand("order", "order estimate from maximum-modulus growth");
  add_common(order);
  order->add_option("--vmin", o.vmin)->capture_default_str();
  order->add_option("--vmax", o.vmax)->capture_default_str();
  order->add_option("--radii", o.radii)->capture_default_str();
  order->add_option("--angles", o.angles)->capture_default_str();

  auto* exponent = app.add_subcommand("exponent", "exponent of convergence from zero counting");
  add_common(exponent);
  exponent->add_option("--rmin", o.rmin);
  exponent->add_option("--rmax", o.rmax);
  exponent->add_option("--radii", o.radii)->capture_default_str();

  auto* mult = app.add_subcommand("mult", "zero count inside a circle (argument principle)");
  add_common(mult);
  mult->add_option("--center", o.center)->required();
  mult->add_option("--radius", o.radius)->required();
  mult->add_option("--nodes", o.nodes)->capture_default_str();

  auto* verify = app.add_subcommand("verify-identity", "residual report for one theorem");
  add_common(verify);
  verify->add_option("--theorem", o.theorem)->required()->check(
      CLI::IsMember({"T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9"}));
  verify->add_option("--zeros", o.zeros, "zeros audited by T8/T9")->capture_default_str();
  verify->add_option("--points", o.points, "random points for T1-T5")->capture_default_str();
  verify->add_option("--order", o.order, "series order for T5")->capture_default_str();
  verify->add_option("--xmin", o.xmin, "line range for T6/T7")->capture_default_str();
  verify->add_option("--xmax", o.xmax, "line range for T6/T7")->capture_default_str();
  verify->add_option("--samples", o.samples);
  verify->add_option("--nodes", o.nodes)->capture_default_str();
  verify->add_option("--seed", o.seed)->capture_default_str();

  std::vector<std::string> storage{"hadamard"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    if (common.threads) set_max_threads(common.threads);
    auto loaded = load_spec(common.spec_path);
    const std::size_t available = loaded.spec.available_zeros();
    const std::size_t n = common.terms.value_or(std::min(kDefaultTerms, available));
    detail::check_truncation(loaded.spec, n);
    if (n == 0) throw Error("truncation must include at least one zero");

    Report report;
    report.header("command", {{"argv", detail::quote_argv(args)}});
    for (const auto& path : loaded.inputs)
      report.header("input", {{"path", path}, {"fnv1a64", hex64(fnv1a64(read_file(path)))}});
    report.header("settings", {{"class", to_string(loaded.spec.class_tag())},
                               {"truncation", std::to_string(n)},
                               {"available", std::to_string(available)},
                               {"tolerance", format_double(common.tolerance)}});
    detail::Context ctx{loaded.spec, n, common.tolerance, report};
    detail::run_subcommand(name, ctx, o);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.header("timing", {{"wall_time_s", format_double(wall)}});
    report.write(out);
    return report.all_passed() ? kExitOk : kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace hadamard
