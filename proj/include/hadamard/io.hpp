#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "hadamard/core_types.hpp"
#include "hadamard/error.hpp"
#include "hadamard/zero_sequence.hpp"

namespace hadamard {

enum class TableFormat { complex_pairs, tau_only };

inline const char* to_string(TableFormat f) { return f == TableFormat::complex_pairs ? "complex_pairs" : "tau_only"; }

inline TableFormat parse_table_format(std::string_view s) {
  if (s == "complex_pairs") return TableFormat::complex_pairs;
  if (s == "tau_only") return TableFormat::tau_only;
  throw Error("unknown zero table format '" + std::string(s) + "'");
}

struct ZeroTableFile {
  std::string path;
  TableFormat format = TableFormat::complex_pairs;
  std::optional<double> xi;
  std::size_t count = 0;
};

// ---- number formatting ----------------------------------------------------

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline std::string format_complex(complex z) { return "(" + format_double(z.real()) + "," + format_double(z.imag()) + ")"; }

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

inline std::string_view strip_comment(std::string_view line) {
  const auto h = line.find('#');
  return trim(h == std::string_view::npos ? line : line.substr(0, h));
}

}  // namespace detail

/// Accepts "a+bi", "a-bi", "bi", "i", "-i", "a", and "(a,b)".
inline complex parse_complex(std::string_view text) {
  const std::string_view s = detail::trim(text);
  auto fail = [&]() -> complex { throw Error("malformed complex number '" + std::string(text) + "'"); };
  if (s.empty()) return fail();
  if (s.front() == '(') {
    if (s.back() != ')') return fail();
    const auto inner = s.substr(1, s.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos) return fail();
    const auto re = detail::parse_double(inner.substr(0, comma));
    const auto im = detail::parse_double(inner.substr(comma + 1));
    if (!re || !im) return fail();
    return {*re, *im};
  }
  if (s.back() != 'i' && s.back() != 'j') {
    const auto re = detail::parse_double(s);
    if (!re) return fail();
    return {*re, 0.0};
  }
  const auto body = s.substr(0, s.size() - 1);
  // split at the last sign that is not the leading one and not an exponent sign
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const auto real_part = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
  auto imag_part = split == std::string_view::npos ? body : body.substr(split);
  double im = 0.0;
  if (imag_part.empty() || imag_part == "+") {
    im = 1.0;
  } else if (imag_part == "-") {
    im = -1.0;
  } else {
    const auto v = detail::parse_double(imag_part);
    if (!v) return fail();
    im = *v;
  }
  double re = 0.0;
  if (!real_part.empty()) {
    const auto v = detail::parse_double(real_part);
    if (!v) return fail();
    re = *v;
  }
  return {re, im};
}

// ---- zero tables -----------------------------------------------------------

struct ParsedZeroTable {
  std::vector<complex> zeros;
  std::vector<double> taus;  // tau_only
  std::size_t count = 0;
};

inline ParsedZeroTable read_zero_lines(std::istream& in, TableFormat format, std::optional<double> xi,
                                       const std::string& source) {
  if (format == TableFormat::tau_only && !xi) throw Error(source + ": tau_only table requires xi");
  ParsedZeroTable out;
  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::strip_comment(line);
    if (body.empty()) continue;
    const auto fields = detail::split_ws(body);
    if (format == TableFormat::complex_pairs) {
      if (fields.size() != 2) throw Error(where() + "expected '<re> <im>'");
      const auto re = detail::parse_double(fields[0]);
      const auto im = detail::parse_double(fields[1]);
      if (!re || !im) throw Error(where() + "malformed number");
      if (!std::isfinite(*re) || !std::isfinite(*im)) throw Error(where() + "non-finite zero");
      if (*re == 0.0 && *im == 0.0) throw Error(where() + "zero at the origin is not allowed (sigma_k != 0)");
      out.zeros.emplace_back(*re, *im);
    } else {
      if (fields.size() != 1) throw Error(where() + "expected a single tau");
      const auto t = detail::parse_double(fields[0]);
      if (!t) throw Error(where() + "malformed number");
      if (!std::isfinite(*t)) throw Error(where() + "non-finite tau");
      if (*t == 0.0) throw Error(where() + "tau = 0 violates class constraint (zeros xi + i tau need tau != 0)");
      out.taus.push_back(*t);
      out.zeros.emplace_back(*xi, *t);
    }
    ++out.count;
  }
  return out;
}

inline bool conjugate_closed(const std::vector<complex>& zeros) {
  auto key = [](complex z) { return std::pair{z.real(), z.imag()}; };
  std::vector<std::pair<double, double>> a, b;
  for (const auto& z : zeros) {
    a.push_back(key(z));
    b.push_back(key(std::conj(z)));
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

inline ZeroSequence sequence_from_table(ParsedZeroTable table, TableFormat format, std::optional<double> xi,
                                        const std::string& source) {
  Pairing pairing = Pairing::none;
  if (format == TableFormat::tau_only) {
    if (detail::sign_symmetric(table.taus)) pairing = Pairing::symmetric_about_center;
  } else if (conjugate_closed(table.zeros)) {
    pairing = Pairing::conjugate_pairs;
  }
  return ZeroSequence(std::move(table.zeros), Ordering::by_modulus, pairing, source,
                      pairing == Pairing::symmetric_about_center ? xi : std::nullopt);
}

inline ZeroSequence parse_zero_table(std::istream& in, TableFormat format, std::optional<double> xi = std::nullopt,
                                     const std::string& source = "<stream>") {
  return sequence_from_table(read_zero_lines(in, format, xi, source), format, xi, source);
}

inline ZeroSequence ingest_zero_table(const std::string& path, TableFormat format,
                                      std::optional<double> xi = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read zero table '" + path + "'");
  return parse_zero_table(in, format, xi, path);
}

/// One zero per line in the given format; tau_only writes Im sigma_k.
inline void write_zero_table(std::ostream& out, const ZeroSequence& seq, TableFormat format) {
  for (const auto& z : seq.zeros()) {
    if (format == TableFormat::complex_pairs)
      out << format_double(z.real()) << ' ' << format_double(z.imag()) << '\n';
    else
      out << format_double(z.imag()) << '\n';
  }
}

inline void write_zero_table(const std::string& path, const ZeroSequence& seq, TableFormat format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write zero table '" + path + "'");
  write_zero_table(out, seq, format);
  if (!out) throw Error("write failed for '" + path + "'");
}

// ---- digests ----------------------------------------------------------------

// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---- spec files ---------------------------------------------------------------

struct LoadedSpec {
  EntireFunctionSpec spec;
  std::vector<std::string> inputs;  // spec file and any referenced zero table
};

inline ClassTag parse_class_tag(std::string_view s) {
  if (s == "Y") return ClassTag::Y;
  if (s == "L") return ClassTag::L;
  if (s == "Y_tilde") return ClassTag::Y_tilde;
  if (s == "L_bar") return ClassTag::L_bar;
  throw Error("unknown class '" + std::string(s) + "'");
}

/// Key/value spec text. Recognized keys:
///   class            Y | L | Y_tilde | L_bar
///   value_at_zero    S(0)
///   value_at_center  S(xi) (symmetric classes; S(0) is derived from it)
///   q                Q (genus 1)
///   xi               center of the line
///   zeros_format     complex_pairs | tau_only
///   zeros_file       zero table path, relative to the spec file
///   zero             inline "re im" entry (repeatable)
///   tau              inline tau entry (repeatable)
///   tau_pm_integers  K: taus +-1, ..., +-K
inline LoadedSpec parse_spec(std::istream& in, const std::string& source, const std::filesystem::path& base_dir) {
  std::optional<ClassTag> tag;
  std::optional<complex> at_zero, at_center;
  complex q = 0.0;
  std::optional<double> xi;
  std::optional<TableFormat> format;
  std::optional<std::string> zeros_file;
  std::vector<complex> inline_zeros;
  std::vector<double> inline_taus;
  std::vector<std::string> inputs{source};

  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::strip_comment(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw Error(where() + "expected 'key = value'");
    const std::string key(detail::trim(body.substr(0, eq)));
    const std::string_view value = detail::trim(body.substr(eq + 1));
    try {
      if (key == "class") {
        tag = parse_class_tag(value);
      } else if (key == "value_at_zero") {
        at_zero = parse_complex(value);
      } else if (key == "value_at_center") {
        at_center = parse_complex(value);
      } else if (key == "q") {
        q = parse_complex(value);
      } else if (key == "xi") {
        const auto v = detail::parse_double(value);
        if (!v) throw Error("malformed xi");
        xi = *v;
      } else if (key == "zeros_format") {
        format = parse_table_format(value);
      } else if (key == "zeros_file") {
        zeros_file = std::string(value);
      } else if (key == "zero") {
        const auto f = detail::split_ws(value);
        const auto re = f.size() == 2 ? detail::parse_double(f[0]) : std::nullopt;
        const auto im = f.size() == 2 ? detail::parse_double(f[1]) : std::nullopt;
        if (!re || !im) throw Error("expected 'zero = <re> <im>'");
        inline_zeros.emplace_back(*re, *im);
      } else if (key == "tau") {
        const auto v = detail::parse_double(value);
        if (!v) throw Error("malformed tau");
        if (*v == 0.0) throw Error("tau = 0 violates class constraint");
        inline_taus.push_back(*v);
      } else if (key == "tau_pm_integers") {
        const auto v = detail::parse_double(value);
        if (!v || *v < 1 || *v != std::floor(*v)) throw Error("tau_pm_integers must be a positive integer");
        for (long k = 1; k <= static_cast<long>(*v); ++k) {
          inline_taus.push_back(static_cast<double>(k));
          inline_taus.push_back(-static_cast<double>(k));
        }
      } else {
        throw Error("unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw Error(where() + e.what());
    }
  }

  if (!tag) throw Error(source + ": missing 'class'");
  const bool symmetric = is_symmetric_class(*tag);
  if (symmetric && !xi) throw Error(source + ": class " + to_string(*tag) + " requires xi");

  // Collect taus for symmetric classes, complex zeros otherwise.
  std::vector<double> taus = inline_taus;
  std::vector<complex> zeros = inline_zeros;
  if (!inline_taus.empty() && !symmetric) {
    if (!xi) throw Error(source + ": tau entries require xi");
    for (double t : inline_taus) zeros.emplace_back(*xi, t);
  }
  if (zeros_file) {
    const TableFormat fmt = format.value_or(symmetric ? TableFormat::tau_only : TableFormat::complex_pairs);
    const auto path = (base_dir / *zeros_file).string();
    std::ifstream zin(path);
    if (!zin) throw Error("cannot read zero table '" + path + "'");
    auto table = read_zero_lines(zin, fmt, xi, path);
    inputs.push_back(path);
    if (fmt == TableFormat::tau_only) {
      if (symmetric)
        taus.insert(taus.end(), table.taus.begin(), table.taus.end());
      else
        zeros.insert(zeros.end(), table.zeros.begin(), table.zeros.end());
    } else if (symmetric) {
      for (const auto& z : table.zeros) {
        if (std::abs(z.real() - *xi) > kOnZeroRelative * std::max(1.0, std::abs(*xi)))
          throw Error(path + ": zero off the line Re s = xi violates class");
        taus.push_back(z.imag());
      }
    } else {
      zeros.insert(zeros.end(), table.zeros.begin(), table.zeros.end());
    }
  }
  if (symmetric) {
    for (const auto& z : inline_zeros) {
      if (std::abs(z.real() - *xi) > kOnZeroRelative * std::max(1.0, std::abs(*xi)))
        throw Error(source + ": zero off the line Re s = xi violates class");
      taus.push_back(z.imag());
    }
  }

  if (at_zero && at_center) throw Error(source + ": give value_at_zero or value_at_center, not both");
  if (!at_zero && !at_center) throw Error(source + ": missing value_at_zero or value_at_center");

  if (symmetric) {
    if (at_center) return {make_symmetric_spec(*xi, taus, *at_center, *tag, q), inputs};
    std::vector<complex> z;
    z.reserve(taus.size());
    for (double t : taus) {
      if (t == 0.0) throw Error(source + ": tau = 0 violates class constraint");
      z.emplace_back(*xi, t);
    }
    const Pairing pairing = detail::sign_symmetric(taus) ? Pairing::symmetric_about_center : Pairing::none;
    ZeroSequence seq(std::move(z), Ordering::by_modulus, pairing, source, xi);
    return {EntireFunctionSpec(*tag, *at_zero, q, xi, std::move(seq)), inputs};
  }
  if (at_center) throw Error(source + ": value_at_center requires a symmetric class");
  const Pairing pairing = conjugate_closed(zeros) ? Pairing::conjugate_pairs : Pairing::none;
  ZeroSequence seq(std::move(zeros), Ordering::by_modulus, pairing, source);
  return {EntireFunctionSpec(*tag, *at_zero, q, xi, std::move(seq)), inputs};
}

inline LoadedSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read spec file '" + path + "'");
  return parse_spec(in, path, std::filesystem::path(path).parent_path());
}

// ---- reports --------------------------------------------------------------------

/// Line-oriented key=value records. Every numeric record carries quantity,
/// value, truncation and tolerance; extra fields follow.
class Report {
 public:
  using Field = std::pair<std::string, std::string>;

  void header(std::string kind, std::vector<Field> fields) {
    std::string line = "record=" + std::move(kind);
    for (auto& [k, v] : fields) line += " " + k + "=" + v;
    lines_.push_back(std::move(line));
  }

  void value(const std::string& quantity, const std::string& value, std::size_t truncation, double tolerance,
             std::vector<Field> extra = {}) {
    std::string line = "record=value quantity=" + quantity + " value=" + value +
                       " truncation=" + std::to_string(truncation) + " tolerance=" + format_double(tolerance);
    for (auto& [k, v] : extra) line += " " + k + "=" + v;
    lines_.push_back(std::move(line));
  }
  void value(const std::string& quantity, double v, std::size_t truncation, double tolerance,
             std::vector<Field> extra = {}) {
    value(quantity, format_double(v), truncation, tolerance, std::move(extra));
  }
  void value(const std::string& quantity, complex v, std::size_t truncation, double tolerance,
             std::vector<Field> extra = {}) {
    value(quantity, format_complex(v), truncation, tolerance, std::move(extra));
  }

  // Verification record: value is the residual, status compares it to tolerance.
  bool check(const std::string& quantity, double residual, std::size_t truncation, double tolerance,
             std::vector<Field> extra = {}) {
    const bool ok = residual <= tolerance;
    extra.insert(extra.begin(), {"status", ok ? "pass" : "fail"});
    value(quantity, residual, truncation, tolerance, std::move(extra));
    all_passed_ = all_passed_ && ok;
    return ok;
  }
  bool flag(const std::string& quantity, bool ok, std::size_t truncation, double tolerance,
            std::vector<Field> extra = {}) {
    extra.insert(extra.begin(), {"status", ok ? "pass" : "fail"});
    value(quantity, ok ? "true" : "false", truncation, tolerance, std::move(extra));
    all_passed_ = all_passed_ && ok;
    return ok;
  }

  bool all_passed() const { return all_passed_; }
  const std::vector<std::string>& lines() const { return lines_; }

  void write(std::ostream& out) const {
    for (const auto& l : lines_) out << l << '\n';
  }

 private:
  std::vector<std::string> lines_;
  bool all_passed_ = true;
};

}  // namespace hadamard
