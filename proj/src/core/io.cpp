#include "landlaw/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "landlaw/error.hpp"

namespace landlaw {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

double parse_real(const std::string& s, std::size_t line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorCode::Io, "line " + std::to_string(line) + ": cannot parse '" + s + "' as a number");
  return x;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::Io, "cannot open " + path.string());
  return is;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_field(std::ostream& os, const Torus& t, std::span<const double> values) {
  if (values.size() != t.volume()) fail(ErrorCode::DimensionMismatch, "field size differs from torus volume");
  os << t.dim() << ' ' << t.side() << '\n';
  for (double x : values) os << format_real(x) << '\n';
  if (!os) fail(ErrorCode::Io, "write failed");
}

FlatField read_field(std::istream& is) {
  int d = 0;
  int k = 0;
  if (!(is >> d >> k)) fail(ErrorCode::Io, "missing 'd K' header");
  Torus t(d, k);
  ScalarField values;
  values.reserve(t.volume());
  std::string token;
  while (is >> token) values.push_back(parse_real(token, values.size() + 2));
  if (values.size() != t.volume()) {
    std::ostringstream os;
    os << "expected " << t.volume() << " values for d=" << d << " K=" << k << ", found " << values.size();
    fail(ErrorCode::Io, os.str());
  }
  return {t, std::move(values)};
}

void save_field(const std::filesystem::path& path, const Torus& t, std::span<const double> values) {
  auto os = open_out(path);
  write_field(os, t, values);
}

FlatField load_field(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_field(is);
}

void write_curve(std::ostream& os, const CountingCurve& c) {
  if (c.grid.size() != c.values.size()) fail(ErrorCode::DimensionMismatch, "curve grid and values differ in length");
  os << "mu,value,kind\n";
  for (std::size_t i = 0; i < c.size(); ++i)
    os << format_real(c.grid[i]) << ',' << format_real(c.values[i]) << ',' << curve_kind_name(c.kind) << '\n';
  if (!os) fail(ErrorCode::Io, "write failed");
}

CountingCurve read_curve(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "mu,value,kind") fail(ErrorCode::Io, "expected header 'mu,value,kind'");
  CountingCurve c;
  std::size_t n = 1;
  bool first = true;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) fail(ErrorCode::Io, "line " + std::to_string(n) + ": expected 3 columns");
    const CurveKind kind = parse_curve_kind(cells[2]);
    if (first) {
      c.kind = kind;
      first = false;
    } else if (kind != c.kind) {
      fail(ErrorCode::Io, "line " + std::to_string(n) + ": mixed curve kinds");
    }
    c.grid.push_back(parse_real(cells[0], n));
    c.values.push_back(parse_real(cells[1], n));
  }
  if (!std::is_sorted(c.grid.begin(), c.grid.end())) fail(ErrorCode::Io, "curve grid is not sorted");
  return c;
}

void save_curve(const std::filesystem::path& path, const CountingCurve& c) {
  auto os = open_out(path);
  write_curve(os, c);
}

CountingCurve load_curve(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_curve(is);
}

void write_report(std::ostream& os, const LawReport& r) {
  os << "mu,lhs,rhs,margin\n";
  for (std::size_t i = 0; i < r.grid.size(); ++i)
    os << format_real(r.grid[i]) << ',' << format_real(r.lhs[i]) << ',' << format_real(r.rhs[i]) << ','
       << format_real(r.margin[i]) << '\n';
  const double min_margin = r.margin.empty() ? 0.0 : *std::min_element(r.margin.begin(), r.margin.end());
  os << "# check=" << r.check << " points=" << r.grid.size() << " violations=" << r.violations.size()
     << " truncated=" << r.truncated.size() << " min_margin=" << format_real(min_margin);
  if (r.fitted)
    os << " c1=" << format_real(r.fitted->c1) << " c2=" << format_real(r.fitted->c2)
       << " sup_distance=" << format_real(r.fitted->sup_distance);
  os << " status=" << (r.holds() ? "pass" : "fail") << '\n';
  if (!os) fail(ErrorCode::Io, "write failed");
}

void write_ensemble(std::ostream& os, const EnsembleResult& r) {
  const bool dual = !r.mean_nu_dual.empty();
  os << "mu,mean_N,se_N,mean_Nu,se_Nu";
  if (dual) os << ",mean_Nu_dual,se_Nu_dual";
  os << '\n';
  const auto cell = [](const std::vector<double>& v, std::size_t i) {
    return i < v.size() ? format_real(v[i]) : std::string("nan");
  };
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    os << format_real(r.grid[i]) << ',' << cell(r.mean_n, i) << ',' << cell(r.se_n, i) << ',' << cell(r.mean_nu, i)
       << ',' << cell(r.se_nu, i);
    if (dual) os << ',' << cell(r.mean_nu_dual, i) << ',' << cell(r.se_nu_dual, i);
    os << '\n';
  }
  if (!os) fail(ErrorCode::Io, "write failed");
}

}  // namespace landlaw
