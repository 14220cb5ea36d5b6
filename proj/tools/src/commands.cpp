#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iostream>
#include <memory>
#include <numbers>

#include <fmt/format.h>
#include <json.hpp>

#include "lamharm/axis.hpp"
#include "lamharm/config.hpp"
#include "lamharm/errors.hpp"
#include "lamharm/field.hpp"
#include "lamharm/spectral.hpp"
#include "lamharm/transform.hpp"
#include "lamharm/verify.hpp"
#include "output.hpp"

namespace lamharm::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError("not a number: '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("not an integer: '" + s + "'");
  return v;
}

Point polar_point(int dimension, double r, double theta) {
  if (dimension == 2) return {r * std::cos(theta), r * std::sin(theta), 0.0};
  return {r * std::sin(theta), 0.0, r * std::cos(theta)};
}

/// Polar sample grid: radii r0 (i + 1) / R, angles 2 pi j / A.
std::vector<Point> polar_grid(int dimension, double r0, const std::string& grid) {
  const auto [nr, na] = parse_grid(grid);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(nr) * na);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < na; ++j)
      out.push_back(polar_point(dimension, r0 * (i + 1) / nr, 2.0 * std::numbers::pi * j / na));
  return out;
}

SurfaceMode demo_mode(int l, std::size_t m) {
  SurfaceMode mode{l, Vector(m), Vector(m)};
  const double scale = std::ldexp(1.0, -l);
  for (std::size_t i = 0; i < m; ++i) {
    mode.cos[i] = scale / static_cast<double>(i + 1);
    mode.sin[i] = l == 0 ? 0.0 : 0.5 * scale * (i % 2 == 0 ? 1.0 : -1.0);
  }
  return mode;
}

void finish(const std::string& out, RunManifest manifest, Clock::time_point start) {
  manifest.wall_time_seconds = seconds_since(start);
  write_manifest(out, manifest);
}

}  // namespace

std::pair<int, int> parse_grid(const std::string& spec) {
  const auto parts = split(spec, 'x');
  if (parts.size() != 2) throw ParseError("grid must look like RxA, got '" + spec + "'");
  const int nr = parse_int(parts[0]);
  const int na = parse_int(parts[1]);
  if (nr < 1 || na < 1) throw ParseError("grid dimensions must be positive");
  return {nr, na};
}

std::vector<std::vector<double>> parse_matrix(const std::string& spec) {
  std::vector<std::vector<double>> rows;
  for (const std::string& row : split(spec, ';')) {
    std::vector<double> r;
    for (const std::string& entry : split(row, ',')) r.push_back(parse_number(entry));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<int> parse_modes(const std::string& spec) {
  std::vector<int> out;
  for (const std::string& item : split(spec, ',')) {
    const std::size_t dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse_int(item));
      continue;
    }
    const int lo = parse_int(item.substr(0, dash));
    const int hi = parse_int(item.substr(dash + 1));
    if (hi < lo) throw ParseError("empty mode range '" + item + "'");
    for (int l = lo; l <= hi; ++l) out.push_back(l);
  }
  for (int l : out)
    if (l < 0) throw ParseError("mode indices must be >= 0");
  return out;
}

int cmd_solve(const SolveOptions& o, const std::vector<std::string>& argv) {
  const auto start = Clock::now();
  auto spec = std::make_shared<const ProblemSpec>(load_config(o.config));
  const LayeredField field = solve(spec);
  const std::vector<Point> points = polar_grid(spec->dimension, spec->outer_radius(), o.grid);

  std::vector<std::string> header = {"x", "y"};
  if (spec->dimension == 3) header.push_back("z");
  for (const char* h : {"layer", "component", "value"}) header.emplace_back(h);
  CsvTable table(header);
  for (const Point& p : points) {
    const Vector v = field.evaluate(p);
    const std::size_t layer = field.layer_of(p);
    for (std::size_t c = 0; c < v.size(); ++c) {
      std::vector<std::string> row = {format_double(p.x), format_double(p.y)};
      if (spec->dimension == 3) row.push_back(format_double(p.z));
      row.push_back(std::to_string(layer));
      row.push_back(std::to_string(c + 1));
      row.push_back(format_double(v[c]));
      table.add_row(std::move(row));
    }
  }
  write_atomic(o.out, table.str());
  RunManifest m{"solve", o.config, {o.out}, {{"grid", o.grid}, {"modes", spec->data_modes()}}, argv};
  finish(o.out, std::move(m), start);
  std::cout << fmt::format("wrote {} rows to {}\n", table.row_count(), o.out);
  return kOk;
}

int cmd_check(const CheckOptions& o, const std::vector<std::string>& argv) {
  const auto start = Clock::now();
  auto spec = std::make_shared<const ProblemSpec>(load_config(o.config));
  json report;
  report["config"] = o.config;

  json violations = json::array();
  for (const Violation& v : validate(*spec).violations) violations.push_back({{"path", v.path}, {"message", v.message}});
  report["violations"] = violations;

  bool solvable = true;
  json modes = json::array();
  for (int l : spec->data_modes()) {
    const SolvabilityReport s = check_solvability(*spec, l);
    json entries = json::array();
    for (const DeterminantEntry& e : s.entries)
      entries.push_back({{"label", e.label},
                         {"determinant", e.determinant},
                         {"min_pivot_ratio", e.min_pivot_ratio},
                         {"singular", e.singular}});
    modes.push_back({{"l", l}, {"pass", s.pass}, {"entries", entries}, {"failures", s.failures}});
    solvable = solvable && s.pass;
  }
  report["solvability"] = modes;
  report["thresholds"] = {{"conditions", o.condition_threshold}, {"laplacian", o.laplacian_threshold}, {"h", o.h}};

  int code = kOk;
  if (!solvable) {
    report["pass"] = false;
    code = kSingular;
  } else {
    const LayeredField field = solve(spec);
    ResidualReport r = condition_residuals(field, *spec, o.angular_samples);
    add_laplacian_residuals(r, field, o.h, o.laplacian_samples);
    json interfaces = json::array();
    for (const InterfaceResidual& ir : r.interface_residuals)
      interfaces.push_back({{"k", ir.k}, {"j", ir.j}, {"value", ir.value}});
    report["residuals"] = {{"boundary", r.boundary_residual},
                           {"interfaces", interfaces},
                           {"laplacian", r.laplacian_residuals},
                           {"angular_samples", r.angular_samples},
                           {"laplacian_samples", r.laplacian_samples},
                           {"data_scale", r.data_scale}};
    const bool pass = r.max_condition_residual() <= o.condition_threshold * r.data_scale &&
                      r.max_laplacian_residual() <= o.laplacian_threshold * r.data_scale;
    report["pass"] = pass;
    if (!pass) code = kThreshold;
  }

  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (o.out) {
    write_atomic(*o.out, text);
    RunManifest m{"check",
                  o.config,
                  {*o.out},
                  {{"h", o.h},
                   {"laplacian_samples", o.laplacian_samples},
                   {"angular_samples", o.angular_samples},
                   {"condition_threshold", o.condition_threshold},
                   {"laplacian_threshold", o.laplacian_threshold}},
                  argv};
    finish(*o.out, std::move(m), start);
  }
  return code;
}

int cmd_demo_robin(const RobinOptions& o, const std::vector<std::string>& argv) {
  const auto start = Clock::now();
  const Matrix H = Matrix::from_rows(parse_matrix(o.H));
  const std::vector<int> modes = parse_modes(o.modes);
  const RobinTransform transform(H, {RobinQuadrature{}.points_per_unit, o.tol});
  const std::size_t m = H.rows();
  const double rho = 0.5;

  CsvTable table({"l", "row", "col", "quadrature", "oracle"});
  double worst = 0.0;
  std::cout << fmt::format("{:>4} {:>24}\n", "l", "max |quad - oracle|");
  for (int l : modes) {
    double mode_worst = 0.0;
    for (std::size_t col = 0; col < m; ++col) {
      Vector e(m, 0.0);
      e[col] = 1.0;
      const ModeSeries u{2, m, {{SurfaceMode{l, e, Vector(m, 0.0)}}}};
      const Vector q = transform.quadrature(u, {rho, 0.0, 0.0});
      const Vector exact = robin_mode_oracle(H, l, e);
      for (std::size_t row = 0; row < m; ++row) {
        const double coeff = q[row] / std::pow(rho, l);
        mode_worst = std::max(mode_worst, std::abs(coeff - exact[row]));
        table.add_row({std::to_string(l), std::to_string(row + 1), std::to_string(col + 1), format_double(coeff),
                       format_double(exact[row])});
      }
    }
    worst = std::max(worst, mode_worst);
    std::cout << fmt::format("{:>4} {:>24.3e}\n", l, mode_worst);
  }
  std::cout << fmt::format("max discrepancy {:.3e} (threshold {:.1e})\n", worst, o.threshold);
  write_atomic(o.out, table.str());
  RunManifest mf{"demo-robin",
                 "",
                 {o.out},
                 {{"H", H.to_rows()},
                  {"modes", modes},
                  {"points_per_unit", RobinQuadrature{}.points_per_unit},
                  {"tail_tol", o.tol},
                  {"sample_radius", rho}},
                 argv};
  finish(o.out, std::move(mf), start);
  return worst <= o.threshold ? kOk : kThreshold;
}

int cmd_demo_reflection(const ReflectionOptions& o, const std::vector<std::string>& argv) {
  const auto start = Clock::now();
  const Matrix K = Matrix::from_rows(parse_matrix(o.K));
  if (o.band < 0) throw ParseError("band limit must be >= 0");
  const std::size_t m = K.rows();
  ModeSeries u{2, m, {}};
  for (int l = 0; l <= o.band; ++l) u.modes.modes.push_back(demo_mode(l, m));

  const ReflectionSeries series(K, o.r, u, o.tol);
  const LayeredField p0 = apply_P0(transmission_preset(K, o.r, {}), u, o.band);

  std::vector<std::pair<int, std::pair<ReflectionModes, ReflectionModes>>> oracle;
  for (const SurfaceMode& mode : u.modes.modes)
    oracle.push_back({mode.l, {reflection_mode_oracle(K, o.r, mode.l, mode.cos),
                               reflection_mode_oracle(K, o.r, mode.l, mode.sin)}});
  const auto oracle_value = [&](const Point& p) {
    const double rho = norm(p, 2);
    const double theta = polar_angle(p, 2);
    Vector v(m, 0.0);
    for (const auto& [l, pair] : oracle) {
      const double c = std::cos(l * theta), s = std::sin(l * theta);
      for (const auto& [modes, w] : {std::pair{&pair.first, c}, std::pair{&pair.second, s}}) {
        if (rho < o.r) {
          v = v + (w * std::pow(rho, l)) * modes->a;
        } else if (l == 0) {
          v = v + w * (modes->b + std::log(rho) * modes->d);
        } else {
          v = v + (w * std::pow(rho, l)) * modes->b + (w * std::pow(rho, -l)) * modes->d;
        }
      }
    }
    return v;
  };

  CsvTable table({"x", "y", "component", "series", "oracle", "p0"});
  double vs_oracle = 0.0, vs_p0 = 0.0;
  for (const Point& p : polar_grid(2, 1.0, o.grid)) {
    const Vector a = series.evaluate(p);
    const Vector b = oracle_value(p);
    const Vector c = p0.evaluate(p);
    vs_oracle = std::max(vs_oracle, max_abs(a - b));
    vs_p0 = std::max(vs_p0, max_abs(a - c));
    for (std::size_t i = 0; i < m; ++i)
      table.add_row({format_double(p.x), format_double(p.y), std::to_string(i + 1), format_double(a[i]),
                     format_double(b[i]), format_double(c[i])});
  }
  constexpr double kOracleThreshold = 1e-9;
  constexpr double kP0Threshold = 1e-8;
  std::cout << fmt::format("depth {}\nspectral radius bound {:.6g}\nq {:.6g}\n", series.depth(),
                           series.spectral_radius(), series.q());
  std::cout << fmt::format("max |series - oracle| {:.3e} (threshold {:.0e})\n", vs_oracle, kOracleThreshold);
  std::cout << fmt::format("max |series - P0|     {:.3e} (threshold {:.0e})\n", vs_p0, kP0Threshold);
  write_atomic(o.out, table.str());
  RunManifest mf{"demo-reflection",
                 "",
                 {o.out},
                 {{"K", K.to_rows()},
                  {"r", o.r},
                  {"band", o.band},
                  {"tol", o.tol},
                  {"grid", o.grid},
                  {"depth", series.depth()}},
                 argv};
  finish(o.out, std::move(mf), start);
  return vs_oracle <= kOracleThreshold && vs_p0 <= kP0Threshold ? kOk : kThreshold;
}

int cmd_axis_roundtrip(const AxisOptions& o, const std::vector<std::string>& argv) {
  const auto start = Clock::now();
  const AxisSpec spec = load_axis_config(o.config);
  if (o.samples < 2 || !(o.half_width > 0.0) || !(o.sigma > 0.0)) throw ParseError("invalid sampling parameters");
  InverseNormalization norm_kind;
  if (o.normalization == "spectral") {
    norm_kind = InverseNormalization::kSpectral;
  } else if (o.normalization == "printed") {
    norm_kind = InverseNormalization::kPrinted;
  } else {
    throw ParseError("normalization must be 'spectral' or 'printed'");
  }
  const AxisGrid grid{o.half_width, static_cast<std::size_t>(o.samples)};
  const std::vector<double> xs = grid.points();
  ComplexVector f_hat(xs.size(), 0.0);
  if (o.function == "gaussian") {
    for (std::size_t i = 0; i < xs.size(); ++i)
      f_hat[i] = std::exp(-(xs[i] - o.shift) * (xs[i] - o.shift) / (2 * o.sigma * o.sigma));
  } else if (o.function != "zero") {
    throw ParseError("function must be 'gaussian' or 'zero'");
  }
  const AxisQuadrature quad = default_axis_quadrature(o.sigma, o.half_width);
  const AxisRoundTrip rt = axis_roundtrip(spec, xs, f_hat, quad, norm_kind);

  CsvTable table({"x", "f_hat_re", "f_hat_im", "back_re", "back_im"});
  for (std::size_t i = 0; i < xs.size(); ++i)
    table.add_row({format_double(xs[i]), format_double(f_hat[i].real()), format_double(f_hat[i].imag()),
                   format_double(rt.f_hat_back[i].real()), format_double(rt.f_hat_back[i].imag())});
  std::cout << fmt::format("L2 round-trip error {:.3e} (threshold {:.1e})\n", rt.error, o.threshold);
  write_atomic(o.out, table.str());
  RunManifest mf{"axis-roundtrip",
                 o.config,
                 {o.out},
                 {{"function", o.function},
                  {"sigma", o.sigma},
                  {"shift", o.shift},
                  {"half_width", o.half_width},
                  {"samples", o.samples},
                  {"lambda_max", quad.lambda_max},
                  {"d_lambda", quad.d_lambda},
                  {"normalization", o.normalization}},
                 argv};
  finish(o.out, std::move(mf), start);
  return rt.error <= o.threshold ? kOk : kThreshold;
}

int cmd_kernel(const KernelOptions& o, const std::vector<std::string>& argv) {
  const auto start = Clock::now();
  const ProblemSpec spec = load_config(o.config);
  KernelConvention convention;
  if (o.convention == "standard") {
    convention = KernelConvention::kStandard;
  } else if (o.convention == "gegenbauer" || o.convention == "paper") {
    convention = KernelConvention::kGegenbauer;
  } else {
    throw ParseError("convention must be 'standard' or 'gegenbauer' (alias 'paper')");
  }
  const Source source = o.source == "boundary" ? Source::boundary()
                                               : Source::interface(static_cast<std::size_t>(parse_int(o.source)));
  if (o.samples < 2) throw ParseError("need at least two samples");
  const ZonalKernel kernel(spec, static_cast<std::size_t>(o.layer), source, o.r, o.band);

  std::vector<std::string> header = {"t"};
  const std::size_t m = spec.components;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < 2 * m; ++j) header.push_back(fmt::format("h{}_{}", i + 1, j + 1));
  header.emplace_back("tail_ratio");
  CsvTable table(header);
  bool converged = true;
  for (int s = 0; s < o.samples; ++s) {
    const double t = -1.0 + 2.0 * s / (o.samples - 1);
    const KernelValue v = kernel(t, convention);
    converged = converged && v.converged;
    std::vector<std::string> row = {format_double(t)};
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < 2 * m; ++j) row.push_back(format_double(v.value(i, j)));
    row.push_back(format_double(v.tail_ratio));
    table.add_row(std::move(row));
  }
  std::cout << fmt::format("band limit {}, series {}\n", o.band, converged ? "converged" : "NOT converged");
  write_atomic(o.out, table.str());
  RunManifest mf{"kernel",
                 o.config,
                 {o.out},
                 {{"layer", o.layer},
                  {"source", o.source},
                  {"r", o.r},
                  {"band", o.band},
                  {"samples", o.samples},
                  {"convention", o.convention}},
                 argv};
  finish(o.out, std::move(mf), start);
  return converged ? kOk : kThreshold;
}

}  // namespace lamharm::cli
