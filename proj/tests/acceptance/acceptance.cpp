// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.
//
//   lamharm_acceptance --cli PATH --configs DIR [--only N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "generators.hpp"
#include "lamharm/axis.hpp"
#include "lamharm/config.hpp"
#include "lamharm/errors.hpp"
#include "lamharm/field.hpp"
#include "lamharm/radial.hpp"
#include "lamharm/spectral.hpp"
#include "lamharm/transform.hpp"
#include "lamharm/verify.hpp"

using namespace lamharm;
namespace fs = std::filesystem;
using lamharm::testing::random_series;
using lamharm::testing::random_spd;
using lamharm::testing::random_spec;
using lamharm::testing::spec_shape;

namespace {

// Pinned tolerances.
constexpr double kOracleTol = 1e-9;
constexpr double kOracleSeconds = 5.0;
constexpr double kConditionTol = 1e-8;
constexpr double kLaplacianTol = 1e-4;
constexpr double kLaplacianStep = 1e-3;
constexpr double kSlopeTarget = 2.0;
constexpr double kSlopeTol = 0.3;
constexpr double kRobinTol = 1e-8;
constexpr double kRobinSeconds = 2.0;
constexpr double kReflectionTol = 1e-9;
constexpr double kReflectionRadius = 0.8;
constexpr double kReflectionSeconds = 2.0;
constexpr double kKernelTol2 = 1e-8;
constexpr double kKernelTol3 = 1e-6;
constexpr int kKernelBand = 200;
constexpr double kAxisHomogeneousTol = 1e-3;
constexpr double kAxisInterfaceTol = 1e-2;
constexpr double kCouplingTol = 1e-12;
constexpr double kAxisSeconds = 5.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

double max_abs_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------------------
// 1

double oracle_discrepancy(const ProblemSpec& spec, std::mt19937_64& rng, int max_l, int* checks) {
  double worst = 0.0;
  for (int l = 0; l <= max_l; ++l) {
    const ModeData data = lamharm::testing::random_mode_data(rng, spec);
    const ModeSolution direct = solve_mode(spec, l, data);
    const ModeSolution via = mode_solution_via_hstar(spec, propagate_pairs(spec, l), data);
    worst = std::max(worst, coefficient_discrepancy(spec, via, direct));
    ++*checks;
  }
  return worst;
}

Outcome criterion_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  int checks = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 3;
    const int n = trial % 4;
    const int dim = 2 + (trial / 4) % 2;
    const ProblemSpec spec = random_spec(rng, spec_shape(m, n, dim));
    worst = std::max(worst, oracle_discrepancy(spec, rng, 20, &checks));
  }
  const double t = seconds_since(t0);
  return {worst <= kOracleTol && t < kOracleSeconds,
          "20 specs, " + std::to_string(checks) + " modes, max discrepancy " + sci(worst) + " (tol " +
              sci(kOracleTol) + "), " + sci(t) + " s (limit " + sci(kOracleSeconds) + ")"};
}

// ---------------------------------------------------------------------------
// 2

// Residuals are judged against tol * data_scale, the convention of the CLI check.
struct ContractResult {
  double condition = 0.0;
  double laplacian = 0.0;
  double scale = 1.0;
  double slope = 0.0;
};

ContractResult field_contract(const LayeredField& f) {
  ContractResult out;
  const ResidualReport r = condition_residuals(f, f.spec());
  out.condition = r.max_condition_residual();
  out.scale = r.data_scale;
  const std::vector<double> hs = {4e-3, 2e-3, kLaplacianStep};
  std::vector<double> lap;
  for (double h : hs) {
    double worst = 0.0;
    for (std::size_t k = 1; k <= f.spec().layer_count(); ++k) worst = std::max(worst, laplacian_residual(f, k, h));
    lap.push_back(worst);
  }
  out.laplacian = lap.back();
  out.slope = loglog_slope(hs, lap);
  return out;
}

bool contract_ok(const ContractResult& c) {
  return c.condition <= kConditionTol * c.scale && c.laplacian <= kLaplacianTol * c.scale &&
         std::abs(c.slope - kSlopeTarget) <= kSlopeTol;
}

struct ContractSummary {
  ContractResult worst;
  double slope_lo = 1e300;
  double slope_hi = -1e300;
  double worst_scaled = 0.0;
  bool ok = true;
  int fields = 0;

  void record(const ContractResult& c) {
    ok = ok && contract_ok(c);
    worst.condition = std::max(worst.condition, c.condition);
    worst.laplacian = std::max(worst.laplacian, c.laplacian);
    worst_scaled = std::max(worst_scaled, c.laplacian / c.scale);
    slope_lo = std::min(slope_lo, c.slope);
    slope_hi = std::max(slope_hi, c.slope);
    ++fields;
  }

  void record_all(const ProblemSpec& spec, const ModeSeries& u) {
    record(field_contract(apply_P0(spec, u)));
    for (std::size_t q = 1; q <= spec.interface_count(); ++q)
      for (int j = 1; j <= 2; ++j) record(field_contract(apply_Pjq(spec, j, q, u)));
  }

  std::string str() const {
    return std::to_string(fields) + " fields, condition " + sci(worst.condition) + " (tol " + sci(kConditionTol) +
           "), laplacian@1e-3 " + sci(worst.laplacian) + " raw, " + sci(worst_scaled) +
           " / data_scale (tol " + sci(kLaplacianTol) + "), slope [" +
           sci(slope_lo) + ", " + sci(slope_hi) + "] (2 +- 0.3)";
  }
};

// Inputs are band-8 harmonic polynomials on every preset config. Random
// layered specs are reported alongside: thin inner layers carrying interface
// data have large fourth derivatives, so the stencil truncation error there
// can pass the absolute bound even though the conditions hold exactly.
Outcome criterion_contract(const fs::path& configs) {
  std::mt19937_64 rng(77);
  ContractSummary sum;
  for (const char* name : {"dirichlet", "transparent", "robin", "transmission", "zonal3d", "log_mode"}) {
    const ProblemSpec spec = load_config(configs / (std::string(name) + ".json"));
    sum.record_all(spec, random_series(rng, spec.dimension, spec.components, 8));
  }
  for (int band : {4, 6}) {
    std::mt19937_64 spec_rng(78);
    ContractSummary random;
    for (int trial = 0; trial < 4; ++trial) {
      const int dim = 2 + trial % 2;
      const ProblemSpec spec = random_spec(spec_rng, spec_shape(1 + trial % 2, 1 + trial % 2, dim));
      random.record_all(spec, random_series(spec_rng, dim, spec.components, band));
    }
    std::cout << "  note: random specs, band " << band << ": " << random.str() << "\n";
  }
  return {sum.ok, "presets, band 8: " + sum.str()};
}

// ---------------------------------------------------------------------------
// 3

// Scalar u(x) = int_0^1 eps^{h-1} u_hat(eps x) d eps with eps = t^q, where
// q h is an integer so the integrand is a polynomial in t.
double direct_robin_integral(double h, int q, const ModeSeries& u, const Point& x) {
  const QuadratureRule g = gauss_legendre(64, 0.0, 1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double t = g.nodes[i];
    const double eps = std::pow(t, q);
    const double jac = q * std::pow(t, q * h - 1.0);
    acc += g.weights[i] * jac * u.evaluate({eps * x.x, eps * x.y, eps * x.z})[0];
  }
  return acc;
}

Outcome criterion_robin() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(303);
  double worst = 0.0;
  const std::vector<Matrix> hs = {Matrix::from_rows({{0.5, 0, 0}, {0, 1.5, 0}, {0, 0, 4}}),
                                  Matrix::from_rows({{2, 1}, {1, 2}}), random_spd(rng, 3, 0.4, 3.0)};
  const std::vector<Point> pts = random_points(2, 12, 0.95, 41);
  for (const Matrix& H : hs) {
    const RobinTransform t(H);
    const ModeSeries u = random_series(rng, 2, H.rows(), 10);
    const ModeSeries a = t.analytic(u);
    // Analytic path against the per-mode oracle.
    for (const SurfaceMode& mode : u.modes.modes) {
      const SurfaceMode* img = a.modes.find(mode.l);
      worst = std::max(worst, max_abs_diff(img->cos, robin_mode_oracle(H, mode.l, mode.cos)));
      worst = std::max(worst, max_abs_diff(img->sin, robin_mode_oracle(H, mode.l, mode.sin)));
    }
    for (const Point& p : pts) worst = std::max(worst, max_abs_diff(t.quadrature(u, p), a.evaluate(p)));
  }
  // Scalar case: quadrature path against an independent 1-D integral.
  const std::vector<std::pair<double, int>> scalar = {{0.5, 2}, {1.0, 1}, {2.5, 2}};
  for (const auto& [h, q] : scalar) {
    const RobinTransform t(Matrix::from_rows({{h}}));
    const ModeSeries u = random_series(rng, 2, 1, 10);
    const PointSampler s{2, 1, [&](const Point& p) { return u.evaluate(p); }};
    for (const Point& p : pts) worst = std::max(worst, std::abs(t.evaluate(s, p)[0] - direct_robin_integral(h, q, u, p)));
  }
  const double t = seconds_since(t0);
  return {worst <= kRobinTol && t < kRobinSeconds,
          "diag/2x2/3x3 H, l <= 10, scalar 1-D integral, max error " + sci(worst) + " (tol " + sci(kRobinTol) +
              "), " + sci(t) + " s (limit " + sci(kRobinSeconds) + ")"};
}

// ---------------------------------------------------------------------------
// 4

Vector reflection_oracle_value(const Matrix& K, double r, const ModeSeries& u, const Point& x) {
  const double rho = std::hypot(x.x, x.y);
  const double theta = std::atan2(x.y, x.x);
  Vector out(u.components, 0.0);
  for (const SurfaceMode& mode : u.modes.modes) {
    const int l = mode.l;
    for (int part = 0; part < 2; ++part) {
      const Vector& c = part == 0 ? mode.cos : mode.sin;
      if (c.empty()) continue;
      const double ang = part == 0 ? std::cos(l * theta) : std::sin(l * theta);
      const ReflectionModes m = reflection_mode_oracle(K, r, l, c);
      for (std::size_t i = 0; i < u.components; ++i) {
        double v;
        if (rho < r) {
          v = std::pow(rho, l) * m.a[i];
        } else if (l == 0) {
          v = m.b[i] + std::log(rho) * m.d[i];
        } else {
          v = std::pow(rho, l) * m.b[i] + std::pow(rho, -l) * m.d[i];
        }
        out[i] += v * ang;
      }
    }
  }
  return out;
}

Outcome criterion_reflection() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(404);
  double worst = 0.0, worst_rho = 0.0;
  const std::vector<Point> pts = random_points(2, 40, 1.0, 43);
  for (std::size_t m = 1; m <= 3; ++m)
    for (double r : {0.3, 0.5, 0.7}) {
      Matrix K;
      double rho = 1.0;
      while (rho > kReflectionRadius) {
        K = random_spd(rng, m, 0.2, 4.0);
        rho = ReflectionSeries(K, r, ModeSeries{2, m, {}}).spectral_radius();
      }
      worst_rho = std::max(worst_rho, rho);
      const ModeSeries u = random_series(rng, 2, m, 8);
      const ReflectionSeries series(K, r, u);
      for (const Point& p : pts)
        worst = std::max(worst, max_abs_diff(series.evaluate(p), reflection_oracle_value(K, r, u, p)));
    }
  // K = E is the identity map.
  double identity = 0.0;
  {
    const ModeSeries u = random_series(rng, 2, 2, 8);
    const ReflectionSeries clear(Matrix::identity(2), 0.5, u);
    for (const Point& p : pts) identity = std::max(identity, max_abs_diff(clear.evaluate(p), u.evaluate(p)));
  }
  bool diverges = false;
  try {
    ReflectionSeries(Matrix::from_rows({{1.0, 0.0}, {0.0, -0.5}}), 0.5, ModeSeries{2, 2, {}});
  } catch (const DivergenceError&) {
    diverges = true;
  }
  const double t = seconds_since(t0);
  const bool ok = worst <= kReflectionTol && identity <= 1e-15 && diverges && t < kReflectionSeconds;
  return {ok, "m = 1..3, r in {0.3, 0.5, 0.7}, band 8, rho(Q) <= " + sci(worst_rho) + ", max error " + sci(worst) +
                  " (tol " + sci(kReflectionTol) + "), K = E error " + sci(identity) + ", DivergenceError " +
                  (diverges ? "raised" : "missing") + ", " + sci(t) + " s (limit " + sci(kReflectionSeconds) +
                  ")"};
}

// ---------------------------------------------------------------------------
// 5

double poisson(int dim, double r, double t) {
  const double q = 1 - 2 * r * t + r * r;
  if (dim == 2) return (1 - r * r) / (2 * std::numbers::pi * q);
  return (1 - r * r) / (4 * std::numbers::pi * q * std::sqrt(q));
}

double kernel_error(int dim, KernelConvention convention) {
  const ProblemSpec spec = dirichlet_preset(1, {1.0}, {}, dim);
  double worst = 0.0;
  for (double r : {0.1, 0.3, 0.5, 0.7, 0.8, 0.9}) {
    const ZonalKernel k(spec, 1, Source::boundary(), r, kKernelBand);
    for (int i = 0; i <= 40; ++i) {
      const double t = -1.0 + i / 20.0;
      worst = std::max(worst, std::abs(k(t, convention).value(0, 1) - poisson(dim, r, t)));
    }
  }
  return worst;
}

Outcome criterion_kernel() {
  const double e2 = kernel_error(2, KernelConvention::kStandard);
  const double e3 = kernel_error(3, KernelConvention::kStandard);
  const double p2 = kernel_error(2, KernelConvention::kGegenbauer);
  const double p3 = kernel_error(3, KernelConvention::kGegenbauer);
  std::cout << "  note: rejected (2l+N-1)/(N-1) C_l^{(N-1)/2} weights give sup error " << sci(p2) << " (N = 2), "
            << sci(p3) << " (N = 3)\n";
  const bool rejected_fails = p2 > kKernelTol2 && p3 > kKernelTol3;
  return {e2 <= kKernelTol2 && e3 <= kKernelTol3 && rejected_fails,
          "standard weights, L = 200, rho <= 0.9: N = 2 sup " + sci(e2) + " (tol " + sci(kKernelTol2) +
              "), N = 3 sup " + sci(e3) + " (tol " + sci(kKernelTol3) + "), rejected convention " +
              (rejected_fails ? "fails" : "does not fail")};
}

// ---------------------------------------------------------------------------
// 6

Outcome criterion_log_mode(const fs::path& configs) {
  const ProblemSpec spec = load_config(configs / "log_mode.json");
  std::mt19937_64 rng(606);
  int checks = 0;
  const double oracle = oracle_discrepancy(spec, rng, 20, &checks);
  const ContractResult solved = field_contract(solve(spec));
  const ContractResult p0 = field_contract(apply_P0(spec, random_series(rng, 2, spec.components, 6)));
  bool singular_without = false;
  try {
    RadialOptions naive;
    naive.log_basis_for_degenerate_mode = false;
    solve_mode(spec, 0, mode_data(spec, 0), naive);
  } catch (const SingularMatrix&) {
    singular_without = true;
  }
  const bool ok = spec.dimension == 2 && spec.layer_count() == 2 && oracle <= kOracleTol && contract_ok(solved) &&
                  contract_ok(p0) && singular_without;
  return {ok, "log_mode.json: oracle " + sci(oracle) + ", condition " + sci(std::max(solved.condition, p0.condition)) +
                  ", laplacian " + sci(std::max(solved.laplacian, p0.laplacian)) + ", slopes " + sci(solved.slope) +
                  "/" + sci(p0.slope) + ", r^0 basis " + (singular_without ? "singular" : "NOT singular")};
}

// ---------------------------------------------------------------------------
// 7

ComplexVector gaussian(const std::vector<double>& xs, double sigma, double shift) {
  ComplexVector f;
  for (double x : xs) f.push_back(std::exp(-(x - shift) * (x - shift) / (2 * sigma * sigma)));
  return f;
}

Outcome criterion_axis(const fs::path& configs) {
  const auto t0 = Clock::now();
  const std::vector<double> xs = AxisGrid{}.points();
  const AxisQuadrature quad = default_axis_quadrature(0.5, AxisGrid{}.half_width);
  const double homogeneous =
      axis_roundtrip(load_axis_config(configs / "axis_homogeneous.json"), xs, gaussian(xs, 0.5, 0.0), quad).error;
  const AxisSpec single = load_axis_config(configs / "axis_interface.json");
  double interface = 0.0;
  for (double shift : {0.0, 1.0, -1.0})
    interface = std::max(interface, axis_roundtrip(single, xs, gaussian(xs, 0.5, shift), quad).error);

  AxisSpec multi{{-1.0, 0.5, 2.0}, {1.0, 2.5, 0.7, 1.6}, {}};
  for (double k : {3.0, 0.4, 1.7}) {
    AxisCoupling c = AxisCoupling::continuity();
    c.side2[1] = {k, 0.0};
    multi.couplings.push_back(c);
  }
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> lam(-60.0, 60.0);
  double coupling = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double l = lam(rng);
    for (AxisKind kind : {AxisKind::kDirect, AxisKind::kAdjoint}) {
      coupling = std::max(coupling, coupling_residual(multi, eigenfunction(multi, l, kind)));
      coupling = std::max(coupling, coupling_residual(single, eigenfunction(single, l, kind)));
    }
  }
  const double t = seconds_since(t0);
  const bool ok = homogeneous <= kAxisHomogeneousTol && interface <= kAxisInterfaceTol && coupling <= kCouplingTol &&
                  t < kAxisSeconds;
  return {ok, "homogeneous " + sci(homogeneous) + " (tol " + sci(kAxisHomogeneousTol) + "), single interface " +
                  sci(interface) + " (tol " + sci(kAxisInterfaceTol) + "), coupling residual " + sci(coupling) +
                  " over 50 lambda (tol " + sci(kCouplingTol) + "), " + sci(t) + " s (limit " + sci(kAxisSeconds) +
                  ")"};
}

// ---------------------------------------------------------------------------
// 8

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

int run(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_cli(const fs::path& cli, const fs::path& configs) {
  const fs::path dir = fs::temp_directory_path() / ("lamharm_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::vector<std::string> problems;
  int checked = 0;
  for (const auto& entry : fs::directory_iterator(configs)) {
    const fs::path cfg = entry.path();
    if (cfg.extension() != ".json" || cfg.filename().string().rfind("axis", 0) == 0) continue;
    ++checked;
    const std::string name = cfg.stem().string();
    const fs::path a = dir / (name + "_a.json"), b = dir / (name + "_b.json");
    const int ea = run(quote(cli) + " check --config " + quote(cfg) + " --out " + quote(a));
    const int eb = run(quote(cli) + " check --config " + quote(cfg) + " --out " + quote(b));
    if (ea != 0 || eb != 0) problems.push_back(name + " exit " + std::to_string(ea) + "/" + std::to_string(eb));
    if (slurp(a) != slurp(b) || slurp(a).empty()) problems.push_back(name + " check report differs");

    const fs::path csv = dir / (name + ".csv");
    if (run(quote(cli) + " solve --config " + quote(cfg) + " --grid 6x12 --out " + quote(csv)) != 0) {
      problems.push_back(name + " solve failed");
      continue;
    }
    const std::string first = slurp(csv);
    if (run(quote(cli) + " rerun --manifest " + quote(fs::path(csv.string() + ".manifest.json"))) != 0 ||
        slurp(csv) != first || first.empty())
      problems.push_back(name + " rerun output differs");
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  std::string detail = std::to_string(checked) + " configs: check exit 0, reports and solve CSVs byte-identical on rerun";
  if (!problems.empty()) {
    detail = "problems:";
    for (const auto& p : problems) detail += " [" + p + "]";
  }
  return {problems.empty() && checked > 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path cli, configs;
  std::size_t only = 0;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--cli") cli = argv[i + 1];
    if (key == "--configs") configs = argv[i + 1];
    if (key == "--only") only = std::stoul(argv[i + 1]);
  }
  if (cli.empty() || configs.empty()) {
    std::cerr << "usage: lamharm_acceptance --cli PATH --configs DIR [--only N]\n";
    return 2;
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", criterion_oracle},
      {"P0/Pjq condition and Laplacian contract", [&] { return criterion_contract(configs); }},
      {"Robin transform", criterion_robin},
      {"reflection series", criterion_reflection},
      {"kernel convention", criterion_kernel},
      {"degenerate log mode", [&] { return criterion_log_mode(configs); }},
      {"axis round trip", [&] { return criterion_axis(configs); }},
      {"CLI end to end", [&] { return criterion_cli(cli, configs); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
