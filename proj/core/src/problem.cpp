#include "lamharm/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "lamharm/errors.hpp"
#include "lamharm/radial.hpp"

namespace lamharm {

namespace {

void check_matrix(const Matrix& a, std::size_t m, const std::string& path) {
  if (a.rows() != m || a.cols() != m) {
    throw ValidationError(path, "expected a " + std::to_string(m) + "x" + std::to_string(m) + " matrix");
  }
  if (!a.all_finite()) throw ValidationError(path, "non-finite entry");
}

void check_op(const RadialBoundaryOp& op, std::size_t m, const std::string& path) {
  check_matrix(op.A, m, path + ".A");
  check_matrix(op.B, m, path + ".B");
}

void check_data(const SurfaceData& data, const ProblemSpec& spec, const std::string& path) {
  std::set<int> seen;
  for (std::size_t i = 0; i < data.modes.size(); ++i) {
    const SurfaceMode& mode = data.modes[i];
    const std::string p = path + ".modes[" + std::to_string(i) + "]";
    if (mode.l < 0) throw ValidationError(p + ".l", "mode index must be >= 0");
    if (!seen.insert(mode.l).second) throw ValidationError(p + ".l", "duplicate mode index");
    if (mode.cos.size() != spec.components) throw ValidationError(p, "coefficient length must equal components");
    if (spec.dimension == 2) {
      if (mode.sin.size() != spec.components) throw ValidationError(p + ".sin", "coefficient length must equal components");
      if (mode.l == 0 && max_abs(mode.sin) != 0.0) throw ValidationError(p + ".sin", "sin coefficient of l = 0 must be zero");
    } else if (!mode.sin.empty()) {
      throw ValidationError(p + ".sin", "zonal data has no sin coefficients");
    }
    const auto finite = [](const Vector& v) {
      return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(mode.cos) || !finite(mode.sin)) throw ValidationError(p, "non-finite coefficient");
  }
}

}  // namespace

RadialBoundaryOp RadialBoundaryOp::dirichlet(std::size_t m) {
  return {Matrix::zeros(m, m), Matrix::identity(m)};
}

RadialBoundaryOp RadialBoundaryOp::value(const Matrix& b) {
  return {Matrix::zeros(b.rows(), b.cols()), b};
}

RadialBoundaryOp RadialBoundaryOp::flux(const Matrix& k, double r) {
  return {k * (1.0 / r), Matrix::zeros(k.rows(), k.cols())};
}

const SurfaceMode* SurfaceData::find(int l) const {
  for (const SurfaceMode& m : modes)
    if (m.l == l) return &m;
  return nullptr;
}

int SurfaceData::max_mode() const {
  int best = -1;
  for (const SurfaceMode& m : modes) best = std::max(best, m.l);
  return best;
}

std::size_t ProblemSpec::layer_of(double r) const {
  if (r < 0.0) throw DomainError("negative radius");
  // Interface radius r_k belongs to the outer layer k.
  for (std::size_t k = 1; k <= interface_count(); ++k)
    if (r >= radii[k]) return k;
  return layer_count();
}

std::vector<int> ProblemSpec::data_modes() const {
  std::set<int> modes;
  for (const SurfaceMode& m : boundary_data.modes) modes.insert(m.l);
  for (const InterfaceData& d : interface_data) {
    for (const SurfaceMode& m : d.first.modes) modes.insert(m.l);
    for (const SurfaceMode& m : d.second.modes) modes.insert(m.l);
  }
  return {modes.begin(), modes.end()};
}

void check_structure(const ProblemSpec& spec) {
  if (spec.dimension != 2 && spec.dimension != 3) throw ValidationError("dimension", "must be 2 or 3");
  if (spec.components < 1) throw ValidationError("components", "must be >= 1");
  if (spec.radii.empty()) throw ValidationError("radii", "at least the outer radius is required");
  for (std::size_t i = 0; i < spec.radii.size(); ++i) {
    const double r = spec.radii[i];
    if (!(r > 0.0 && r <= 1.0)) throw ValidationError("radii[" + std::to_string(i) + "]", "radius must lie in (0, 1]");
    if (i > 0 && !(r < spec.radii[i - 1])) throw ValidationError("radii", "radii must be strictly decreasing");
  }
  const std::size_t n = spec.radii.size() - 1;
  if (spec.interfaces.size() != n) throw ValidationError("interfaces", "need one interface per inner radius");
  if (spec.interface_data.size() != n) throw ValidationError("interfaces", "need one data pair per interface");

  const std::size_t m = spec.components;
  check_op(spec.boundary, m, "boundary");
  for (std::size_t k = 0; k < n; ++k) {
    const std::string p = "interfaces[" + std::to_string(k) + "]";
    for (int j = 0; j < 2; ++j) {
      check_op(spec.interfaces[k].outer_side[j], m, p + ".j1[" + std::to_string(j) + "]");
      check_op(spec.interfaces[k].inner_side[j], m, p + ".j2[" + std::to_string(j) + "]");
    }
    check_data(spec.interface_data[k].first, spec, p + ".data1");
    check_data(spec.interface_data[k].second, spec, p + ".data2");
  }
  check_data(spec.boundary_data, spec, "boundary.data");
}

ValidationReport validate(const ProblemSpec& spec) {
  ValidationReport report;
  try {
    check_structure(spec);
  } catch (const ValidationError& e) {
    report.violations.push_back({e.path(), e.what()});
    return report;
  }
  if (spec.boundary.degenerate()) {
    report.violations.push_back({"boundary", "degenerate boundary operator (A = B = 0)"});
  }
  for (std::size_t k = 0; k < spec.interface_count(); ++k)
    for (int j = 0; j < 2; ++j) {
      if (spec.interfaces[k].outer_side[j].degenerate() && spec.interfaces[k].inner_side[j].degenerate()) {
        report.violations.push_back({"interfaces[" + std::to_string(k) + "]",
                                     "degenerate conjugation condition " + std::to_string(j + 1)});
      }
    }
  if (!report.ok()) return report;

  for (int l : spec.data_modes()) {
    const SolvabilityReport s = check_solvability(spec, l);
    for (const std::string& f : s.failures) report.violations.push_back({"mode l=" + std::to_string(l), f});
  }
  return report;
}

std::vector<InterfaceData> zero_interface_data(std::size_t n) { return std::vector<InterfaceData>(n); }

ProblemSpec dirichlet_preset(std::size_t m, Vector radii, SurfaceData data, int dimension) {
  if (radii.empty()) throw DomainError("dirichlet_preset needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] <= 1.0) || (i > 0 && !(radii[i] < radii[i - 1])))
      throw DomainError("dirichlet_preset: radii must be strictly decreasing in (0, 1]");
  }
  ProblemSpec spec;
  spec.dimension = dimension;
  spec.components = m;
  spec.radii = std::move(radii);
  spec.boundary = RadialBoundaryOp::dirichlet(m);
  const Matrix eye = Matrix::identity(m);
  for (std::size_t k = 1; k < spec.radii.size(); ++k) {
    const double r = spec.radii[k];
    InterfacePair pair{{RadialBoundaryOp::value(eye), RadialBoundaryOp::flux(eye, r)},
                       {RadialBoundaryOp::value(eye), RadialBoundaryOp::flux(eye, r)}};
    spec.interfaces.push_back(pair);
  }
  spec.interface_data = zero_interface_data(spec.interfaces.size());
  spec.boundary_data = std::move(data);
  check_structure(spec);
  return spec;
}

ProblemSpec robin_preset(const Matrix& H, SurfaceData data, int dimension) {
  if (!H.is_square() || H.empty()) throw DimensionError("robin_preset: H must be square");
  ProblemSpec spec;
  spec.dimension = dimension;
  spec.components = H.rows();
  spec.radii = {1.0};
  spec.boundary = {Matrix::identity(H.rows()), H};
  spec.boundary_data = std::move(data);
  check_structure(spec);
  return spec;
}

ProblemSpec transmission_preset(const Matrix& K, double r, SurfaceData data, int dimension) {
  if (!K.is_square() || K.empty()) throw DimensionError("transmission_preset: K must be square");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("transmission_preset: interface radius must lie in (0, 1)");
  const std::size_t m = K.rows();
  const Matrix eye = Matrix::identity(m);
  ProblemSpec spec;
  spec.dimension = dimension;
  spec.components = m;
  spec.radii = {1.0, r};
  spec.boundary = RadialBoundaryOp::dirichlet(m);
  spec.interfaces.push_back({{RadialBoundaryOp::value(eye), RadialBoundaryOp::flux(K, r)},
                             {RadialBoundaryOp::value(eye), RadialBoundaryOp::flux(eye, r)}});
  spec.interface_data = zero_interface_data(1);
  spec.boundary_data = std::move(data);
  check_structure(spec);
  return spec;
}

}  // namespace lamharm
