#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "lamharm/matrix.hpp"

namespace lamharm {

/// Radial operator A * (r d/dr) + B. Operators of this form commute with the
/// Euler operator sum_i x_i d/dx_i, and act on a radial power as
/// Gamma[r^e P] = (A e + B) r^e P.
struct RadialBoundaryOp {
  Matrix A;
  Matrix B;

  std::size_t dim() const { return B.rows(); }
  bool degenerate() const { return A.max_abs() == 0.0 && B.max_abs() == 0.0; }
  bool operator==(const RadialBoundaryOp&) const = default;

  static RadialBoundaryOp dirichlet(std::size_t m);
  /// Value continuity / trace operator scaled by `b`: A = 0, B = b.
  static RadialBoundaryOp value(const Matrix& b);
  /// Normal derivative d/dr at radius r weighted by `k`: A = k / r, B = 0.
  static RadialBoundaryOp flux(const Matrix& k, double r);
};

/// Conjugation operators on one interface sphere S_k. `outer_side[j]` acts on
/// the outer layer u_k and `inner_side[j]` on the inner layer u_{k+1} for
/// condition j = 0, 1:
///   outer_side[j][u_k] - inner_side[j][u_{k+1}] = f_{j+1,k}.
struct InterfacePair {
  std::array<RadialBoundaryOp, 2> outer_side;
  std::array<RadialBoundaryOp, 2> inner_side;

  bool operator==(const InterfacePair&) const = default;
};

/// One angular mode of band-limited surface data.
/// N = 2: f(theta) contribution cos(l theta) * cos + sin(l theta) * sin.
/// N = 3 (zonal): P_l(cos theta) * cos; `sin` stays empty.
struct SurfaceMode {
  int l = 0;
  Vector cos;
  Vector sin;

  bool operator==(const SurfaceMode&) const = default;
};

struct SurfaceData {
  std::vector<SurfaceMode> modes;

  bool empty() const { return modes.empty(); }
  const SurfaceMode* find(int l) const;
  int max_mode() const;
  bool operator==(const SurfaceData&) const = default;
};

struct InterfaceData {
  SurfaceData first;   // f_{1k}
  SurfaceData second;  // f_{2k}

  bool operator==(const InterfaceData&) const = default;
};

/// Layered ball problem: n + 1 concentric layers V_k = {r_k < |x| < r_{k-1}},
/// k = 1..n+1, with r_{n+1} = 0. Layers and interfaces are 1-based in every
/// public API taking an index (layer 1 is outermost, interface k sits at
/// radius r_k between layers k and k+1).
struct ProblemSpec {
  int dimension = 2;
  std::size_t components = 1;
  Vector radii;  // r_0 > r_1 > ... > r_n
  RadialBoundaryOp boundary;
  std::vector<InterfacePair> interfaces;
  SurfaceData boundary_data;
  std::vector<InterfaceData> interface_data;

  std::size_t interface_count() const { return interfaces.size(); }
  std::size_t layer_count() const { return interfaces.size() + 1; }
  double outer_radius() const { return radii.front(); }
  /// Outer radius of layer k (r_{k-1}).
  double layer_outer(std::size_t k) const { return radii[k - 1]; }
  /// Inner radius of layer k (r_k, zero for the innermost layer).
  double layer_inner(std::size_t k) const { return k < radii.size() ? radii[k] : 0.0; }
  /// Layer index for a radius in [0, r_0]; interface radii belong to the outer layer.
  std::size_t layer_of(double r) const;
  /// Sorted union of every mode index present in any surface data.
  std::vector<int> data_modes() const;

  bool operator==(const ProblemSpec&) const = default;
};

/// Throws ValidationError (with a field path) on the first structural
/// invariant violation: dimension, radii ordering, matrix shapes, data sizes.
void check_structure(const ProblemSpec& spec);

struct Violation {
  std::string path;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Structural invariants plus the per-mode solvability conditions for every
/// mode present in the data. Never throws on a bad spec.
ValidationReport validate(const ProblemSpec& spec);

/// Homogeneous layers (continuity of value and radial derivative at every
/// interior radius) with Dirichlet data on r_0.
ProblemSpec dirichlet_preset(std::size_t m, Vector radii, SurfaceData data, int dimension = 2);
/// H u + du/dn = f on the unit sphere.
ProblemSpec robin_preset(const Matrix& H, SurfaceData data, int dimension = 2);
/// Dirichlet data on the unit sphere, interface at radius r with continuity
/// of value and K du^-/dn = du^+/dn (u^- the outer limit, u^+ the inner one).
ProblemSpec transmission_preset(const Matrix& K, double r, SurfaceData data, int dimension = 2);

/// Zero interface data of the right shape for `spec`.
std::vector<InterfaceData> zero_interface_data(std::size_t n);

}  // namespace lamharm
