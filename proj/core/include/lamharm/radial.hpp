#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lamharm/matrix.hpp"
#include "lamharm/problem.hpp"

namespace lamharm {

/// Exponent of the singular radial solution, l + N - 2.
inline int singular_exponent(int l, int dimension) { return l + dimension - 2; }

/// N = 2, l = 0 is the one mode where r^l and r^{-(l+N-2)} coincide.
inline bool is_log_mode(int l, int dimension) { return dimension == 2 && l == 0; }

/// r^e, evaluated as exp(e ln r) once |e| > 30.
double radial_power(double r, double e);

struct RadialOptions {
  /// Use ln r as the second solution of the degenerate mode. Switching it off
  /// reproduces the naive r^0 basis, whose block systems are singular.
  bool log_basis_for_degenerate_mode = true;
};

/// value(r) = r^l P + r^{-(l+N-2)} Q, or P + ln(r) Q when `log_term` is set.
/// P and Q share a shape (rows = m, any column count).
struct RadialSpan {
  int l = 0;
  int dimension = 2;
  Matrix P;
  Matrix Q;
  bool log_term = false;

  static RadialSpan regular_seed(int l, int dimension, std::size_t m, const RadialOptions& opts = {});
  static RadialSpan singular_seed(int l, int dimension, std::size_t m, const RadialOptions& opts = {});
  static RadialSpan zero_like(const RadialSpan& shape, std::size_t cols);

  Matrix value(double r) const;
  /// Gamma[span](r) for Gamma = A r d/dr + B.
  Matrix gamma(const RadialBoundaryOp& op, double r) const;

  RadialSpan operator*(const Matrix& right) const;
  RadialSpan operator+(const RadialSpan& other) const;
  RadialSpan operator-(const RadialSpan& other) const;
  RadialSpan operator-() const;
};

/// Returns A * exponent + B, the symbol with Gamma[r^e] = alpha r^e.
Matrix alpha_symbol(const RadialBoundaryOp& op, double exponent);

/// Fundamental pairs (phi_k, psi_k), k = 1..n+1, seeded in the innermost layer
/// by phi = r^l E and psi = r^{-(l+N-2)} E (ln r E for the degenerate mode)
/// and carried outward through the homogeneous conjugation conditions.
struct ModeBasis {
  int l = 0;
  int dimension = 2;
  std::vector<std::pair<RadialSpan, RadialSpan>> pairs;  // [k-1] -> layer k

  const RadialSpan& phi(std::size_t k) const { return pairs.at(k - 1).first; }
  const RadialSpan& psi(std::size_t k) const { return pairs.at(k - 1).second; }
};

/// Throws SingularMatrix tagged with (interface, mode) when the outer-side
/// symbol matrix M_{k1,l} is singular.
ModeBasis propagate_pairs(const ProblemSpec& spec, int l, const RadialOptions& opts = {});

/// Max residual of the recurrence Gamma^k_{j1}(phi_k, psi_k) = Gamma^k_{j2}(phi_{k+1}, psi_{k+1})
/// at every r_k, relative to the largest Gamma-image on that interface.
double recurrence_residual(const ProblemSpec& spec, const ModeBasis& basis);

/// How the second index of phi^k_{ij} in Omega is read.
enum class OmegaConvention {
  kConditionIndex,  // rows are conditions j = 1, 2, both applied on the outer side
  kSideIndex,       // rows are condition 1 on the outer and inner side
};

/// Block matrix of Gamma-images of the layer-k pair at rho: columns (phi_k, psi_k).
BlockTwoMatrix omega_matrix(const ProblemSpec& spec, const ModeBasis& basis, std::size_t k, double rho,
                            OmegaConvention convention = OmegaConvention::kConditionIndex);

/// Symbol matrix [[alpha_{1j}(l), alpha_{1j}(-)], [alpha_{2j}(l), alpha_{2j}(-)]] of
/// interface k, side j (1 = outer, 2 = inner). The degenerate mode uses the
/// images of (1, ln r) at r_k instead.
Matrix symbol_matrix(const ProblemSpec& spec, std::size_t k, int side, int l, const RadialOptions& opts = {});

struct DeterminantEntry {
  std::string label;  // e.g. "det M[k=1,j=2]"
  double determinant = 0.0;
  double min_pivot_ratio = 0.0;
  bool singular = false;
};

struct SolvabilityReport {
  int l = 0;
  bool pass = true;
  std::vector<DeterminantEntry> entries;
  std::vector<std::string> failures;
};

/// Which fundamental pair member plays which role in the influence matrices.
enum class InfluenceConvention {
  /// The three-case formula with the pair members exchanged: the outer piece
  /// is built from psi - phi phi0^{-1} psi0 and the inner piece from phi, so
  /// that the innermost layer stays bounded. The boundary image of phi must
  /// be invertible. The outer piece is evaluated through the solution that
  /// satisfies the homogeneous boundary condition, carried inward across the
  /// interfaces, which is the same function without the cancellation between
  /// psi and phi phi0^{-1} psi0 at large l.
  kExchangedRoles,
  /// The three-case formula with phi, psi taken literally.
  kAsPrinted,
};

struct InfluenceOptions {
  InfluenceConvention convention = InfluenceConvention::kExchangedRoles;
  OmegaConvention omega = OmegaConvention::kConditionIndex;
  RadialOptions radial{};
};

SolvabilityReport check_solvability(const ProblemSpec& spec, int l, const InfluenceOptions& opts = {});

/// Per-layer mode coefficients, u_{k,l}(r) = r^l a_k + r^{-(l+N-2)} b_k.
struct LayerCoefficients {
  Vector a;
  Vector b;
};

struct ModeSolution {
  int l = 0;
  int dimension = 2;
  bool log_term = false;
  std::vector<LayerCoefficients> layers;  // [k-1] -> layer k

  Vector value(std::size_t k, double r) const;
  /// r d/dr of the layer-k profile.
  Vector radial_derivative(std::size_t k, double r) const;
  Vector gamma(std::size_t k, const RadialBoundaryOp& op, double r) const;
};

/// Mode-l right-hand sides: Gamma_0[u_1](r_0) = boundary and one
/// (f_{1s}, f_{2s}) pair per interface.
struct ModeData {
  Vector boundary;
  std::vector<std::pair<Vector, Vector>> interfaces;

  static ModeData zero(std::size_t m, std::size_t n);
};

/// Direct (2n+1)m block solve of the mode-l problem.
ModeSolution solve_mode(const ProblemSpec& spec, int l, const ModeData& data, const RadialOptions& opts = {});

/// Max of the boundary and conjugation residuals of a mode solution,
/// relative to max(1, |data|).
double mode_residual(const ProblemSpec& spec, const ModeSolution& sol, const ModeData& data);

/// Source of an influence column: the outer boundary or interface s.
struct Source {
  enum class Kind { kBoundary, kInterface };
  Kind kind = Kind::kBoundary;
  std::size_t index = 0;

  static Source boundary() { return {Kind::kBoundary, 0}; }
  static Source interface(std::size_t s) { return {Kind::kInterface, s}; }
};

/// The m x 2m influence matrices H*_{k,s,l}(r, rho) of one mode.
///
/// For interface sources the column pair multiplies (f_{1s}; f_{2s}); for the
/// boundary source only the second column block is used, against f_0.
/// Laid out as radial spans so that layer coefficients can be read off
/// exactly instead of being fitted from samples.
class InfluenceFunction {
 public:
  InfluenceFunction(const ProblemSpec& spec, ModeBasis basis, InfluenceOptions opts = {});

  /// Kernel span in layer k for a jump at radius rho; `above` selects the
  /// piece valid for r >= rho when k equals the source layer.
  RadialSpan span(std::size_t k, Source source, double rho, bool above) const;
  Matrix evaluate(std::size_t k, Source source, double r, double rho) const;

  const ModeBasis& basis() const { return basis_; }
  const InfluenceOptions& options() const { return opts_; }

 private:
  RadialSpan first_piece(std::size_t k, const Matrix& omega_inv) const;
  RadialSpan second_piece(std::size_t k, const Matrix& omega_inv) const;
  Matrix omega_inverse(std::size_t s, double rho) const;
  const RadialSpan& role_p(std::size_t k) const;
  const RadialSpan& role_q(std::size_t k) const;

  const ProblemSpec* spec_;
  ModeBasis basis_;
  InfluenceOptions opts_;
  Matrix p_ring_;      // boundary image of the member playing phi
  Matrix q_ring_;      // boundary image of the member playing psi
  Matrix q_ring_inv_;
  std::vector<RadialSpan> chi_;  // [k-1] -> layer k, exchanged convention only
};

/// H*_{k,s,l}(r, rho); convenience wrapper around InfluenceFunction.
Matrix hstar(const ProblemSpec& spec, const ModeBasis& basis, std::size_t k, Source source, double r,
             double rho, const InfluenceOptions& opts = {});

/// Mode solution assembled from the influence matrices with the sources at
/// rho = r_0 and rho = r_s.
ModeSolution mode_solution_via_hstar(const ProblemSpec& spec, const ModeBasis& basis, const ModeData& data,
                                     const InfluenceOptions& opts = {});

/// Layerwise relative discrepancy of two mode solutions. Coefficients are
/// weighted by the largest value of their radial function on the layer
/// before comparing, so the measure tracks the size of each term where it
/// actually contributes.
double coefficient_discrepancy(const ProblemSpec& spec, const ModeSolution& x, const ModeSolution& y);

}  // namespace lamharm
