#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lamharm {

using Vector = std::vector<double>;

/// Dense real matrix in row-major order.
///
/// The library only ever needs small blocks (m <= 8, block systems of a few
/// dozen rows), so storage is a flat std::vector and every operation is a
/// plain loop. Square-only operations check `is_square()` and throw
/// DimensionError otherwise.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix diagonal(std::span<const double> diag);
  static Matrix column(std::span<const double> v);
  /// Throws DomainError on non-finite entries and DimensionError on ragged rows.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix from_row_major(std::size_t rows, std::size_t cols, std::span<const double> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& src);
  Vector column_vector(std::size_t j) const;
  std::vector<std::vector<double>> to_rows() const;

  Matrix transpose() const;
  double max_abs() const;
  double frobenius() const;
  bool all_finite() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= -1.0; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& x);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// [A B; C D] with all four blocks m x m.
struct BlockTwoMatrix {
  Matrix b11, b12, b21, b22;

  std::size_t block_dim() const { return b11.rows(); }
  Matrix assemble() const;
  static BlockTwoMatrix split(const Matrix& full);
};

// Vector helpers.
Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector a);
double max_abs(const Vector& v);
Vector concat(const Vector& a, const Vector& b);

/// Fraction of ||A||_max below which an elimination pivot counts as zero.
inline constexpr double kPivotThreshold = 1e-13;

/// LU factorization with partial pivoting. Construction throws SingularMatrix
/// when a pivot magnitude falls below kPivotThreshold * ||A||_max.
class LuDecomposition {
 public:
  explicit LuDecomposition(Matrix a);

  Matrix solve(const Matrix& rhs) const;
  Vector solve(const Vector& rhs) const;
  double determinant() const;
  /// Smallest |pivot| / ||A||_max seen during elimination.
  double min_pivot_ratio() const { return min_pivot_ratio_; }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  double min_pivot_ratio_ = 0.0;
};

/// Pivot-checked determinant report, used by solvability checks which must
/// not throw.
struct DeterminantCheck {
  double determinant = 0.0;
  double min_pivot_ratio = 0.0;
  bool singular = true;
};
DeterminantCheck check_determinant(const Matrix& a);

/// Same check after scaling every row and column to unit max-norm. The
/// reported determinant is the one of the unscaled matrix.
DeterminantCheck check_determinant_equilibrated(const Matrix& a);

/// Solves A X = rhs through D_r A D_c, with D_r, D_c scaling rows and columns
/// to unit max-norm. Radial blocks mix r^l and r^{-l} columns, and the
/// pivot threshold is only meaningful after this scaling.
Matrix equilibrated_solve(const Matrix& a, const Matrix& rhs);
Matrix equilibrated_inverse(const Matrix& a);

Matrix mat_inverse(const Matrix& a);
Matrix solve(const Matrix& a, const Matrix& rhs);
Vector solve(const Matrix& a, const Vector& rhs);
double determinant(const Matrix& a);

Matrix block2_solve(const BlockTwoMatrix& m, const Matrix& rhs);

bool is_symmetric(const Matrix& a, double tol = 1e-12);

struct SymmetricEigen {
  Vector values;  // ascending
  Matrix vectors; // columns are eigenvectors
};
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Orthonormal basis (as columns) of the right null space of a full row-rank
/// r x c matrix, c > r, from its singular value decomposition.
Matrix null_space(const Matrix& a);

/// Spectral norm ||A||_2.
double norm2(const Matrix& a);

Matrix matrix_exp(const Matrix& a);

/// eps^A = exp(A ln eps). Symmetric input (within 1e-12) goes through an
/// eigendecomposition and yields a symmetric result; everything else uses
/// scaling and squaring. eps == 1 returns the identity exactly.
Matrix scalar_matrix_power(const Matrix& a, double eps);

/// Upper estimate of the spectral radius: min_k ||A^k||_2^{1/k} over
/// k = 1, 2, 4, ..., 32. Never below rho(A); exact for normal matrices.
double spectral_radius_bound(const Matrix& a);

}  // namespace lamharm
