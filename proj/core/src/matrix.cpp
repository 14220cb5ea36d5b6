#include "lamharm/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lamharm/errors.hpp"

namespace lamharm {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string("shape mismatch in ") + op);
  }
}

void require_square(const Matrix& a, const char* op) {
  if (!a.is_square() || a.rows() == 0) {
    throw DimensionError(std::string(op) + " needs a non-empty square matrix");
  }
}

Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

double norm1(const Matrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::column(std::span<const double> v) {
  Matrix m(v.size(), 1);
  std::copy(v.begin(), v.end(), m.data_.begin());
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> tmp;
  for (const auto& r : rows) tmp.emplace_back(r);
  return from_rows(tmp);
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr ? rows.front().size() : 0;
  Matrix m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    if (rows[i].size() != nc) throw DimensionError("ragged matrix rows");
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = rows[i][j];
  }
  if (!m.all_finite()) throw DomainError("matrix entries must be finite");
  return m;
}

Matrix Matrix::from_row_major(std::size_t rows, std::size_t cols, std::span<const double> entries) {
  if (entries.size() != rows * cols) throw DimensionError("entry count does not match shape");
  Matrix m(rows, cols);
  std::copy(entries.begin(), entries.end(), m.data_.begin());
  if (!m.all_finite()) throw DomainError("matrix entries must be finite");
  return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block out of range");
  Matrix out(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  return out;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& src) {
  if (r0 + src.rows() > rows_ || c0 + src.cols() > cols_) throw DimensionError("block out of range");
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) (*this)(r0 + i, c0 + j) = src(i, j);
}

Vector Matrix::column_vector(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::frobenius() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("inner dimensions differ in matrix product");
  Matrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  if (a.cols_ != x.size()) throw DimensionError("matrix-vector size mismatch");
  Vector y(a.rows_, 0.0);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix BlockTwoMatrix::assemble() const {
  const std::size_t m = block_dim();
  for (const Matrix* b : {&b11, &b12, &b21, &b22})
    if (b->rows() != m || b->cols() != m) throw DimensionError("BlockTwoMatrix blocks must share dim m");
  Matrix full(2 * m, 2 * m);
  full.set_block(0, 0, b11);
  full.set_block(0, m, b12);
  full.set_block(m, 0, b21);
  full.set_block(m, m, b22);
  return full;
}

BlockTwoMatrix BlockTwoMatrix::split(const Matrix& full) {
  if (!full.is_square() || full.rows() % 2 != 0) throw DimensionError("need a 2m x 2m matrix");
  const std::size_t m = full.rows() / 2;
  return {full.block(0, 0, m, m), full.block(0, m, m, m), full.block(m, 0, m, m), full.block(m, m, m, m)};
}

Vector operator+(Vector a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vector size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

Vector operator-(Vector a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vector size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

Vector operator*(double s, Vector a) {
  for (double& v : a) v *= s;
  return a;
}

double max_abs(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vector concat(const Vector& a, const Vector& b) {
  Vector out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

LuDecomposition::LuDecomposition(Matrix a) : lu_(std::move(a)) {
  require_square(lu_, "LU factorization");
  if (!lu_.all_finite()) throw DomainError("LU factorization of non-finite matrix");
  const std::size_t n = lu_.rows();
  const double scale = lu_.max_abs();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  min_pivot_ratio_ = std::numeric_limits<double>::infinity();
  if (scale == 0.0) throw SingularMatrix("zero matrix");

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
    const double ratio = std::abs(lu_(p, k)) / scale;
    min_pivot_ratio_ = std::min(min_pivot_ratio_, ratio);
    if (ratio < kPivotThreshold) {
      throw SingularMatrix("pivot " + std::to_string(k) + " below threshold (|pivot|/||A||max = " +
                           std::to_string(ratio) + ")");
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(perm_[k], perm_[p]);
      sign_ = -sign_;
    }
    const double pivot = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu_(i, k) / pivot;
      lu_(i, k) = f;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

Matrix LuDecomposition::solve(const Matrix& rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.rows() != n) throw DimensionError("right-hand side row count mismatch");
  Matrix x(n, rhs.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < rhs.cols(); ++j) x(i, j) = rhs(perm_[i], j);
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    for (std::size_t i = 1; i < n; ++i) {
      double s = x(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= lu_(i, k) * x(k, c);
      x(i, c) = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = x(ii, c);
      for (std::size_t k = ii + 1; k < n; ++k) s -= lu_(ii, k) * x(k, c);
      x(ii, c) = s / lu_(ii, ii);
    }
  }
  return x;
}

Vector LuDecomposition::solve(const Vector& rhs) const {
  return solve(Matrix::column(rhs)).column_vector(0);
}

double LuDecomposition::determinant() const {
  double d = sign_;
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

DeterminantCheck check_determinant(const Matrix& a) {
  DeterminantCheck out;
  try {
    LuDecomposition lu(a);
    out.determinant = lu.determinant();
    out.min_pivot_ratio = lu.min_pivot_ratio();
    out.singular = false;
  } catch (const SingularMatrix&) {
    out.singular = true;
  }
  return out;
}

namespace {

struct Equilibration {
  Vector row_scale;
  Vector col_scale;
  Matrix scaled;
};

Equilibration equilibrate(const Matrix& a) {
  require_square(a, "equilibration");
  const std::size_t n = a.rows();
  Equilibration e{Vector(n, 1.0), Vector(n, 1.0), a};
  for (std::size_t j = 0; j < n; ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c = std::max(c, std::abs(a(i, j)));
    if (c > 0.0) e.col_scale[j] = 1.0 / c;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e.scaled(i, j) *= e.col_scale[j];
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r = std::max(r, std::abs(e.scaled(i, j)));
    if (r > 0.0) e.row_scale[i] = 1.0 / r;
    for (std::size_t j = 0; j < n; ++j) e.scaled(i, j) *= e.row_scale[i];
  }
  return e;
}

}  // namespace

DeterminantCheck check_determinant_equilibrated(const Matrix& a) {
  const Equilibration e = equilibrate(a);
  DeterminantCheck out = check_determinant(e.scaled);
  if (!out.singular) {
    // det(A) = det(scaled) / (prod row_scale * prod col_scale), accumulated in log space.
    double log_mag = std::log(std::abs(out.determinant));
    for (std::size_t i = 0; i < a.rows(); ++i) log_mag -= std::log(e.row_scale[i]) + std::log(e.col_scale[i]);
    out.determinant = std::copysign(std::exp(log_mag), out.determinant);
  } else {
    out.determinant = 0.0;
  }
  return out;
}

Matrix equilibrated_solve(const Matrix& a, const Matrix& rhs) {
  const Equilibration e = equilibrate(a);
  if (rhs.rows() != a.rows()) throw DimensionError("right-hand side row count mismatch");
  Matrix b = rhs;
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) *= e.row_scale[i];
  Matrix x = LuDecomposition(e.scaled).solve(b);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) *= e.col_scale[i];
  return x;
}

Matrix equilibrated_inverse(const Matrix& a) { return equilibrated_solve(a, Matrix::identity(a.rows())); }

Matrix mat_inverse(const Matrix& a) {
  require_square(a, "mat_inverse");
  return LuDecomposition(a).solve(Matrix::identity(a.rows()));
}

Matrix solve(const Matrix& a, const Matrix& rhs) { return LuDecomposition(a).solve(rhs); }

Vector solve(const Matrix& a, const Vector& rhs) { return LuDecomposition(a).solve(rhs); }

double determinant(const Matrix& a) {
  require_square(a, "determinant");
  try {
    return LuDecomposition(a).determinant();
  } catch (const SingularMatrix&) {
    return 0.0;
  }
}

Matrix block2_solve(const BlockTwoMatrix& m, const Matrix& rhs) {
  const Matrix full = m.assemble();
  if (rhs.rows() != full.rows() || rhs.cols() == 0) throw DimensionError("block2_solve rhs must be 2m x c");
  return LuDecomposition(full).solve(rhs);
}

bool is_symmetric(const Matrix& a, double tol) {
  if (!a.is_square()) return false;
  const double scale = std::max(1.0, a.max_abs());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol * scale) return false;
  return true;
}

Matrix null_space(const Matrix& a) {
  if (a.cols() <= a.rows()) throw DimensionError("null_space needs more columns than rows");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(a), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(sv.size() - 1) > kPivotThreshold * sv(0)))
    throw SingularMatrix("null_space: matrix is rank deficient");
  const std::size_t r = a.rows();
  const std::size_t k = a.cols() - r;
  Matrix out(a.cols(), k);
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < k; ++j)
      out(i, j) = svd.matrixV()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r + j));
  return out;
}

SymmetricEigen symmetric_eigen(const Matrix& a) {
  require_square(a, "symmetric_eigen");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(a));
  if (solver.info() != Eigen::Success) throw DomainError("symmetric eigendecomposition failed");
  const std::size_t n = a.rows();
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < n; ++j)
      out.vectors(i, j) = solver.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return out;
}

double norm2(const Matrix& a) {
  if (a.empty()) return 0.0;
  const SymmetricEigen e = symmetric_eigen(a.transpose() * a);
  return std::sqrt(std::max(0.0, e.values.back()));
}

Matrix matrix_exp(const Matrix& a) {
  require_square(a, "matrix_exp");
  const std::size_t n = a.rows();
  const double nrm = norm1(a);
  int squarings = 0;
  if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  const Matrix scaled = a * std::ldexp(1.0, -squarings);

  // Taylor series on ||scaled||_1 <= 1/2; 30 terms are far past double precision.
  Matrix result = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled * (1.0 / k);
    result += term;
    if (term.max_abs() <= 1e-18 * result.max_abs()) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Matrix scalar_matrix_power(const Matrix& a, double eps) {
  require_square(a, "scalar_matrix_power");
  if (!(eps > 0.0)) throw DomainError("scalar_matrix_power needs eps > 0");
  if (!a.all_finite()) throw DomainError("scalar_matrix_power of non-finite matrix");
  const std::size_t n = a.rows();
  if (eps == 1.0) return Matrix::identity(n);
  const double log_eps = std::log(eps);

  if (is_symmetric(a)) {
    const SymmetricEigen e = symmetric_eigen(a);
    Matrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = std::exp(e.values[k] * log_eps);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) += w * e.vectors(i, k) * e.vectors(j, k);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double avg = 0.5 * (out(i, j) + out(j, i));
        out(i, j) = out(j, i) = avg;
      }
    return out;
  }
  return matrix_exp(a * log_eps);
}

double spectral_radius_bound(const Matrix& a) {
  require_square(a, "spectral_radius_bound");
  const double scale = a.frobenius();
  if (scale == 0.0) return 0.0;
  const Matrix unit = a * (1.0 / scale);

  double norm_bound = std::numeric_limits<double>::infinity();
  Matrix p = unit;
  for (int k = 1; k <= 32; k *= 2) {
    const double nk = norm2(p);
    norm_bound = std::min(norm_bound, nk == 0.0 ? 0.0 : std::pow(nk, 1.0 / k));
    if (nk == 0.0) break;
    p = p * p;
  }
  return scale * norm_bound;
}

}  // namespace lamharm
