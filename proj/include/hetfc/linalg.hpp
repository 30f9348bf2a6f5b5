#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hetfc {

// Small dense row-major matrix. Everything in this project is k x k with
// k <= 32, so no effort is spent on blocking or expression templates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> data() const { return a_; }
  std::span<double> data() { return a_; }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double c);

  double max_abs() const;
  bool is_symmetric(double tol) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

// Cholesky factor A = L L^T of a symmetric positive definite matrix.
// ok == false means a non-positive pivot was hit.
struct CholeskyFactor {
  Matrix lower;
  bool ok = false;

  std::vector<double> solve(std::span<const double> b) const;
};

CholeskyFactor cholesky(const Matrix& a);

// tr(A^{-1} B) given the Cholesky factor of A.
double trace_solve(const CholeskyFactor& chol, const Matrix& b);

// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi
// rotations. Sweeps run until the off-diagonal Frobenius norm drops below
// tol_rel times the matrix Frobenius norm.
std::vector<double> jacobi_eigenvalues(Matrix a, double tol_rel = 1e-12);

// lambda_max / lambda_min; +inf when lambda_min <= 0.
double condition_number(const Matrix& a);

}  // namespace hetfc
