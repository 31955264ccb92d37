#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace robin {

/// Raised by the linear solvers: CG non-convergence, non-finite values,
/// singular pivots, failed factorizations.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Square sparse matrix in compressed sparse row form. Column indices are
/// sorted and unique within each row.
class SparseMatrix {
 public:
  struct Entry {
    int row;
    int col;
    double value;
  };

  SparseMatrix() = default;

  /// Duplicate (row, col) entries are summed.
  static SparseMatrix from_entries(int n, std::vector<Entry> entries);

  int size() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const int> row_offsets() const { return row_offsets_; }
  std::span<const int> column_indices() const { return column_indices_; }
  std::span<const double> values() const { return values_; }

  /// Entry (row, col), zero if outside the pattern.
  double at(int row, int col) const;

  /// Adds v at (row, col); the position must already be in the pattern.
  void add(int row, int col, double v);

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  std::vector<double> diagonal() const;

  /// max |A_ij - A_ji| over the pattern.
  double asymmetry() const;

 private:
  int find(int row, int col) const;

  int n_ = 0;
  std::vector<int> row_offsets_;
  std::vector<int> column_indices_;
  std::vector<double> values_;
};

struct SolverReport {
  int iterations = 0;
  double final_residual = 0.0;  ///< ||A x - b|| / ||b||
};

struct CgResult {
  std::vector<double> x;
  SolverReport report;
};

/// Conjugate gradients for SPD systems. max_iter <= 0 selects 10 n. With
/// jacobi set, the diagonal is used as preconditioner. Throws SolverError on
/// non-convergence or non-finite iterates.
CgResult cg_solve(const SparseMatrix& a, std::span<const double> rhs, double tol = 1e-12,
                  int max_iter = 0, bool jacobi = false);

/// Sparse Cholesky factorization of an SPD matrix (Eigen simplicial LL^T
/// with AMD ordering).
class CholeskyFactor {
 public:
  explicit CholeskyFactor(const SparseMatrix& a);
  ~CholeskyFactor();
  CholeskyFactor(CholeskyFactor&&) noexcept;
  CholeskyFactor& operator=(CholeskyFactor&&) noexcept;

  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(static_cast<std::size_t>(rows) * cols, fill) {}

  static DenseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return values_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const {
    return values_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::span<const double> values() const { return values_; }

  std::vector<double> multiply(std::span<const double> x) const;
  DenseMatrix transpose() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

/// Gaussian elimination with partial pivoting. Throws SingularMatrixError
/// when a pivot falls below working precision relative to the matrix scale.
std::vector<double> dense_solve(DenseMatrix m, std::span<const double> rhs);

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(const DenseMatrix& m);

/// sigma_max / sigma_min; +infinity when sigma_min underflows to zero.
double condition_number_2(const DenseMatrix& m);

double norm2(std::span<const double> v);

}  // namespace robin
