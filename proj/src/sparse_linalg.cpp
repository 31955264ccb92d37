#include "robin/sparse_linalg.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace robin {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix SparseMatrix::from_entries(int n, std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m;
  m.n_ = n;
  m.row_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  m.column_indices_.reserve(entries.size());
  m.values_.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    const Entry& e = entries[k];
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n) {
      throw std::out_of_range("SparseMatrix::from_entries: index out of range");
    }
    double v = 0.0;
    std::size_t l = k;
    while (l < entries.size() && entries[l].row == e.row && entries[l].col == e.col) {
      v += entries[l].value;
      ++l;
    }
    m.column_indices_.push_back(e.col);
    m.values_.push_back(v);
    ++m.row_offsets_[static_cast<std::size_t>(e.row) + 1];
    k = l;
  }
  std::partial_sum(m.row_offsets_.begin(), m.row_offsets_.end(), m.row_offsets_.begin());
  return m;
}

int SparseMatrix::find(int row, int col) const {
  const auto first = column_indices_.begin() + row_offsets_[row];
  const auto last = column_indices_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return -1;
  return static_cast<int>(it - column_indices_.begin());
}

double SparseMatrix::at(int row, int col) const {
  const int k = find(row, col);
  return k < 0 ? 0.0 : values_[k];
}

void SparseMatrix::add(int row, int col, double v) {
  const int k = find(row, col);
  if (k < 0) throw std::out_of_range("SparseMatrix::add: position not in sparsity pattern");
  values_[k] += v;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      s += values_[k] * x[column_indices_[k]];
    }
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(n_));
  multiply(x, y);
  return y;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) d[i] = at(i, i);
  return d;
}

double SparseMatrix::asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      worst = std::max(worst, std::abs(values_[k] - at(column_indices_[k], i)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Conjugate gradients

CgResult cg_solve(const SparseMatrix& a, std::span<const double> rhs, double tol, int max_iter,
                  bool jacobi) {
  const int n = a.size();
  if (static_cast<int>(rhs.size()) != n) {
    throw std::invalid_argument("cg_solve: right-hand side has wrong length");
  }
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("cg_solve: tol must lie in (0, 1)");
  if (max_iter <= 0) max_iter = 10 * n;

  CgResult result;
  result.x.assign(static_cast<std::size_t>(n), 0.0);
  const double rhs_norm = norm2(rhs);
  if (!std::isfinite(rhs_norm)) throw SolverError("cg_solve: non-finite right-hand side");
  if (rhs_norm == 0.0) return result;

  std::vector<double> inv_diag;
  if (jacobi) {
    inv_diag = a.diagonal();
    for (double& d : inv_diag) {
      if (!(d > 0.0)) throw SolverError("cg_solve: non-positive diagonal with Jacobi");
      d = 1.0 / d;
    }
  }
  auto precondition = [&](std::span<const double> r, std::span<double> z) {
    if (jacobi) {
      for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    } else {
      std::copy(r.begin(), r.end(), z.begin());
    }
  };

  std::vector<double> r(rhs.begin(), rhs.end());
  std::vector<double> z(static_cast<std::size_t>(n));
  std::vector<double> p(static_cast<std::size_t>(n));
  std::vector<double> ap(static_cast<std::size_t>(n));
  precondition(r, z);
  p = z;
  double rz = dot(r, z);

  for (int it = 1; it <= max_iter; ++it) {
    a.multiply(p, ap);
    const double pap = dot(p, ap);
    if (!std::isfinite(pap)) throw SolverError("cg_solve: non-finite value encountered");
    if (pap <= 0.0) throw SolverError("cg_solve: matrix is not positive definite");
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) {
      result.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    const double res = norm2(r) / rhs_norm;
    result.report.iterations = it;
    result.report.final_residual = res;
    if (!std::isfinite(res)) throw SolverError("cg_solve: non-finite residual");
    if (res <= tol) return result;
    precondition(r, z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError("cg_solve: no convergence after " + std::to_string(max_iter) +
                    " iterations (relative residual " +
                    std::to_string(result.report.final_residual) + ")");
}

// ---------------------------------------------------------------------------
// Cholesky

struct CholeskyFactor::Impl {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

CholeskyFactor::CholeskyFactor(const SparseMatrix& a) : impl_(std::make_unique<Impl>()) {
  const int n = a.size();
  // CSR of a symmetric matrix is also its CSC.
  const Eigen::Map<const Eigen::SparseMatrix<double>> view(
      n, n, static_cast<Eigen::Index>(a.nonzeros()), a.row_offsets().data(),
      a.column_indices().data(), a.values().data());
  impl_->llt.compute(view);
  if (impl_->llt.info() != Eigen::Success) {
    throw SolverError("CholeskyFactor: matrix is not positive definite");
  }
}

CholeskyFactor::~CholeskyFactor() = default;
CholeskyFactor::CholeskyFactor(CholeskyFactor&&) noexcept = default;
CholeskyFactor& CholeskyFactor::operator=(CholeskyFactor&&) noexcept = default;

std::vector<double> CholeskyFactor::solve(std::span<const double> rhs) const {
  const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  const Eigen::VectorXd x = impl_->llt.solve(b);
  std::vector<double> out(x.data(), x.data() + x.size());
  for (double v : out) {
    if (!std::isfinite(v)) throw SolverError("CholeskyFactor: non-finite solution");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dense kernels

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int c = 0; c < cols_; ++c) s += (*this)(r, c) * x[c];
    y[r] = s;
  }
  return y;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

std::vector<double> dense_solve(DenseMatrix m, std::span<const double> rhs) {
  const int n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("dense_solve: matrix is not square");
  if (static_cast<int>(rhs.size()) != n) {
    throw std::invalid_argument("dense_solve: right-hand side has wrong length");
  }
  std::vector<double> b(rhs.begin(), rhs.end());
  double scale = 0.0;
  for (double v : m.values()) scale = std::max(scale, std::abs(v));
  const double pivot_floor = n * std::numeric_limits<double>::epsilon() * scale;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int r = k + 1; r < n; ++r) {
      if (std::abs(m(r, k)) > std::abs(m(piv, k))) piv = r;
    }
    if (!(std::abs(m(piv, k)) > pivot_floor)) {
      throw SingularMatrixError("dense_solve: matrix is singular to working precision (column " +
                                std::to_string(k) + ")");
    }
    if (piv != k) {
      for (int c = 0; c < n; ++c) std::swap(m(k, c), m(piv, c));
      std::swap(b[k], b[piv]);
    }
    for (int r = k + 1; r < n; ++r) {
      const double f = m(r, k) / m(k, k);
      if (f == 0.0) continue;
      for (int c = k; c < n; ++c) m(r, c) -= f * m(k, c);
      b[r] -= f * b[k];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= m(r, c) * x[c];
    x[r] = s / m(r, r);
  }
  return x;
}

std::vector<double> singular_values(const DenseMatrix& m) {
  // Hestenes one-sided Jacobi: rotate column pairs of U = M until they are
  // mutually orthogonal; the column norms are then the singular values.
  const int rows = m.rows();
  const int cols = m.cols();
  DenseMatrix u = m;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < cols - 1; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        double gamma = 0.0;
        for (int r = 0; r < rows; ++r) {
          alpha += u(r, p) * u(r, p);
          beta += u(r, q) * u(r, q);
          gamma += u(r, p) * u(r, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int r = 0; r < rows; ++r) {
          const double up = u(r, p);
          const double uq = u(r, q);
          u(r, p) = c * up - s * uq;
          u(r, q) = s * up + c * uq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(static_cast<std::size_t>(cols));
  for (int c = 0; c < cols; ++c) {
    double s = 0.0;
    for (int r = 0; r < rows; ++r) s += u(r, c) * u(r, c);
    sv[c] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double condition_number_2(const DenseMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("condition_number_2: matrix must be square and non-empty");
  }
  const auto sv = singular_values(m);
  const double smax = sv.front();
  const double smin = sv.back();
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  const double kappa = smax / smin;
  return std::isfinite(kappa) ? kappa : std::numeric_limits<double>::infinity();
}

}  // namespace robin
