#include "nilsoliton/linear_program.hpp"

#include "nilsoliton/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace nilsoliton {

namespace {

// Tableau rows 0..m-1 are constraints, last column is the rhs. basis[i] is
// the variable basic in row i.
struct Tableau {
  Matrix t;
  std::vector<int> basis;

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      if (r == row) continue;
      const double f = t(r, col);
      if (f != 0.0) t.row(r) -= f * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }
};

// Minimises the objective stored as reduced costs in the last row over
// columns [0, ncols). Returns false when unbounded.
bool run_simplex(Tableau& tab, int ncols, double tol) {
  const int m = static_cast<int>(tab.basis.size());
  const Eigen::Index obj = tab.t.rows() - 1;
  const Eigen::Index rhs = tab.t.cols() - 1;
  for (int iter = 0; iter < 50000; ++iter) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j)
      if (tab.t(obj, j) < -tol) {
        enter = j;
        break;
      }
    if (enter < 0) return true;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double a = tab.t(i, enter);
      if (a > tol) {
        const double ratio = tab.t(i, rhs) / a;
        if (ratio < best - tol ||
            (std::abs(ratio - best) <= tol && leave >= 0 && tab.basis[static_cast<std::size_t>(i)] <
                                                                 tab.basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return false;
    tab.pivot(leave, enter);
  }
  throw NumericalError("simplex: iteration limit reached");
}

}  // namespace

LpResult simplex_solve(const Matrix& a, const Vector& b, const Vector& c, double tol) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m || c.size() != n) throw DimensionError("simplex_solve: inconsistent sizes");

  // Phase one: artificials n..n+m-1.
  Tableau tab;
  tab.t = Matrix::Zero(m + 1, n + m + 1);
  tab.basis.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double sgn = b(i) < 0 ? -1.0 : 1.0;
    tab.t.row(i).head(n) = sgn * a.row(i);
    tab.t(i, n + i) = 1.0;
    tab.t(i, n + m) = sgn * b(i);
    tab.basis[static_cast<std::size_t>(i)] = n + i;
  }
  for (int i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i);
  for (int i = 0; i < m; ++i) tab.t(m, n + i) = 0.0;
  run_simplex(tab, n + m, tol);

  LpResult res;
  const double scale = 1.0 + b.cwiseAbs().sum();
  if (-tab.t(m, n + m) > tol * scale) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  // Drive remaining artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) continue;
    for (int j = 0; j < n; ++j)
      if (std::abs(tab.t(i, j)) > tol) {
        tab.pivot(i, j);
        break;
      }
  }

  // Phase two on the original columns; artificial columns are frozen out.
  Tableau two;
  two.t = Matrix::Zero(m + 1, n + 1);
  two.t.topLeftCorner(m, n) = tab.t.topLeftCorner(m, n);
  two.t.col(n).head(m) = tab.t.col(n + m).head(m);
  two.basis = tab.basis;
  two.t.row(m).head(n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    const int bv = two.basis[static_cast<std::size_t>(i)];
    if (bv < n && c(bv) != 0.0) two.t.row(m) -= c(bv) * two.t.row(i);
  }
  if (!run_simplex(two, n, tol)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.x = Vector::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int bv = two.basis[static_cast<std::size_t>(i)];
    if (bv < n) res.x(bv) = two.t(i, n);
  }
  res.objective = c.dot(res.x);
  return res;
}

std::optional<Vector> stiemke_multipliers(const Matrix& nmat, double tol) {
  const int m = static_cast<int>(nmat.rows());
  const int n = static_cast<int>(nmat.cols());
  // Variables [y+ (m), y- (m), s (n)]: N^T y+ - N^T y- - s = 0, 1^T s = 1.
  Matrix a = Matrix::Zero(n + 1, 2 * m + n);
  a.topLeftCorner(n, m) = nmat.transpose();
  a.block(0, m, n, m) = -nmat.transpose();
  a.block(0, 2 * m, n, n) = -Matrix::Identity(n, n);
  a.block(n, 2 * m, 1, n).setOnes();
  Vector b = Vector::Zero(n + 1);
  b(n) = 1.0;
  const LpResult r = simplex_solve(a, b, Vector::Zero(2 * m + n), tol);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  return Vector(r.x.head(m) - r.x.segment(m, m));
}

std::optional<Vector> positive_kernel_vector(const Matrix& nmat, double tol) {
  const int m = static_cast<int>(nmat.rows());
  const int n = static_cast<int>(nmat.cols());
  // x = tau 1 + u. Variables [tau, u (n)].
  Matrix a = Matrix::Zero(m + 1, n + 1);
  a.col(0).head(m) = nmat.rowwise().sum();
  a.block(0, 1, m, n) = nmat;
  a(m, 0) = static_cast<double>(n);
  a.block(m, 1, 1, n).setOnes();
  Vector b = Vector::Zero(m + 1);
  b(m) = 1.0;
  Vector c = Vector::Zero(n + 1);
  c(0) = -1.0;
  const LpResult r = simplex_solve(a, b, c, tol);
  if (r.status != LpStatus::Optimal || r.x(0) <= tol) return std::nullopt;
  return Vector(Vector::Constant(n, r.x(0)) + r.x.tail(n));
}

}  // namespace nilsoliton
