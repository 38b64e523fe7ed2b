#pragma once

#include "nilsoliton/tensor.hpp"

#include <optional>

namespace nilsoliton {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
};

/// minimize c^T x subject to A x = b, x >= 0. Dense two-phase tableau simplex
/// with Bland's rule; meant for the few dozen variables that show up in
/// coefficient systems, not for general use.
LpResult simplex_solve(const Matrix& a, const Vector& b, const Vector& c, double tol = 1e-11);

/// Stiemke alternative for N x = 0, x > 0: returns y with N^T y >= 0 and
/// sum(N^T y) = 1 when one exists (then N x = 0 has no positive solution).
std::optional<Vector> stiemke_multipliers(const Matrix& n, double tol = 1e-11);

/// Positive solution of N x = 0: x with sum x = 1 maximising min_i x_i.
/// Empty when the best min_i x_i is <= tol.
std::optional<Vector> positive_kernel_vector(const Matrix& n, double tol = 1e-11);

}  // namespace nilsoliton
