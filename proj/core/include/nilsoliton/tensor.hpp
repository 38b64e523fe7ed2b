#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nilsoliton {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dimension of so(q), i.e. q(q-1)/2.
constexpr int so_dimension(int q) { return q * (q - 1) / 2; }

/// A tuple C = (C^1, ..., C^p) of skew-symmetric q x q matrices: the structure
/// constants of a two-step nilpotent algebra of type (p, q) with bracket
/// [e_i, e_j] = sum_k C^k_ij e_{q+k}.
///
/// Instances are immutable. Every component is exactly skew-symmetric: inputs
/// are replaced by their skew part (M - M^T)/2 and the largest entry removed by
/// that projection is kept as symmetrization_correction().
class StructureTensor {
 public:
  /// Validating constructor; equivalent to new_tensor(p, q, entries).
  StructureTensor(int p, int q, std::vector<Matrix> entries);

  /// Builds from components, inferring p and q from the list.
  static StructureTensor from_components(std::vector<Matrix> entries);

  /// Zero tensor of type (p, q).
  static StructureTensor zero(int p, int q);

  int p() const { return static_cast<int>(mats_.size()); }
  int q() const { return q_; }
  /// D_q = q(q-1)/2, the dimension of so(q).
  int so_dim() const { return so_dimension(q_); }

  const Matrix& operator[](int k) const { return mats_[static_cast<std::size_t>(k)]; }
  const std::vector<Matrix>& components() const { return mats_; }

  double symmetrization_correction() const { return correction_; }

  const std::vector<std::string>& labels() const { return labels_; }
  StructureTensor with_labels(std::vector<std::string> labels) const;

  /// s * C, component-wise.
  StructureTensor scaled(double s) const;

  /// The p x D_q matrix whose k-th row lists the strictly upper-triangular
  /// entries of C^k scaled by sqrt(2), so rows are isometric to so(q) under the
  /// trace pairing.
  Matrix coefficient_matrix() const;

  bool operator==(const StructureTensor& other) const;

 private:
  StructureTensor() = default;

  int q_ = 0;
  std::vector<Matrix> mats_;
  double correction_ = 0.0;
  std::vector<std::string> labels_;
};

/// Checked construction: entries.size() == p, each entry q x q, finite. Each
/// matrix is replaced by its skew part.
StructureTensor new_tensor(int p, int q, std::vector<Matrix> entries);

/// Trace pairing <C, C'> = sum_k tr(C^k (C'^k)^T).
double inner(const StructureTensor& a, const StructureTensor& b);
double norm(const StructureTensor& c);
double max_abs_difference(const StructureTensor& a, const StructureTensor& b);

/// a + s * b.
StructureTensor axpy(const StructureTensor& a, double s, const StructureTensor& b);

/// Default relative threshold for is_type_pq.
inline constexpr double kTypeRankTolerance = 1e-9;

/// Smallest over largest singular value of coefficient_matrix(); 0 for the
/// zero tensor.
double component_rank_ratio(const StructureTensor& c);

/// Membership in V^0_pq: the p components are linearly independent.
bool is_type_pq(const StructureTensor& c, double tol = kTypeRankTolerance);

/// An element (g, h) of GL(q) x GL(p).
struct GroupElement {
  Matrix g;  ///< q x q
  Matrix h;  ///< p x p

  static GroupElement identity(int q, int p);
  /// (g1 g2, h1 h2)
  GroupElement operator*(const GroupElement& other) const;
};

/// Minimum |det| accepted for a group element factor.
inline constexpr double kInvertibilityTolerance = 1e-12;

/// (g, h) . C with k-th component sum_j h_kj g C^j g^T.
StructureTensor group_act(const GroupElement& e, const StructureTensor& c);

/// The differentiated action: k-th component X C^k + C^k X^T + sum_j Y_kj C^j.
/// X is q x q and Y is p x p; moment computations only use symmetric X, Y but
/// the formula is applied verbatim to any square input.
StructureTensor infinitesimal_act(const Matrix& x, const Matrix& y, const StructureTensor& c);

/// Block-diagonal matrix with the given blocks along the diagonal.
Matrix block_diagonal(std::span<const Matrix> blocks);

/// (M - M^T) / 2.
Matrix skew_part(const Matrix& m);

}  // namespace nilsoliton
