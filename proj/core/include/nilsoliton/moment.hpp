#pragma once

#include "nilsoliton/tensor.hpp"

namespace nilsoliton {

/// Image of the GL(q) x GL(p) moment map, m(C) = (m1, m2), for the trace
/// pairing tr(X Y^T) on both factors:
///   m1 = -2 sum_i (C^i)^2   (q x q, positive semidefinite)
///   m2_ij = <C^i, C^j>      (p x p Gram matrix)
struct MomentImage {
  Matrix m1;
  Matrix m2;

  /// Frobenius norm of the pair, sqrt(|m1|^2 + |m2|^2).
  double norm() const;
};

MomentImage moment(const StructureTensor& c);

/// Rebuilds m(C) entrywise from the defining identity <<m(C), X>> = <X.C, C>,
/// pairing against a basis of symmetric matrices on each factor. Shares no
/// code path with moment() beyond infinitesimal_act and the tensor pairing.
MomentImage moment_oracle(const StructureTensor& c);

/// m(C) . C, i.e. infinitesimal_act(m1, m2, C).
StructureTensor moment_action(const StructureTensor& c);
StructureTensor moment_action(const StructureTensor& c, const MomentImage& m);

struct DistinguishedReport {
  double r = 0.0;         ///< optimal eigenvalue <m(C).C, C> / <C, C>
  double residual = 0.0;  ///< |m(C).C - rC| / (|C| |m(C)|)
  double sl_p_defect = 0.0;
  double sl_q_defect = 0.0;
  double full_min_defect = 0.0;
};

/// Residual below which a point is declared distinguished.
inline constexpr double kDistinguishedTolerance = 1e-9;

/// Throws ContractError for the zero tensor.
DistinguishedReport distinguished_report(const StructureTensor& c);

inline bool is_distinguished(const DistinguishedReport& r, double tol = kDistinguishedTolerance) {
  return r.residual < tol;
}

enum class Subgroup { SLp, SLq, SLboth, Full };

/// Relative size of the traceless part of a symmetric matrix, |M - (tr M/n) Id| / |M|.
double traceless_defect(const Matrix& m);

/// Zero iff C is minimal for the given subgroup:
///   SLp    -> traceless_defect(m2)
///   SLq    -> traceless_defect(m1)
///   SLboth -> sum of the two
///   Full   -> (|m1| + |m2|) / |C|^2
double minimality_defect(const StructureTensor& c, Subgroup subgroup);

}  // namespace nilsoliton
