#pragma once

#include "nilsoliton/certification.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nilsoliton {

/// Orthonormal basis (columns) of the common kernel of all components.
/// Singular values below rel_tol times the largest count as zero.
Matrix common_kernel(const StructureTensor& c, double rel_tol = 1e-8);

/// Pfaffian of a real skew-symmetric matrix (Parlett-Reid elimination with
/// pivoting). Zero for odd size.
double pfaffian(const Matrix& a);

/// True when every nontrivial combination sum a_i C_i is nonsingular.
/// p = 1: one determinant. p = 2: exact, via real eigenvalues of C_2^{-1} C_1.
/// p >= 3: deterministic grid plus seeded random directions on the sphere,
/// requiring |Pf| bounded away from zero with a constant sign. Odd q: false.
bool pencil_nonsingular(const StructureTensor& c, int samples = 2000, std::uint64_t seed = 7);

/// Options for structural_criteria.
struct IndecompOptions {
  std::optional<FamilySpec> meta;  ///< composition used by criterion (d)
  std::optional<Certificate> non_einstein;  ///< supplies criterion (c) when given
  CertifyOptions certify;  ///< used when (c) needs a fresh certificate
  int pencil_samples = 2000;
};

/// Sufficient criteria for indecomposability:
///   (a) q even and (q-2)(q-3)/2 + 2 <= p <= q(q-1)/2;
///   (b) (p, q) = (2, 3) with no common kernel;
///   (c) p = 2, no common kernel, certified non-Einstein;
///   (d) meta describes C as a concatenation / adjoin of components that are
///       themselves certified indecomposable;
/// plus two elementary ones: p = 1 with no common kernel, and a nonsingular
/// pencil. Returns Indecomposable when any fires, otherwise Inconclusive.
Certificate structural_criteria(const StructureTensor& c, const IndecompOptions& opts = {});

/// A splitting R^q = V1 (+) V2 with span{C_i} = span{Z} (+) span{W}, V2 in the
/// kernel of every Z and V1 in the kernel of every W (not necessarily
/// orthogonal).
struct Decomposition {
  Matrix v1;  ///< q x dim V1
  Matrix v2;  ///< q x dim V2
  Matrix z;   ///< coefficient rows: Z_r = sum_i z(r,i) C_i
  Matrix w;   ///< coefficient rows: W_r = sum_i w(r,i) C_i
  double reconstruction_error = 0.0;  ///< off-block mass after the change of basis
};

struct SearchOptions {
  int max_p = 4;
  int attempts = 24;
  std::uint64_t seed = 11;
  double rel_tol = 1e-8;
};

/// Heuristic search; a returned Decomposition has been verified by
/// reconstruction (change of basis puts Z and W on complementary diagonal
/// blocks to 1e-8). Throws ContractError for p above the cap or a nonzero
/// common kernel.
std::optional<Decomposition> decomposition_search(const StructureTensor& c, const SearchOptions& opts = {});

/// Re-checks a decomposition against C; returns the off-block error.
double verify_decomposition(const StructureTensor& c, const Decomposition& d);

}  // namespace nilsoliton
