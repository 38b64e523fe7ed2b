#pragma once

#include "nilsoliton/tensor.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nilsoliton {

// ---------------------------------------------------------------------------
// Concatenation and adjoin
// ---------------------------------------------------------------------------

/// A +_c B: C_i = blockdiag(A_i, B_i). Requires A.p == B.p.
StructureTensor concat(const StructureTensor& a, const StructureTensor& b);

/// (A_1..A_{p1}, 0..0) +_c (B_1..B_{p2}) for p1 <= p2.
StructureTensor pad_concat(const StructureTensor& a, const StructureTensor& b);

/// Left-to-right concatenation of several tuples, each zero-padded to the
/// largest p. Blocks appear along the diagonal in list order.
StructureTensor concat_padded(std::span<const StructureTensor> parts);

/// A +_a {B^1, ..., B^m}. The last slot of A is shared with the first
/// component of every B^i; the remaining components of each B^i get fresh
/// slots, in list order. Type (A.p + sum(B^i.p - 1), A.q + sum B^i.q).
/// An empty list is a ContractError.
StructureTensor adjoin(const StructureTensor& a, std::span<const StructureTensor> bs);

struct RescaleResult {
  StructureTensor scaled;  ///< s * B
  double s = 1.0;
  double lambda_a = 0.0;  ///< m1(A).A = lambda_a A
  double lambda_b = 0.0;  ///< m1(B).B = lambda_b B, before rescaling
};

/// Eigenvalue of the m1 part of the moment action, with the relative residual
/// |m1(C).C - lambda C| / (|C| |m1(C)|).
struct SlqEigen {
  double lambda = 0.0;
  double residual = 0.0;
};
SlqEigen slq_eigen(const StructureTensor& c);

/// Rescales B so that its m1-eigenvalue matches A's. Both inputs must satisfy
/// m1(.).(.) = lambda (.) to within tol with lambda > 0.
RescaleResult rescale_match(const StructureTensor& a, const StructureTensor& b, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Standard blocks
// ---------------------------------------------------------------------------

enum class BlockName { J, K, B1, B2, B3, B4, B5, B6, JKPair, Soliton23, HeisenbergJ };

BlockName parse_block_name(std::string_view name);
std::string to_string(BlockName name);

/// The fixed integer matrices J, K (2 x 2) and B1..B6 (4 x 4).
Matrix standard_matrix(BlockName name);

/// Tuples: J and B1..B6 as p = 1 tensors, JKPair = (B1, B2) in so(4)^2,
/// Soliton23 = (J (+) 0_1, 0_1 (+) J) in so(3)^2, HeisenbergJ = k-fold
/// J +_c ... +_c J in so(2k)^1. K is symmetric and has no tensor form.
StructureTensor standard_blocks(BlockName name, int k = 1);

/// (B_1, ..., B_j) in so(4)^j, 1 <= j <= 6.
StructureTensor b_tuple(int j);

// ---------------------------------------------------------------------------
// Minimal tuples D
// ---------------------------------------------------------------------------

/// An SL(q) x SL(p)-minimal tuple with D_1 = J (+) ... (+) J, all components
/// mutually orthogonal with |D_i|^2 = q. Supports p = D_q and p = D_q - 1 (a
/// second complex structure D_2 is dropped). When q is a power of two every
/// component is a signed perfect matching, so all entries are exactly 0 or
/// +-1; otherwise the complement of {D_1, D_2} is orthonormalised numerically.
StructureTensor build_minimal_D(int q, int p);

/// (lambda D_1, mu D_2, ..., mu D_p).
StructureTensor d_tilde(const StructureTensor& d, double lambda, double mu);

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

enum class FamilyKind { HeisenbergJ, Soliton23, BBlocks, NonEinstein, J9, MinimalD, AdjoinedNonEinstein };

FamilyKind parse_family_kind(std::string_view name);
std::string to_string(FamilyKind kind);

/// Parameters naming one of the constructed tuples.
///
///   HeisenbergJ          k J-blocks, type (1, 2k)
///   Soliton23            type (2, 3)
///   BBlocks              (B_1..B_j), type (j, 4)
///   NonEinstein          A_1 +_c (t_1 B_1, B_2) +_c ... +_c (t_{n-1} B_1, B_2)
///                        +_c (B_1..B_j) [+_c Soliton23 when d = 3],
///                        type (j, 2k + 4n + d)
///   J9                   [J] +_c Soliton23 +_c (B_1..B_j), type (j, 9)
///   MinimalD             d_tilde(build_minimal_D(dim_q, dim_p), lambda, mu)
///   AdjoinedNonEinstein  base family (NonEinstein, or J9 when base_is_j9)
///                        adjoined with every member of adjoin_list
struct FamilySpec {
  FamilyKind kind = FamilyKind::NonEinstein;
  int j = 2;
  int k = 2;
  int n = 1;
  std::vector<double> t;  ///< t_1..t_{n-1}; t_n = 1 is implicit
  int d = 0;              ///< 0 or 3
  bool base_is_j9 = false;
  std::vector<FamilySpec> adjoin_list;
  int dim_q = 4;  ///< MinimalD only
  int dim_p = 6;  ///< MinimalD only
  double lambda = 1.0;
  double mu = 1.0;

  static FamilySpec heisenberg(int k);
  static FamilySpec soliton23();
  static FamilySpec b_blocks(int j);
  static FamilySpec non_einstein(int j, int k, int n, std::vector<double> t = {}, int d = 0);
  static FamilySpec j9(int j);
  static FamilySpec minimal_d(int q, int p, double lambda = 1.0, double mu = 1.0);
  static FamilySpec adjoined(FamilySpec base, std::vector<FamilySpec> list);

  /// Throws ContractError when the parameters violate the family's invariants.
  void validate() const;

  /// 2k >= 4n + d, the hypothesis under which W certifies non-Einstein (NonEinstein and
  /// the base of AdjoinedNonEinstein).
  bool non_einstein_precondition() const;

  /// The base spec of an AdjoinedNonEinstein family (kind NonEinstein or J9).
  FamilySpec base() const;

  /// Declared type (p, q).
  int type_p() const;
  int type_q() const;

  /// Free-form notes attached to built tensors (e.g. that the (j, 9) B block
  /// is read in so(4)).
  std::vector<std::string> notes() const;

  bool operator==(const FamilySpec&) const = default;
};

StructureTensor build_family(const FamilySpec& spec);

/// How a family tensor is assembled from smaller tuples: either a leaf tuple,
/// a zero-padded concatenation of parts, or an adjoin of parts (first part is
/// the base, the rest are adjoined to its last slot).
struct Composition {
  enum class Kind { Leaf, Concat, Adjoin };
  Kind kind = Kind::Leaf;
  std::string label;
  std::optional<FamilySpec> leaf_spec;  ///< set for leaves that are named families
  std::optional<StructureTensor> leaf;  ///< Kind::Leaf only
  std::vector<Composition> parts;

  StructureTensor build() const;
};

Composition family_composition(const FamilySpec& spec);

}  // namespace nilsoliton
