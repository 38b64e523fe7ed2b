#pragma once

#include "nilsoliton/constructions.hpp"
#include "nilsoliton/moment.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nilsoliton {

// ---------------------------------------------------------------------------
// The family subspace W
// ---------------------------------------------------------------------------

/// One basis direction of W: coefficient `var` times `mat` placed at
/// rows/cols [offset, offset + mat.rows()) of slot `slot`.
struct WAtom {
  std::string name;  ///< "a1", "b1", "c1", "d1", "s1", "lambda1", "mu1[2]", ...
  int var = 0;       ///< index into the coordinate vector
  int slot = 0;
  int offset = 0;
  Matrix mat;
};

/// Diagonal block of R^q on which H acts; m1 restricted to it is either a
/// scalar or (for the soliton block) diagonal.
struct WBlock {
  std::string name;
  int offset = 0;
  int size = 0;
  bool scalar = true;
};

/// Shape of W for a family: a1 A_1 +_c (b_i B_1, c_i B_2)_{i<n} +_c
/// (d_1 B_1, ..., d_j B_j) [+_c (s_1, s_2) soliton] [+_a d_tilde(D, lambda, mu) ...].
/// Coordinates are a1, b_1..b_{n-1}, c_1..c_{n-1}, d_1..d_j, [s1, s2],
/// [lambda_m, mu_m per adjoined tuple]. b_n and c_n are d_1 and d_2.
class WSpace {
 public:
  static WSpace for_family(const FamilySpec& spec);

  int k() const { return k_; }
  int n() const { return n_; }
  int j() const { return j_; }
  int d() const { return d_; }
  int p() const { return p_; }
  int q() const { return q_; }
  int adjoined_count() const { return static_cast<int>(adjoined_.size()); }
  const StructureTensor& adjoined(int m) const { return adjoined_[static_cast<std::size_t>(m)]; }

  int dim() const { return static_cast<int>(var_names_.size()); }
  const std::vector<std::string>& var_names() const { return var_names_; }
  int var_index(const std::string& name) const;
  const std::vector<WAtom>& atoms() const { return atoms_; }
  const std::vector<WBlock>& blocks() const { return blocks_; }

  /// Coordinates of the family member itself (t, and the spec's lambda/mu).
  Vector family_point() const { return family_point_; }

  StructureTensor tensor(const Vector& coords) const;

  /// Reads coordinates back from a tensor by projecting onto each atom.
  /// Returns the coordinates and the relative size of the part of c lying
  /// outside W.
  std::pair<Vector, double> coordinates_of(const StructureTensor& c) const;

 private:
  int k_ = 0, n_ = 0, j_ = 0, d_ = 0, p_ = 0, q_ = 0;
  std::vector<StructureTensor> adjoined_;
  std::vector<std::string> var_names_;
  std::vector<WAtom> atoms_;
  std::vector<WBlock> blocks_;
  Vector family_point_;
};

/// A point of W.
struct WPoint {
  std::shared_ptr<const WSpace> space;
  Vector x;

  static WPoint ones(const FamilySpec& spec);
  static WPoint of_family(const FamilySpec& spec);

  double a1() const;
  /// b_i for i = 1..n (b_n = d_1).
  double b(int i) const;
  /// c_i for i = 1..n (c_n = d_2).
  double c(int i) const;
  /// d_i for i = 1..j.
  double d(int i) const;
  double lambda(int m = 0) const;
  double mu(int m = 0) const;

  /// All coordinates nonzero.
  bool open_stratum() const;
};

StructureTensor w_point_tensor(const WPoint& w);

// ---------------------------------------------------------------------------
// H-detection and the coefficient system
// ---------------------------------------------------------------------------

struct HDetectionReport {
  bool passed = true;
  bool exact = true;            ///< structural zeros were exactly 0.0
  double max_offblock = 0.0;    ///< largest |entry| that must vanish
  double max_display_error = 0.0;
  std::string first_violation;  ///< empty when passed
  Matrix m1;
  Matrix m2;
};

/// Checks m1(w) is block-scalar (diagonal on the soliton block) with the
/// displayed values, that m2(w) is diagonal with the displayed entries, and
/// that everything else is exactly zero. Tuples whose entries are not exact
/// (numerically orthonormalised D) are checked to `tol` and reported as
/// inexact.
HDetectionReport h_detection_check(const WPoint& w, double tol = 1e-12);

/// Closed forms of the m1 block values and m2 diagonal on W.
Vector displayed_m1_blocks(const WPoint& w);
Vector displayed_m2_diagonal(const WPoint& w);

struct CoefficientValues {
  std::vector<std::string> labels;  ///< one per atom, e.g. "E(a1)", "E(b1)"
  Vector displayed;                 ///< closed-form expressions
  Vector recomputed;                ///< coefficient of each atom in m(w).w
  double max_discrepancy = 0.0;     ///< relative
  std::string display_note;         ///< which printed variant the values follow
};

/// Coefficient of every atom in m(w).w. w is distinguished iff all values
/// agree (on the open stratum).
CoefficientValues coefficient_values(const WPoint& w);

/// The coefficient system is linear in the squared coordinates: E = M x^2.
/// Rows are read off the moment module exactly (integer data), one per atom.
Matrix coefficient_forms(const WSpace& space);

/// Spread (max - min) / mean of a value vector.
double spread(const Vector& values);

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

enum class Verdict { NonDistinguished, Distinguished, Indecomposable, Inconclusive };

std::string to_string(Verdict v);

struct Condition {
  std::string name;
  double value = 0.0;
  bool satisfied = false;
  std::string detail;
};

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<Condition> conditions;
  std::optional<FamilySpec> family;
  std::vector<std::string> notes;

  const Condition* find(const std::string& name) const;
};

struct CertifyOptions {
  int h_samples = 16;         ///< random W points checked for H-detection
  int spread_starts = 32;     ///< multi-start descent for the corroborating minimum
  int spread_iterations = 600;
  double spread_box_min = 0.01;  ///< squared coordinates range over [box_min, 1]
  double spread_floor = 1e-4;
  std::uint64_t seed = 20240601;
  bool run_spread = true;
};

/// Multiplier identity sum_e y_e (E_e - E_ref) = z . x^2 with z >= 0, z != 0.
struct ChainCertificate {
  std::vector<std::string> equations;  ///< "E(b1)-E(a1)" etc.
  Vector multipliers;                  ///< y
  Vector form;                         ///< z, indexed like the coordinates
  bool valid = false;                  ///< z >= 0 and z != 0
  std::string source;                  ///< "elimination chain" or "multiplier search"
};

/// Replays the elimination argument: the multipliers that combine the
/// coefficient equations into (2k+4n) S_b + (2k-4n) S_c + 2k S_d, with the
/// soliton correction when d = 3.
ChainCertificate elimination_chain(const WSpace& space);

/// General search for such multipliers (Stiemke alternative) by linear programming.
std::optional<ChainCertificate> multiplier_search(const WSpace& space);

struct SpreadMinimum {
  double best = 0.0;
  Vector argmin;  ///< squared coordinates
  int starts = 0;
};

SpreadMinimum minimize_spread(const WSpace& space, const CertifyOptions& opts);

Certificate non_einstein_certificate(const FamilySpec& spec, const CertifyOptions& opts = {});

// ---------------------------------------------------------------------------
// Orbit separation
// ---------------------------------------------------------------------------

struct OrbitIdentification {
  std::string description;
  std::vector<double> t_from;
  std::vector<double> t_to;
  GroupElement witness;
  double error = 0.0;  ///< |witness . C[t_from] - C[t_to]|_max
};

struct OrbitInvariant {
  std::vector<double> h_invariant;      ///< t_i = b_i d_2 / (c_i d_1), read off the tensor
  std::vector<double> g_canonical;      ///< sorted |t_i|
  std::vector<OrbitIdentification> identifications;  ///< verified sign / permutation moves
};

OrbitInvariant orbit_separation_invariant(const FamilySpec& spec);

/// Same H-invariant up to rtol.
bool same_h_orbit(const OrbitInvariant& a, const OrbitInvariant& b, double rtol = 1e-12);

}  // namespace nilsoliton
