#pragma once

#include <string>
#include <vector>

namespace nilsoliton {

enum class ModuliSource { TableRow, Dual, Formula };

std::string to_string(ModuliSource s);

/// Dimension of the moduli of generic points of type (p, q).
struct ModuliEntry {
  int p = 0;
  int q = 0;
  int dim = 0;
  ModuliSource source = ModuliSource::Formula;
  std::string rule;      ///< which row or formula applied
  bool clamped = false;  ///< the formula went negative and was raised to 0
  int raw = 0;           ///< formula value before clamping
};

/// Table rows first ((1,q), (2,4), (2,2k) k>=3, (2,2k+1), (3,4), (3,5),
/// (3,6), (D,q)), then the dual p -> D - p against the same rows, then
/// p D - (q^2 + p^2 - 2) - 1, clamped at 0. Requires 1 <= p <= D.
ModuliEntry generic_moduli_entry(int p, int q);
int generic_moduli_dim(int p, int q);

/// M_{p q1} + M_{p q2} - 1 floored at 0; requires p < D_{q1} - 2 and
/// p < D_{q2} - 2.
int concat_moduli_bound(int p, int q1, int q2);

/// Type (2, 2k+1) split as (2, 2i+1) + (2, 2k-2i): k - i - 4 for
/// 1 <= i <= k - 4.
int odd_type_moduli_bound(int k, int i);

struct RegionResult {
  bool in_region = false;
  double bound = 0.0;          ///< (q - 4(p+8)/5 - 7) / 8, may be negative
  double bound_floored = 0.0;  ///< max(bound, 0)
};

/// 8 <= q and 2 <= p <= 5q/4 - 8.
RegionResult non_einstein_region(int p, int q);

enum class RegionLabel { AllEinstein, ExistsNonEinstein, Unknown };

std::string to_string(RegionLabel l);

struct RegionRow {
  int p = 0;
  int q = 0;
  RegionLabel label = RegionLabel::Unknown;
  std::string source;
};

/// One row per (p, q) with 3 <= q <= q_max and 1 <= p <= D_q.
std::vector<RegionRow> region_table(int q_max);

/// True when (p, q) is the type of a constructed non-Einstein family:
/// (j, 2k + 4n + d) with 2 <= j <= 6, 2k >= 4n + d, d in {0, 3}, or (j, 9)
/// with 3 <= j <= 6.
bool constructed_type(int p, int q);

std::string region_table_csv(const std::vector<RegionRow>& rows);

}  // namespace nilsoliton
