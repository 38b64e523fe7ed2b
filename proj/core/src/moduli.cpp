#include "nilsoliton/moduli.hpp"

#include "nilsoliton/errors.hpp"
#include "nilsoliton/tensor.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>

namespace nilsoliton {

std::string to_string(ModuliSource s) {
  switch (s) {
    case ModuliSource::TableRow: return "TableRow";
    case ModuliSource::Dual: return "Dual";
    case ModuliSource::Formula: return "Formula";
  }
  return "?";
}

std::string to_string(RegionLabel l) {
  switch (l) {
    case RegionLabel::AllEinstein: return "AllEinstein";
    case RegionLabel::ExistsNonEinstein: return "ExistsNonEinstein";
    case RegionLabel::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

struct Row {
  int dim;
  std::string rule;
};

std::optional<Row> table_row(int p, int q) {
  const int d = so_dimension(q);
  if (p == 1) return Row{0, "(1,q)"};
  if (p == d) return Row{0, "(D,q)"};
  if (p == 2) {
    if (q == 4) return Row{0, "(2,4)"};
    if (q % 2 == 0 && q >= 6) return Row{q / 2 - 3, "(2,2k), k>=3"};
    if (q % 2 == 1) return Row{0, "(2,2k+1)"};
  }
  if (p == 3 && q == 4) return Row{0, "(3,4)"};
  if (p == 3 && q == 5) return Row{0, "(3,5)"};
  if (p == 3 && q == 6) return Row{2, "(3,6)"};
  return std::nullopt;
}

}  // namespace

ModuliEntry generic_moduli_entry(int p, int q) {
  if (q < 2) throw ContractError("generic_moduli_dim: q must be >= 2");
  const int d = so_dimension(q);
  if (p < 1 || p > d)
    throw ContractError("generic_moduli_dim: p must lie in [1, " + std::to_string(d) + "] for q=" + std::to_string(q));
  ModuliEntry e;
  e.p = p;
  e.q = q;
  if (const auto r = table_row(p, q)) {
    e.dim = e.raw = r->dim;
    e.source = ModuliSource::TableRow;
    e.rule = r->rule;
    return e;
  }
  if (const auto r = table_row(d - p, q)) {
    e.dim = e.raw = r->dim;
    e.source = ModuliSource::Dual;
    e.rule = "dual of " + r->rule;
    return e;
  }
  e.source = ModuliSource::Formula;
  e.rule = "p D - (q^2 + p^2 - 2) - 1";
  e.raw = p * d - (q * q + p * p - 2) - 1;
  e.clamped = e.raw < 0;
  e.dim = std::max(0, e.raw);
  return e;
}

int generic_moduli_dim(int p, int q) { return generic_moduli_entry(p, q).dim; }

int concat_moduli_bound(int p, int q1, int q2) {
  if (q1 < 2 || q2 < 2) throw ContractError("concat_moduli_bound: q1, q2 must be >= 2");
  if (!(p < so_dimension(q1) - 2) || !(p < so_dimension(q2) - 2))
    throw ContractError("concat_moduli_bound: needs p < D_q - 2 for both parts");
  return std::max(0, generic_moduli_dim(p, q1) + generic_moduli_dim(p, q2) - 1);
}

int odd_type_moduli_bound(int k, int i) {
  if (i < 1 || i > k - 4) throw ContractError("odd_type_moduli_bound: needs 1 <= i <= k - 4");
  // (2, 2i+1) is rigid; (2, 2k-2i) contributes k-i-3; one is lost to rescaling.
  return generic_moduli_dim(2, 2 * i + 1) + generic_moduli_dim(2, 2 * k - 2 * i) - 1;
}

RegionResult non_einstein_region(int p, int q) {
  RegionResult r;
  // 5q/4 - 8 compared in integers: 4p <= 5q - 32.
  r.in_region = q >= 8 && p >= 2 && 4 * p <= 5 * q - 32;
  r.bound = (q - 0.8 * (p + 8) - 7.0) / 8.0;
  r.bound_floored = std::max(0.0, r.bound);
  return r;
}

bool constructed_type(int p, int q) {
  if (p < 2 || p > 6) return false;
  if (q == 9 && p >= 3) return true;
  for (int d : {0, 3})
    for (int n = 1; 4 * n + d < q; ++n) {
      const int rest = q - 4 * n - d;
      if (rest % 2 != 0) continue;
      const int k = rest / 2;
      if (k >= 1 && 2 * k >= 4 * n + d) return true;
    }
  return false;
}

std::vector<RegionRow> region_table(int q_max) {
  if (q_max < 3) throw ContractError("region_table: q_max must be >= 3");
  std::vector<RegionRow> rows;
  for (int q = 3; q <= q_max; ++q) {
    const int d = so_dimension(q);
    for (int p = 1; p <= d; ++p) {
      RegionRow r{p, q, RegionLabel::Unknown, ""};
      if (p == 1) {
        r.label = RegionLabel::AllEinstein;
        r.source = "type (1,q): Heisenberg plus abelian";
      } else if (p == d) {
        r.label = RegionLabel::AllEinstein;
        r.source = "type (D,q): unique algebra";
      } else if (p == d - 1) {
        r.label = RegionLabel::AllEinstein;
        r.source = "type (D-1,q): Nikolayevsky";
      } else if (p + q <= 6) {
        r.label = RegionLabel::AllEinstein;
        r.source = "dimension <= 6: Will";
      } else if (constructed_type(p, q)) {
        r.label = RegionLabel::ExistsNonEinstein;
        r.source = q == 9 ? "(j,9) concatenation" : "C[t] family (j, 2k+4n+d)";
      } else if (non_einstein_region(p, q).in_region) {
        r.label = RegionLabel::ExistsNonEinstein;
        r.source = "adjoin region 2 <= p <= 5q/4 - 8";
      } else if (p == 3 && q == 6) {
        r.label = RegionLabel::ExistsNonEinstein;
        r.source = "type (3,6): Will";
      }
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

std::string region_table_csv(const std::vector<RegionRow>& rows) {
  std::ostringstream os;
  os << "p,q,label,source\n";
  for (const auto& r : rows) os << r.p << ',' << r.q << ',' << to_string(r.label) << ",\"" << r.source << "\"\n";
  return os.str();
}

}  // namespace nilsoliton
