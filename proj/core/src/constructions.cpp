#include "nilsoliton/constructions.hpp"

#include "nilsoliton/errors.hpp"
#include "nilsoliton/moment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace nilsoliton {

namespace {

std::string num(double x) {
  std::string s = std::to_string(x);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

Matrix padded(const Matrix& m, int offset, int total) {
  Matrix out = Matrix::Zero(total, total);
  out.block(offset, offset, m.rows(), m.cols()) = m;
  return out;
}

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

// Round-robin 1-factorization of K_q (q even): q-1 perfect matchings.
std::vector<std::vector<std::pair<int, int>>> round_robin(int q) {
  std::vector<std::vector<std::pair<int, int>>> rounds;
  const int m = q - 1;
  for (int r = 0; r < m; ++r) {
    std::vector<std::pair<int, int>> match;
    match.emplace_back(r, m);
    for (int i = 1; i < q / 2; ++i) match.emplace_back((r + i) % m, (r - i + m) % m);
    rounds.push_back(std::move(match));
  }
  return rounds;
}

Matrix sylvester(int m) {
  Matrix h = Matrix::Ones(1, 1);
  while (h.rows() < m) {
    const auto n = h.rows();
    Matrix next(2 * n, 2 * n);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

Matrix matching_matrix(int q, const std::vector<std::pair<int, int>>& match, const Eigen::RowVectorXd& signs) {
  Matrix m = Matrix::Zero(q, q);
  for (std::size_t i = 0; i < match.size(); ++i) {
    const auto [a, b] = match[i];
    m(a, b) = signs(static_cast<Eigen::Index>(i));
    m(b, a) = -signs(static_cast<Eigen::Index>(i));
  }
  return m;
}

// Every element squares to -Id; the first is J (+) ... (+) J, the second is
// another complex structure.
std::vector<Matrix> hadamard_basis(int q) {
  auto rounds = round_robin(q);
  // Relabel so the first matching is (0,1),(2,3),...
  std::vector<int> perm(static_cast<std::size_t>(q));
  for (std::size_t i = 0; i < rounds[0].size(); ++i) {
    perm[static_cast<std::size_t>(rounds[0][i].first)] = static_cast<int>(2 * i);
    perm[static_cast<std::size_t>(rounds[0][i].second)] = static_cast<int>(2 * i + 1);
  }
  for (auto& match : rounds) {
    for (auto& [a, b] : match) {
      a = perm[static_cast<std::size_t>(a)];
      b = perm[static_cast<std::size_t>(b)];
      if (a > b) std::swap(a, b);
    }
    std::sort(match.begin(), match.end());
  }
  const Matrix h = sylvester(q / 2);
  std::vector<Matrix> out;
  // Row 0 of H is all ones: out[0] is J (+) ... (+) J, out[1] another
  // complex structure.
  for (int row = 0; row < h.rows(); ++row)
    for (std::size_t r = 0; r < rounds.size(); ++r) out.push_back(matching_matrix(q, rounds[r], h.row(row)));
  return out;
}

std::vector<Matrix> completed_basis(int q) {
  Matrix d1 = Matrix::Zero(q, q);
  Matrix d2 = Matrix::Zero(q, q);
  for (int i = 0; i + 1 < q; i += 2) {
    d1(i, i + 1) = 1.0;
    d1(i + 1, i) = -1.0;
  }
  for (int i = 1; i < q; i += 2) {
    const int a = i;
    const int b = (i + 1) % q;
    d2(std::min(a, b), std::max(a, b)) = 1.0;
    d2(std::max(a, b), std::min(a, b)) = -1.0;
  }
  const int dim = so_dimension(q);
  // Coordinates w.r.t. the orthonormal basis (E_ab - E_ba)/sqrt(2), a < b.
  auto coords = [&](const Matrix& m) {
    Vector v(dim);
    int col = 0;
    for (int a = 0; a < q; ++a)
      for (int b = a + 1; b < q; ++b) v(col++) = std::sqrt(2.0) * m(a, b);
    return v;
  };
  Matrix start(dim, dim + 2);
  start.col(0) = coords(d1);
  start.col(1) = coords(d2);
  start.rightCols(dim) = Matrix::Identity(dim, dim);
  Eigen::HouseholderQR<Matrix> qr(start);
  const Matrix basis = qr.householderQ() * Matrix::Identity(dim, dim);
  std::vector<Matrix> out{d1, d2};
  const double scale = std::sqrt(static_cast<double>(q));
  for (int c = 2; c < dim; ++c) {
    Matrix m = Matrix::Zero(q, q);
    int col = 0;
    for (int a = 0; a < q; ++a)
      for (int b = a + 1; b < q; ++b) {
        const double x = scale * basis(col++, c) / std::sqrt(2.0);
        m(a, b) = x;
        m(b, a) = -x;
      }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

StructureTensor concat(const StructureTensor& a, const StructureTensor& b) {
  if (a.p() != b.p())
    throw DimensionError("concat: p mismatch (" + std::to_string(a.p()) + " vs " + std::to_string(b.p()) +
                         "); use pad_concat");
  const int q = a.q() + b.q();
  std::vector<Matrix> mats;
  for (int i = 0; i < a.p(); ++i) {
    Matrix m = Matrix::Zero(q, q);
    m.topLeftCorner(a.q(), a.q()) = a[i];
    m.bottomRightCorner(b.q(), b.q()) = b[i];
    mats.push_back(std::move(m));
  }
  return StructureTensor(a.p(), q, std::move(mats));
}

StructureTensor pad_concat(const StructureTensor& a, const StructureTensor& b) {
  if (a.p() > b.p())
    throw DimensionError("pad_concat: left operand has p=" + std::to_string(a.p()) + " > " + std::to_string(b.p()));
  const StructureTensor parts[] = {a, b};
  return concat_padded(parts);
}

StructureTensor concat_padded(std::span<const StructureTensor> parts) {
  if (parts.empty()) throw ContractError("concat_padded: no parts");
  int p = 0;
  int q = 0;
  for (const auto& c : parts) {
    p = std::max(p, c.p());
    q += c.q();
  }
  std::vector<Matrix> mats(static_cast<std::size_t>(p), Matrix::Zero(q, q));
  int off = 0;
  for (const auto& c : parts) {
    for (int i = 0; i < c.p(); ++i) mats[static_cast<std::size_t>(i)].block(off, off, c.q(), c.q()) = c[i];
    off += c.q();
  }
  return StructureTensor(p, q, std::move(mats));
}

StructureTensor adjoin(const StructureTensor& a, std::span<const StructureTensor> bs) {
  if (bs.empty()) throw ContractError("adjoin: empty list of adjoined tuples");
  int p = a.p();
  int q = a.q();
  for (const auto& b : bs) {
    p += b.p() - 1;
    q += b.q();
  }
  std::vector<Matrix> mats(static_cast<std::size_t>(p), Matrix::Zero(q, q));
  for (int i = 0; i < a.p(); ++i) mats[static_cast<std::size_t>(i)].topLeftCorner(a.q(), a.q()) = a[i];
  const int shared = a.p() - 1;
  int off = a.q();
  int slot = a.p();
  for (const auto& b : bs) {
    mats[static_cast<std::size_t>(shared)].block(off, off, b.q(), b.q()) = b[0];
    for (int i = 1; i < b.p(); ++i) mats[static_cast<std::size_t>(slot++)].block(off, off, b.q(), b.q()) = b[i];
    off += b.q();
  }
  return StructureTensor(p, q, std::move(mats));
}

SlqEigen slq_eigen(const StructureTensor& c) {
  const double cc = inner(c, c);
  if (cc == 0.0) throw ContractError("slq_eigen: zero tensor");
  const MomentImage m = moment(c);
  const StructureTensor w = infinitesimal_act(m.m1, Matrix::Zero(c.p(), c.p()), c);
  SlqEigen e;
  e.lambda = inner(w, c) / cc;
  e.residual = norm(axpy(w, -e.lambda, c)) / (std::sqrt(cc) * m.m1.norm());
  return e;
}

RescaleResult rescale_match(const StructureTensor& a, const StructureTensor& b, double tol) {
  const SlqEigen ea = slq_eigen(a);
  const SlqEigen eb = slq_eigen(b);
  if (ea.residual >= tol) throw ContractError("rescale_match: left tuple is not SL(q)-distinguished");
  if (eb.residual >= tol) throw ContractError("rescale_match: right tuple is not SL(q)-distinguished");
  if (ea.lambda <= 0.0 || eb.lambda <= 0.0) throw ContractError("rescale_match: non-positive eigenvalue");
  const double s = std::sqrt(ea.lambda / eb.lambda);
  return RescaleResult{b.scaled(s), s, ea.lambda, eb.lambda};
}

// ---------------------------------------------------------------------------

BlockName parse_block_name(std::string_view name) {
  static const std::pair<std::string_view, BlockName> table[] = {
      {"J", BlockName::J},   {"K", BlockName::K},   {"B1", BlockName::B1},
      {"B2", BlockName::B2}, {"B3", BlockName::B3}, {"B4", BlockName::B4},
      {"B5", BlockName::B5}, {"B6", BlockName::B6}, {"JK_pair", BlockName::JKPair},
      {"Soliton23", BlockName::Soliton23}, {"HeisenbergJ", BlockName::HeisenbergJ}};
  for (const auto& [s, b] : table)
    if (s == name) return b;
  throw ContractError("unknown block name '" + std::string(name) + "'");
}

std::string to_string(BlockName name) {
  switch (name) {
    case BlockName::J: return "J";
    case BlockName::K: return "K";
    case BlockName::B1: return "B1";
    case BlockName::B2: return "B2";
    case BlockName::B3: return "B3";
    case BlockName::B4: return "B4";
    case BlockName::B5: return "B5";
    case BlockName::B6: return "B6";
    case BlockName::JKPair: return "JK_pair";
    case BlockName::Soliton23: return "Soliton23";
    case BlockName::HeisenbergJ: return "HeisenbergJ";
  }
  return "?";
}

Matrix standard_matrix(BlockName name) {
  Matrix m;
  switch (name) {
    case BlockName::J:
      m.resize(2, 2);
      m << 0, 1, -1, 0;
      return m;
    case BlockName::K:
      m.resize(2, 2);
      m << 0, 1, 1, 0;
      return m;
    default:
      break;
  }
  m.resize(4, 4);
  switch (name) {
    case BlockName::B1:
      m << 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0;
      break;
    case BlockName::B2:
      m << 0, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 0;
      break;
    case BlockName::B3:
      m << 0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0;
      break;
    case BlockName::B4:
      m << 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
      break;
    case BlockName::B5:
      m << 0, 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 0;
      break;
    case BlockName::B6:
      m << 0, 0, 1, 0, 0, 0, 0, -1, -1, 0, 0, 0, 0, 1, 0, 0;
      break;
    default:
      throw ContractError("standard_matrix: '" + to_string(name) + "' is a tuple, not a matrix");
  }
  return m;
}

StructureTensor b_tuple(int j) {
  if (j < 1 || j > 6) throw ContractError("b_tuple: j must be in 1..6, got " + std::to_string(j));
  static const BlockName names[] = {BlockName::B1, BlockName::B2, BlockName::B3,
                                    BlockName::B4, BlockName::B5, BlockName::B6};
  std::vector<Matrix> mats;
  for (int i = 0; i < j; ++i) mats.push_back(standard_matrix(names[i]));
  return StructureTensor(j, 4, std::move(mats));
}

StructureTensor standard_blocks(BlockName name, int k) {
  switch (name) {
    case BlockName::K:
      throw ContractError("K is symmetric and has no structure-tensor form; use standard_matrix");
    case BlockName::J:
    case BlockName::B1:
    case BlockName::B2:
    case BlockName::B3:
    case BlockName::B4:
    case BlockName::B5:
    case BlockName::B6: {
      Matrix m = standard_matrix(name);
      const int q = static_cast<int>(m.rows());
      return StructureTensor(1, q, {std::move(m)});
    }
    case BlockName::JKPair:
      return b_tuple(2);
    case BlockName::Soliton23: {
      const Matrix j = standard_matrix(BlockName::J);
      return StructureTensor(2, 3, {padded(j, 0, 3), padded(j, 1, 3)});
    }
    case BlockName::HeisenbergJ: {
      if (k < 1) throw ContractError("HeisenbergJ needs k >= 1");
      const Matrix j = standard_matrix(BlockName::J);
      std::vector<Matrix> blocks(static_cast<std::size_t>(k), j);
      return StructureTensor(1, 2 * k, {block_diagonal(blocks)});
    }
  }
  throw ContractError("unknown block");
}

// ---------------------------------------------------------------------------

StructureTensor build_minimal_D(int q, int p) {
  if (q < 2 || q % 2 != 0) throw ContractError("build_minimal_D: q must be even and >= 2, got " + std::to_string(q));
  const int dim = so_dimension(q);
  if (p != dim && p != dim - 1)
    throw ContractError("build_minimal_D: p must be " + std::to_string(dim) + " or " + std::to_string(dim - 1) +
                        " for q=" + std::to_string(q));
  if (p < 1) throw ContractError("build_minimal_D: p must be positive");
  std::vector<Matrix> basis = power_of_two(q / 2) ? hadamard_basis(q) : completed_basis(q);
  if (p == dim - 1) basis.erase(basis.begin() + 1);
  return StructureTensor(p, q, std::move(basis));
}

StructureTensor d_tilde(const StructureTensor& d, double lambda, double mu) {
  std::vector<Matrix> mats;
  mats.push_back(lambda * d[0]);
  for (int i = 1; i < d.p(); ++i) mats.push_back(mu * d[i]);
  return StructureTensor(d.p(), d.q(), std::move(mats));
}

// ---------------------------------------------------------------------------

FamilyKind parse_family_kind(std::string_view name) {
  static const std::pair<std::string_view, FamilyKind> table[] = {
      {"heisenberg", FamilyKind::HeisenbergJ},
      {"soliton23", FamilyKind::Soliton23},
      {"b-blocks", FamilyKind::BBlocks},
      {"non-einstein", FamilyKind::NonEinstein},
      {"j9", FamilyKind::J9},
      {"minimal-d", FamilyKind::MinimalD},
      {"adjoined", FamilyKind::AdjoinedNonEinstein}};
  for (const auto& [s, k] : table)
    if (s == name) return k;
  throw ContractError("unknown family '" + std::string(name) +
                      "' (expected heisenberg, soliton23, b-blocks, non-einstein, j9, minimal-d, adjoined)");
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::HeisenbergJ: return "heisenberg";
    case FamilyKind::Soliton23: return "soliton23";
    case FamilyKind::BBlocks: return "b-blocks";
    case FamilyKind::NonEinstein: return "non-einstein";
    case FamilyKind::J9: return "j9";
    case FamilyKind::MinimalD: return "minimal-d";
    case FamilyKind::AdjoinedNonEinstein: return "adjoined";
  }
  return "?";
}

FamilySpec FamilySpec::heisenberg(int k) {
  FamilySpec s;
  s.kind = FamilyKind::HeisenbergJ;
  s.k = k;
  return s;
}

FamilySpec FamilySpec::soliton23() {
  FamilySpec s;
  s.kind = FamilyKind::Soliton23;
  return s;
}

FamilySpec FamilySpec::b_blocks(int j) {
  FamilySpec s;
  s.kind = FamilyKind::BBlocks;
  s.j = j;
  return s;
}

FamilySpec FamilySpec::non_einstein(int j, int k, int n, std::vector<double> t, int d) {
  FamilySpec s;
  s.kind = FamilyKind::NonEinstein;
  s.j = j;
  s.k = k;
  s.n = n;
  s.t = t.empty() && n > 1 ? std::vector<double>(static_cast<std::size_t>(n - 1), 1.0) : std::move(t);
  s.d = d;
  return s;
}

FamilySpec FamilySpec::j9(int j) {
  FamilySpec s;
  s.kind = FamilyKind::J9;
  s.j = j;
  s.k = 1;
  s.n = 1;
  s.d = 3;
  return s;
}

FamilySpec FamilySpec::minimal_d(int q, int p, double lambda, double mu) {
  FamilySpec s;
  s.kind = FamilyKind::MinimalD;
  s.dim_q = q;
  s.dim_p = p;
  s.lambda = lambda;
  s.mu = mu;
  return s;
}

FamilySpec FamilySpec::adjoined(FamilySpec base, std::vector<FamilySpec> list) {
  if (base.kind != FamilyKind::NonEinstein && base.kind != FamilyKind::J9)
    throw ContractError("adjoined: base must be non-einstein or j9");
  FamilySpec s = std::move(base);
  s.base_is_j9 = s.kind == FamilyKind::J9;
  s.kind = FamilyKind::AdjoinedNonEinstein;
  s.adjoin_list = std::move(list);
  return s;
}

FamilySpec FamilySpec::base() const {
  if (kind != FamilyKind::AdjoinedNonEinstein) return *this;
  FamilySpec b = *this;
  b.kind = base_is_j9 ? FamilyKind::J9 : FamilyKind::NonEinstein;
  b.base_is_j9 = false;
  b.adjoin_list.clear();
  return b;
}

void FamilySpec::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ContractError("family spec: " + msg);
  };
  switch (kind) {
    case FamilyKind::HeisenbergJ:
      need(k >= 1, "heisenberg needs k >= 1");
      break;
    case FamilyKind::Soliton23:
      break;
    case FamilyKind::BBlocks:
      need(j >= 1 && j <= 6, "b-blocks needs 1 <= j <= 6");
      break;
    case FamilyKind::NonEinstein:
      need(j >= 2 && j <= 6, "non-einstein needs 2 <= j <= 6");
      need(k >= 1, "non-einstein needs k >= 1");
      need(n >= 1, "non-einstein needs n >= 1");
      need(static_cast<int>(t.size()) == n - 1,
           "t must have n-1 = " + std::to_string(n - 1) + " entries, got " + std::to_string(t.size()));
      for (double x : t) need(std::isfinite(x), "t entries must be finite");
      need(d == 0 || d == 3, "d must be 0 or 3");
      break;
    case FamilyKind::J9:
      need(j >= 2 && j <= 6, "j9 needs 2 <= j <= 6");
      break;
    case FamilyKind::MinimalD:
      need(dim_q >= 2 && dim_q % 2 == 0, "minimal-d needs an even q >= 2");
      need(dim_p == so_dimension(dim_q) || dim_p == so_dimension(dim_q) - 1,
           "minimal-d needs p = D_q or D_q - 1");
      need(std::isfinite(lambda) && std::isfinite(mu), "lambda and mu must be finite");
      break;
    case FamilyKind::AdjoinedNonEinstein:
      base().validate();
      need(!adjoin_list.empty(), "adjoined needs a non-empty adjoin_list");
      for (const auto& a : adjoin_list) {
        need(a.kind != FamilyKind::AdjoinedNonEinstein, "nested adjoined families are not supported");
        a.validate();
      }
      break;
  }
}

bool FamilySpec::non_einstein_precondition() const {
  const FamilySpec b = base();
  if (b.kind == FamilyKind::J9) return 2 * b.k >= 4 * b.n + 3;
  return 2 * b.k >= 4 * b.n + b.d;
}

int FamilySpec::type_p() const {
  switch (kind) {
    case FamilyKind::HeisenbergJ: return 1;
    case FamilyKind::Soliton23: return 2;
    case FamilyKind::BBlocks:
    case FamilyKind::NonEinstein:
    case FamilyKind::J9: return j;
    case FamilyKind::MinimalD: return dim_p;
    case FamilyKind::AdjoinedNonEinstein: {
      int p = base().type_p();
      for (const auto& a : adjoin_list) p += a.type_p() - 1;
      return p;
    }
  }
  return 0;
}

int FamilySpec::type_q() const {
  switch (kind) {
    case FamilyKind::HeisenbergJ: return 2 * k;
    case FamilyKind::Soliton23: return 3;
    case FamilyKind::BBlocks: return 4;
    case FamilyKind::NonEinstein: return 2 * k + 4 * n + d;
    case FamilyKind::J9: return 9;
    case FamilyKind::MinimalD: return dim_q;
    case FamilyKind::AdjoinedNonEinstein: {
      int q = base().type_q();
      for (const auto& a : adjoin_list) q += a.type_q();
      return q;
    }
  }
  return 0;
}

std::vector<std::string> FamilySpec::notes() const {
  std::vector<std::string> out;
  if (kind == FamilyKind::J9 || (kind == FamilyKind::AdjoinedNonEinstein && base_is_j9))
    out.push_back("j9: B blocks taken in so(4) so that 2 + 3 + 4 = 9; an so(6) reading does not fit type (j,9)");
  if (kind == FamilyKind::MinimalD && !power_of_two(dim_q / 2))
    out.push_back("minimal-d: q/2 is not a power of two; components beyond D_1, D_2 are orthonormalised numerically");
  return out;
}

// ---------------------------------------------------------------------------

StructureTensor Composition::build() const {
  switch (kind) {
    case Kind::Leaf:
      if (!leaf) throw ContractError("composition leaf without tensor");
      return *leaf;
    case Kind::Concat: {
      std::vector<StructureTensor> built;
      for (const auto& c : parts) built.push_back(c.build());
      return concat_padded(built);
    }
    case Kind::Adjoin: {
      if (parts.size() < 2) throw ContractError("adjoin composition needs a base and at least one tuple");
      std::vector<StructureTensor> rest;
      for (std::size_t i = 1; i < parts.size(); ++i) rest.push_back(parts[i].build());
      return adjoin(parts[0].build(), rest);
    }
  }
  throw ContractError("bad composition");
}

namespace {

Composition leaf_of(const FamilySpec& s, StructureTensor c, std::string label) {
  Composition out;
  out.kind = Composition::Kind::Leaf;
  out.label = std::move(label);
  out.leaf_spec = s;
  out.leaf = std::move(c);
  return out;
}

Composition middle_leaf(double t) {
  const StructureTensor c(2, 4, {t * standard_matrix(BlockName::B1), standard_matrix(BlockName::B2)});
  Composition out;
  out.kind = Composition::Kind::Leaf;
  out.label = "(" + num(t) + " B1, B2)";
  out.leaf = c;
  return out;
}

}  // namespace

Composition family_composition(const FamilySpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case FamilyKind::HeisenbergJ:
      return leaf_of(spec, standard_blocks(BlockName::HeisenbergJ, spec.k), "J^" + std::to_string(spec.k));
    case FamilyKind::Soliton23:
      return leaf_of(spec, standard_blocks(BlockName::Soliton23), "soliton23");
    case FamilyKind::BBlocks:
      return leaf_of(spec, b_tuple(spec.j), "(B1..B" + std::to_string(spec.j) + ")");
    case FamilyKind::MinimalD:
      return leaf_of(spec, d_tilde(build_minimal_D(spec.dim_q, spec.dim_p), spec.lambda, spec.mu),
                     "D(" + std::to_string(spec.dim_q) + "," + std::to_string(spec.dim_p) + ")");
    case FamilyKind::NonEinstein: {
      Composition out;
      out.kind = Composition::Kind::Concat;
      out.label = "C[t]";
      out.parts.push_back(family_composition(FamilySpec::heisenberg(spec.k)));
      for (double t : spec.t) out.parts.push_back(middle_leaf(t));
      out.parts.push_back(family_composition(FamilySpec::b_blocks(spec.j)));
      if (spec.d == 3) out.parts.push_back(family_composition(FamilySpec::soliton23()));
      return out;
    }
    case FamilyKind::J9: {
      Composition out;
      out.kind = Composition::Kind::Concat;
      out.label = "[J] + soliton23 + B";
      out.parts.push_back(family_composition(FamilySpec::heisenberg(1)));
      out.parts.push_back(family_composition(FamilySpec::soliton23()));
      out.parts.push_back(family_composition(FamilySpec::b_blocks(spec.j)));
      return out;
    }
    case FamilyKind::AdjoinedNonEinstein: {
      Composition out;
      out.kind = Composition::Kind::Adjoin;
      out.label = "adjoin";
      out.parts.push_back(family_composition(spec.base()));
      for (const auto& a : spec.adjoin_list) out.parts.push_back(family_composition(a));
      return out;
    }
  }
  throw ContractError("unknown family kind");
}

StructureTensor build_family(const FamilySpec& spec) {
  const StructureTensor c = family_composition(spec).build();
  if (c.p() != spec.type_p() || c.q() != spec.type_q())
    throw NumericalError("build_family: built type (" + std::to_string(c.p()) + "," + std::to_string(c.q()) +
                         ") differs from declared (" + std::to_string(spec.type_p()) + "," +
                         std::to_string(spec.type_q()) + ")");
  std::vector<std::string> labels{to_string(spec.kind)};
  for (auto& n : spec.notes()) labels.push_back(std::move(n));
  return c.with_labels(std::move(labels));
}

}  // namespace nilsoliton
