#include "nilsoliton/certification.hpp"

#include "nilsoliton/errors.hpp"
#include "nilsoliton/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace nilsoliton {

namespace {

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

Matrix soliton_part(int which) {
  Matrix m = Matrix::Zero(3, 3);
  m(which, which + 1) = 1.0;
  m(which + 1, which) = -1.0;
  return m;
}

// Which printed coefficient list the recomputed values follow.
constexpr const char* kDisplayNote = "coefficients follow the 4 d_I^2 form";
constexpr const char* kAdjoinedNote = "; the adjoined slot carries 4 d_j^2 + lambda^2 |D_1|^2";

}  // namespace

// ---------------------------------------------------------------------------
// WSpace
// ---------------------------------------------------------------------------

WSpace WSpace::for_family(const FamilySpec& spec) {
  spec.validate();
  WSpace w;
  FamilySpec base = spec.base();
  if (base.kind == FamilyKind::J9) {
    w.k_ = 1;
    w.n_ = 1;
    w.j_ = base.j;
    w.d_ = 3;
  } else if (base.kind == FamilyKind::NonEinstein) {
    w.k_ = base.k;
    w.n_ = base.n;
    w.j_ = base.j;
    w.d_ = base.d;
  } else {
    throw ContractError("W is defined for non-einstein, j9 and adjoined families, not '" + to_string(spec.kind) + "'");
  }
  std::vector<double> lambdas, mus;
  if (spec.kind == FamilyKind::AdjoinedNonEinstein) {
    for (const auto& a : spec.adjoin_list) {
      if (a.kind == FamilyKind::MinimalD) {
        w.adjoined_.push_back(build_minimal_D(a.dim_q, a.dim_p));
        lambdas.push_back(a.lambda);
        mus.push_back(a.mu);
      } else {
        w.adjoined_.push_back(build_family(a));
        lambdas.push_back(1.0);
        mus.push_back(1.0);
      }
    }
  }

  const int k = w.k_, n = w.n_, j = w.j_;
  std::vector<double> point;
  auto add_var = [&](std::string name, double value) {
    w.var_names_.push_back(std::move(name));
    point.push_back(value);
    return static_cast<int>(w.var_names_.size()) - 1;
  };
  auto add_atom = [&](const std::string& name, int var, int slot, int offset, Matrix m) {
    w.atoms_.push_back(WAtom{name, var, slot, offset, std::move(m)});
  };

  int off = 0;
  const int va = add_var("a1", 1.0);
  add_atom("a1", va, 0, off, standard_blocks(BlockName::HeisenbergJ, k)[0]);
  w.blocks_.push_back(WBlock{"A1", off, 2 * k, true});
  off += 2 * k;

  const Matrix b1 = standard_matrix(BlockName::B1);
  const Matrix b2 = standard_matrix(BlockName::B2);
  std::vector<int> vb, vc;
  for (int i = 1; i < n; ++i) vb.push_back(add_var("b" + std::to_string(i), base.kind == FamilyKind::NonEinstein ? base.t[static_cast<std::size_t>(i - 1)] : 1.0));
  for (int i = 1; i < n; ++i) vc.push_back(add_var("c" + std::to_string(i), 1.0));
  for (int i = 1; i < n; ++i) {
    add_atom("b" + std::to_string(i), vb[static_cast<std::size_t>(i - 1)], 0, off, b1);
    add_atom("c" + std::to_string(i), vc[static_cast<std::size_t>(i - 1)], 1, off, b2);
    w.blocks_.push_back(WBlock{"M" + std::to_string(i), off, 4, true});
    off += 4;
  }

  // The (j,9) family carries the soliton block before the B block.
  const bool soliton_first = base.kind == FamilyKind::J9;
  const int b_off = soliton_first ? off + 3 : off;
  const int s_off = soliton_first ? off : off + 4;
  const StructureTensor bt = b_tuple(j);
  for (int i = 1; i <= j; ++i) {
    const int v = add_var("d" + std::to_string(i), 1.0);
    add_atom("d" + std::to_string(i), v, i - 1, b_off, bt[i - 1]);
  }
  w.blocks_.push_back(WBlock{"B", b_off, 4, true});
  off += 4;

  if (w.d_ == 3) {
    const int v1 = add_var("s1", 1.0);
    const int v2 = add_var("s2", 1.0);
    add_atom("s1", v1, 0, s_off, soliton_part(0));
    add_atom("s2", v2, 1, s_off, soliton_part(1));
    w.blocks_.push_back(WBlock{"S", s_off, 3, false});
    off += 3;
  }

  int slot = j;
  for (std::size_t m = 0; m < w.adjoined_.size(); ++m) {
    const StructureTensor& dt = w.adjoined_[m];
    const std::string tag = std::to_string(m + 1);
    const int vl = add_var("lambda" + tag, lambdas[m]);
    const int vm = add_var("mu" + tag, mus[m]);
    add_atom("lambda" + tag, vl, j - 1, off, dt[0]);
    for (int i = 1; i < dt.p(); ++i)
      add_atom("mu" + tag + "[" + std::to_string(i + 1) + "]", vm, slot++, off, dt[i]);
    w.blocks_.push_back(WBlock{"D" + tag, off, dt.q(), true});
    off += dt.q();
  }
  w.p_ = slot;
  w.q_ = off;
  w.family_point_ = Eigen::Map<const Vector>(point.data(), static_cast<Eigen::Index>(point.size()));
  return w;
}

int WSpace::var_index(const std::string& name) const {
  for (std::size_t i = 0; i < var_names_.size(); ++i)
    if (var_names_[i] == name) return static_cast<int>(i);
  throw ContractError("W has no coordinate '" + name + "'");
}

StructureTensor WSpace::tensor(const Vector& x) const {
  if (x.size() != dim())
    throw DimensionError("W point has " + std::to_string(x.size()) + " coordinates, expected " + std::to_string(dim()));
  std::vector<Matrix> mats(static_cast<std::size_t>(p_), Matrix::Zero(q_, q_));
  for (const auto& a : atoms_) {
    const auto s = a.mat.rows();
    mats[static_cast<std::size_t>(a.slot)].block(a.offset, a.offset, s, s) += x(a.var) * a.mat;
  }
  return StructureTensor(p_, q_, std::move(mats));
}

std::pair<Vector, double> WSpace::coordinates_of(const StructureTensor& c) const {
  if (c.p() != p_ || c.q() != q_) throw DimensionError("coordinates_of: tensor type does not match W");
  Vector num = Vector::Zero(dim());
  Vector den = Vector::Zero(dim());
  for (const auto& a : atoms_) {
    const auto s = a.mat.rows();
    num(a.var) += c[a.slot].block(a.offset, a.offset, s, s).cwiseProduct(a.mat).sum();
    den(a.var) += a.mat.squaredNorm();
  }
  Vector x = num.cwiseQuotient(den);
  const double nc = norm(c);
  const double outside = nc == 0.0 ? 0.0 : norm(axpy(c, -1.0, tensor(x))) / nc;
  return {x, outside};
}

// ---------------------------------------------------------------------------
// WPoint
// ---------------------------------------------------------------------------

WPoint WPoint::ones(const FamilySpec& spec) {
  auto space = std::make_shared<const WSpace>(WSpace::for_family(spec));
  return WPoint{space, Vector::Ones(space->dim())};
}

WPoint WPoint::of_family(const FamilySpec& spec) {
  auto space = std::make_shared<const WSpace>(WSpace::for_family(spec));
  return WPoint{space, space->family_point()};
}

double WPoint::a1() const { return x(0); }

double WPoint::b(int i) const {
  const int n = space->n();
  if (i < 1 || i > n) throw ContractError("b index out of range");
  return i == n ? d(1) : x(space->var_index("b" + std::to_string(i)));
}

double WPoint::c(int i) const {
  const int n = space->n();
  if (i < 1 || i > n) throw ContractError("c index out of range");
  return i == n ? d(2) : x(space->var_index("c" + std::to_string(i)));
}

double WPoint::d(int i) const { return x(space->var_index("d" + std::to_string(i))); }
double WPoint::lambda(int m) const { return x(space->var_index("lambda" + std::to_string(m + 1))); }
double WPoint::mu(int m) const { return x(space->var_index("mu" + std::to_string(m + 1))); }

bool WPoint::open_stratum() const { return (x.array() != 0.0).all(); }

StructureTensor w_point_tensor(const WPoint& w) {
  if (!w.space) throw ContractError("W point without a space");
  return w.space->tensor(w.x);
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

Vector displayed_m1_blocks(const WPoint& w) {
  const WSpace& s = *w.space;
  const int k = s.k(), n = s.n(), j = s.j();
  Vector diag = Vector::Zero(s.q());
  int off = 0;
  diag.segment(off, 2 * k).setConstant(2.0 * w.a1() * w.a1());
  off += 2 * k;
  for (int i = 1; i < n; ++i) {
    diag.segment(off, 4).setConstant(2.0 * (w.b(i) * w.b(i) + w.c(i) * w.c(i)));
    off += 4;
  }
  double sd = 0.0;
  for (int i = 1; i <= j; ++i) sd += w.d(i) * w.d(i);
  for (const auto& b : s.blocks()) {
    if (b.name == "B") diag.segment(b.offset, 4).setConstant(2.0 * sd);
    if (b.name == "S") {
      const double s1 = w.x(s.var_index("s1")), s2 = w.x(s.var_index("s2"));
      diag(b.offset) = 2.0 * s1 * s1;
      diag(b.offset + 1) = 2.0 * (s1 * s1 + s2 * s2);
      diag(b.offset + 2) = 2.0 * s2 * s2;
    }
  }
  off += s.d() == 3 ? 7 : 4;
  for (int m = 0; m < s.adjoined_count(); ++m) {
    const int q2 = s.adjoined(m).q();
    const int p2 = s.adjoined(m).p();
    const double l = w.lambda(m), u = w.mu(m);
    diag.segment(off, q2).setConstant(2.0 * (l * l + (p2 - 1) * u * u));
    off += q2;
  }
  return diag;
}

Vector displayed_m2_diagonal(const WPoint& w) {
  const WSpace& s = *w.space;
  const int k = s.k(), n = s.n(), j = s.j();
  Vector m2 = Vector::Zero(s.p());
  const double a = w.a1();
  m2(0) = 2.0 * k * a * a;
  for (int i = 1; i <= n; ++i) {
    m2(0) += 4.0 * w.b(i) * w.b(i);
    m2(1) += 4.0 * w.c(i) * w.c(i);
  }
  for (int i = 3; i <= j; ++i) m2(i - 1) = 4.0 * w.d(i) * w.d(i);
  if (s.d() == 3) {
    const double s1 = w.x(s.var_index("s1")), s2 = w.x(s.var_index("s2"));
    m2(0) += 2.0 * s1 * s1;
    m2(1) += 2.0 * s2 * s2;
  }
  int slot = j;
  for (int m = 0; m < s.adjoined_count(); ++m) {
    const double q2 = static_cast<double>(s.adjoined(m).q());
    const double l = w.lambda(m), u = w.mu(m);
    m2(j - 1) += q2 * l * l;
    for (int i = 1; i < s.adjoined(m).p(); ++i) m2(slot++) = q2 * u * u;
  }
  return m2;
}

// ---------------------------------------------------------------------------
// H-detection
// ---------------------------------------------------------------------------

HDetectionReport h_detection_check(const WPoint& w, double tol) {
  const WSpace& s = *w.space;
  HDetectionReport rep;
  const MomentImage m = moment(w_point_tensor(w));
  rep.m1 = m.m1;
  rep.m2 = m.m2;

  // Entries outside the m1 blocks, or off-diagonal inside non-scalar/scalar
  // blocks, and off-diagonal m2 entries must vanish.
  std::vector<int> block_of(static_cast<std::size_t>(s.q()), -1);
  bool exact_data = true;
  for (std::size_t b = 0; b < s.blocks().size(); ++b) {
    const WBlock& blk = s.blocks()[b];
    for (int i = 0; i < blk.size; ++i) block_of[static_cast<std::size_t>(blk.offset + i)] = static_cast<int>(b);
  }
  for (int m_i = 0; m_i < s.adjoined_count(); ++m_i) {
    const StructureTensor& dt = s.adjoined(m_i);
    for (int i = 0; i < dt.p(); ++i)
      if ((dt[i].array() != dt[i].array().round()).any()) exact_data = false;
  }
  rep.exact = exact_data;
  const double zero_tol = exact_data ? 0.0 : tol * (1.0 + m.norm());

  auto violate = [&](const std::string& what) {
    if (rep.passed) rep.first_violation = what;
    rep.passed = false;
  };

  for (int a = 0; a < s.q(); ++a)
    for (int b = 0; b < s.q(); ++b) {
      if (a == b) continue;
      const double v = std::abs(m.m1(a, b));
      rep.max_offblock = std::max(rep.max_offblock, v);
      if (v > zero_tol)
        violate("m1(" + std::to_string(a) + "," + std::to_string(b) + ") = " + fmt_num(m.m1(a, b)) +
                (block_of[static_cast<std::size_t>(a)] == block_of[static_cast<std::size_t>(b)] ? " inside a block"
                                                                                                : " off the blocks"));
    }
  for (int a = 0; a < s.p(); ++a)
    for (int b = 0; b < s.p(); ++b) {
      if (a == b) continue;
      const double v = std::abs(m.m2(a, b));
      rep.max_offblock = std::max(rep.max_offblock, v);
      if (v > zero_tol) violate("m2(" + std::to_string(a) + "," + std::to_string(b) + ") = " + fmt_num(m.m2(a, b)));
    }

  const Vector d1 = displayed_m1_blocks(w);
  const Vector d2 = displayed_m2_diagonal(w);
  const double scale = 1.0 + std::max(d1.cwiseAbs().maxCoeff(), d2.cwiseAbs().maxCoeff());
  for (int a = 0; a < s.q(); ++a) {
    const double e = std::abs(m.m1(a, a) - d1(a));
    rep.max_display_error = std::max(rep.max_display_error, e / scale);
    if (e > tol * scale)
      violate("m1(" + std::to_string(a) + "," + std::to_string(a) + ") = " + fmt_num(m.m1(a, a)) + ", displayed " +
              fmt_num(d1(a)));
  }
  for (int a = 0; a < s.p(); ++a) {
    const double e = std::abs(m.m2(a, a) - d2(a));
    rep.max_display_error = std::max(rep.max_display_error, e / scale);
    if (e > tol * scale)
      violate("m2(" + std::to_string(a) + "," + std::to_string(a) + ") = " + fmt_num(m.m2(a, a)) + ", displayed " +
              fmt_num(d2(a)));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

namespace {

// Coefficient of atom e in m(w).w, from the moment module.
Vector recomputed_coefficients(const WSpace& s, const Vector& x) {
  const StructureTensor c = s.tensor(x);
  const MomentImage m = moment(c);
  const StructureTensor mw = moment_action(c, m);
  Vector out(static_cast<Eigen::Index>(s.atoms().size()));
  for (std::size_t e = 0; e < s.atoms().size(); ++e) {
    const WAtom& a = s.atoms()[e];
    const auto n = a.mat.rows();
    const double nn = a.mat.squaredNorm();
    const double xv = x(a.var);
    if (xv != 0.0) {
      out(static_cast<Eigen::Index>(e)) = mw[a.slot].block(a.offset, a.offset, n, n).cwiseProduct(a.mat).sum() / (xv * nn);
    } else {
      // Diagonal matrix element of the operator m(w) along the atom.
      const Matrix blk = m.m1.block(a.offset, a.offset, n, n);
      const Matrix img = blk * a.mat + a.mat * blk + m.m2(a.slot, a.slot) * a.mat;
      out(static_cast<Eigen::Index>(e)) = img.cwiseProduct(a.mat).sum() / nn;
    }
  }
  return out;
}

Vector displayed_coefficients(const WPoint& w) {
  const WSpace& s = *w.space;
  const Vector d1 = displayed_m1_blocks(w);
  const Vector d2 = displayed_m2_diagonal(w);
  Vector out(static_cast<Eigen::Index>(s.atoms().size()));
  for (std::size_t e = 0; e < s.atoms().size(); ++e) {
    const WAtom& a = s.atoms()[e];
    Eigen::Index r = 0, c = 0;
    a.mat.cwiseAbs().maxCoeff(&r, &c);
    out(static_cast<Eigen::Index>(e)) = d1(a.offset + r) + d1(a.offset + c) + d2(a.slot);
  }
  return out;
}

}  // namespace

double spread(const Vector& v) {
  if (v.size() == 0) return 0.0;
  const double mx = v.maxCoeff(), mn = v.minCoeff();
  double mean = v.mean();
  if (!(mean > 0.0)) mean = v.cwiseAbs().maxCoeff();
  if (mean == 0.0) return 0.0;
  return (mx - mn) / mean;
}

CoefficientValues coefficient_values(const WPoint& w) {
  CoefficientValues out;
  for (const auto& a : w.space->atoms()) out.labels.push_back("E(" + a.name + ")");
  out.displayed = displayed_coefficients(w);
  out.recomputed = recomputed_coefficients(*w.space, w.x);
  const double scale = std::max(1e-300, out.recomputed.cwiseAbs().maxCoeff());
  out.max_discrepancy = (out.displayed - out.recomputed).cwiseAbs().maxCoeff() / scale;
  out.display_note = kDisplayNote;
  if (w.space->adjoined_count() > 0) out.display_note += kAdjoinedNote;
  return out;
}

Matrix coefficient_forms(const WSpace& s) {
  const int dim = s.dim();
  const Vector ones = Vector::Ones(dim);
  const Vector base = recomputed_coefficients(s, ones);
  Matrix m(base.size(), dim);
  for (int f = 0; f < dim; ++f) {
    Vector x = ones;
    x(f) = 2.0;
    m.col(f) = (recomputed_coefficients(s, x) - base) / 3.0;
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double r = std::round(m(i, c));
      if (std::abs(m(i, c) - r) < 1e-9) m(i, c) = r;
    }
  return m;
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NonDistinguished: return "NonDistinguished";
    case Verdict::Distinguished: return "Distinguished";
    case Verdict::Indecomposable: return "Indecomposable";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const Condition* Certificate::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

int atom_index(const WSpace& s, const std::string& name) {
  for (std::size_t e = 0; e < s.atoms().size(); ++e)
    if (s.atoms()[e].name == name) return static_cast<int>(e);
  throw ContractError("W has no atom '" + name + "'");
}

bool form_is_certificate(const Vector& z, double tol) {
  return z.size() > 0 && z.minCoeff() >= -tol && z.maxCoeff() > tol;
}

std::string form_string(const WSpace& s, const Vector& z) {
  std::ostringstream os;
  bool first = true;
  for (int f = 0; f < z.size(); ++f) {
    if (z(f) == 0.0) continue;
    os << (first ? "" : " + ") << fmt_num(z(f)) << " " << s.var_names()[static_cast<std::size_t>(f)] << "^2";
    first = false;
  }
  return first ? "0" : os.str();
}

}  // namespace

ChainCertificate elimination_chain(const WSpace& s) {
  const Matrix m = coefficient_forms(s);
  const int k = s.k(), n = s.n();
  ChainCertificate out;
  out.source = "elimination chain";
  Vector u = Vector::Zero(m.rows());
  const int ea = atom_index(s, "a1");
  const int ed1 = atom_index(s, "d1");
  const int ed2 = atom_index(s, "d2");
  const double half_k = -0.5 * k;
  for (int i = 1; i < n; ++i) {
    const int eb = atom_index(s, "b" + std::to_string(i));
    u(ea) += half_k;
    u(eb) -= half_k;
    out.equations.push_back(fmt_num(half_k) + " (E(a1) - E(b" + std::to_string(i) + "))");
  }
  u(ea) += half_k;
  u(ed1) -= half_k;
  out.equations.push_back(fmt_num(half_k) + " (E(a1) - E(d1))");
  if (s.d() == 3) {
    const int es1 = atom_index(s, "s1");
    const int es2 = atom_index(s, "s2");
    u(ed1) += 2.0 * n;
    u(ed2) -= 2.0 * n;
    u(es1) -= n;
    u(es2) += n;
    out.equations.push_back(std::to_string(n) + " (2 (E(d1) - E(d2)) - (E(s1) - E(s2)))");
  } else {
    u(ed1) += n;
    u(ed2) -= n;
    out.equations.push_back(std::to_string(n) + " (E(d1) - E(d2))");
  }
  out.multipliers = u;
  out.form = m.transpose() * u;
  out.valid = form_is_certificate(out.form, 1e-9);
  return out;
}

std::optional<ChainCertificate> multiplier_search(const WSpace& s) {
  const Matrix m = coefficient_forms(s);
  const Eigen::Index rows = m.rows() - 1;
  Matrix diff(rows, m.cols());
  for (Eigen::Index e = 0; e < rows; ++e) diff.row(e) = m.row(e + 1) - m.row(0);
  const auto y = stiemke_multipliers(diff);
  if (!y) return std::nullopt;
  ChainCertificate out;
  out.source = "multiplier search";
  Vector u = Vector::Zero(m.rows());
  for (Eigen::Index e = 0; e < rows; ++e) {
    const double c = (*y)(e);
    if (std::abs(c) < 1e-14) continue;
    u(e + 1) += c;
    u(0) -= c;
    out.equations.push_back(fmt_num(c) + " (E(" + s.atoms()[static_cast<std::size_t>(e + 1)].name + ") - E(" +
                            s.atoms()[0].name + "))");
  }
  out.multipliers = u;
  out.form = m.transpose() * u;
  for (Eigen::Index f = 0; f < out.form.size(); ++f)
    if (std::abs(out.form(f)) < 1e-12) out.form(f) = 0.0;
  out.valid = form_is_certificate(out.form, 1e-9);
  if (!out.valid) return std::nullopt;
  return out;
}

SpreadMinimum minimize_spread(const WSpace& s, const CertifyOptions& opts) {
  const Matrix m = coefficient_forms(s);
  const int dim = s.dim();
  const double lo = opts.spread_box_min;
  const Eigen::RowVectorXd colsum = m.colwise().sum() / static_cast<double>(m.rows());

  auto true_spread = [&](const Vector& x) { return spread(m * x); };
  // Log-sum-exp smoothing of max and -min of v/mean(v).
  auto smoothed = [&](const Vector& x, double tau, Vector* grad) {
    const Vector v = m * x;
    const double mean = colsum.dot(x);
    const Vector vh = v / mean;
    const double mx = vh.maxCoeff(), mn = vh.minCoeff();
    const Vector ep = ((vh.array() - mx) / tau).exp().matrix();
    const Vector en = ((mn - vh.array()) / tau).exp().matrix();
    const double sp = ep.sum(), sn = en.sum();
    const double f = mx + tau * std::log(sp) - mn + tau * std::log(sn);
    if (grad) {
      const Vector wgt = ep / sp - en / sn;  // df/dvh
      // dvh/dx = (M - vh colsum) / mean
      *grad = (m.transpose() * wgt - colsum.transpose() * wgt.dot(vh)) / mean;
    }
    return f;
  };

  SpreadMinimum best;
  best.best = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(lo, 1.0);
  static const double taus[] = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  const int per_stage = std::max(1, opts.spread_iterations / 7);

  for (int start = 0; start < opts.spread_starts; ++start) {
    Vector x(dim);
    if (start == 0)
      x.setOnes();
    else
      for (int i = 0; i < dim; ++i) x(i) = unif(rng);
    double run_best = true_spread(x);
    Vector run_arg = x;
    double step = 0.1;
    for (double tau : taus) {
      for (int it = 0; it < per_stage; ++it) {
        Vector g;
        const double f = smoothed(x, tau, &g);
        bool moved = false;
        for (int h = 0; h < 40; ++h) {
          const Vector xn = (x - step * g).cwiseMax(lo).cwiseMin(1.0);
          const double fn = smoothed(xn, tau, nullptr);
          if (fn <= f - 1e-4 * g.dot(x - xn)) {
            x = xn;
            moved = true;
            step *= 1.5;
            break;
          }
          step *= 0.5;
        }
        const double ts = true_spread(x);
        if (ts < run_best) {
          run_best = ts;
          run_arg = x;
        }
        if (!moved) break;
      }
      step = std::max(step, 1e-3);
    }
    ++best.starts;
    if (run_best < best.best) {
      best.best = run_best;
      best.argmin = run_arg;
    }
  }
  return best;
}

namespace {

// Solves for a diagonal element of H (block scalars, soliton diagonal, slot
// scalars) carrying |from| to |to| coordinatewise; returns the residual of
// the log-linear least-squares fit.
double torus_gap(const WSpace& s, const Vector& from, const Vector& to) {
  // Unknowns: one log-scale per scalar block, three for the soliton block,
  // one per slot.
  std::vector<int> block_col(s.blocks().size());
  int cols = 0;
  for (std::size_t b = 0; b < s.blocks().size(); ++b) {
    block_col[b] = cols;
    cols += s.blocks()[b].scalar ? 1 : 3;
  }
  const int slot_col = cols;
  cols += s.p();
  const auto rows = static_cast<Eigen::Index>(s.atoms().size());
  Matrix l = Matrix::Zero(rows, cols);
  Vector rhs(rows);
  for (Eigen::Index e = 0; e < rows; ++e) {
    const WAtom& a = s.atoms()[static_cast<std::size_t>(e)];
    if ((from(a.var) > 0) != (to(a.var) > 0) || from(a.var) == 0.0 || to(a.var) == 0.0) return 1.0;
    rhs(e) = std::log(std::abs(to(a.var)) / std::abs(from(a.var)));
    std::size_t b = 0;
    while (!(a.offset >= s.blocks()[b].offset && a.offset < s.blocks()[b].offset + s.blocks()[b].size)) ++b;
    if (s.blocks()[b].scalar) {
      l(e, block_col[b]) = 2.0;
    } else {
      Eigen::Index r = 0, c = 0;
      a.mat.cwiseAbs().maxCoeff(&r, &c);
      l(e, block_col[b] + r) += 1.0;
      l(e, block_col[b] + c) += 1.0;
    }
    l(e, slot_col + a.slot) = 1.0;
  }
  const Vector theta = l.colPivHouseholderQr().solve(rhs);
  return (l * theta - rhs).cwiseAbs().maxCoeff();
}

}  // namespace

Certificate non_einstein_certificate(const FamilySpec& spec, const CertifyOptions& opts) {
  if (spec.kind != FamilyKind::NonEinstein && spec.kind != FamilyKind::AdjoinedNonEinstein &&
      spec.kind != FamilyKind::J9)
    throw ContractError("non_einstein_certificate: family '" + to_string(spec.kind) +
                        "' is not non-einstein, adjoined or j9");
  spec.validate();
  const auto space = std::make_shared<const WSpace>(WSpace::for_family(spec));
  const WSpace& s = *space;
  Certificate cert;
  cert.family = spec;
  const bool j9 = spec.base().kind == FamilyKind::J9;

  // Hypothesis.
  const int lhs = 2 * s.k(), rhs = 4 * s.n() + s.d();
  const bool hyp = lhs >= rhs;
  cert.conditions.push_back(Condition{"2k >= 4n+d", static_cast<double>(lhs - rhs), hyp,
                                      std::to_string(lhs) + " >= " + std::to_string(rhs)});

  // (a) H-detection on sampled points of W.
  {
    std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> mag(0.25, 2.0);
    std::bernoulli_distribution sign(0.5);
    bool all = true, exact = true;
    double worst = 0.0;
    std::string first;
    for (int i = 0; i < opts.h_samples + 2; ++i) {
      Vector x(s.dim());
      if (i == 0)
        x = Vector::Ones(s.dim());
      else if (i == 1)
        x = s.family_point();
      else
        for (int f = 0; f < s.dim(); ++f) x(f) = (sign(rng) ? -1.0 : 1.0) * mag(rng);
      const HDetectionReport r = h_detection_check(WPoint{space, x});
      exact = exact && r.exact;
      worst = std::max(worst, r.max_offblock);
      if (!r.passed && all) first = r.first_violation;
      all = all && r.passed;
    }
    cert.conditions.push_back(Condition{"h-detection", worst, all,
                                        all ? (exact ? "structural zeros exact" : "zeros within tolerance") : first});
  }

  // Consistency of the closed forms with the moment module.
  {
    const CoefficientValues cv = coefficient_values(WPoint{space, s.family_point()});
    cert.conditions.push_back(
        Condition{"coefficient forms match moment", cv.max_discrepancy, cv.max_discrepancy < 1e-10, cv.display_note});
  }

  // (b) Elimination chain, then the general multiplier search.
  const ChainCertificate chain = elimination_chain(s);
  cert.conditions.push_back(Condition{"elimination chain", chain.form.size() ? chain.form.minCoeff() : 0.0,
                                      chain.valid, "sum = " + form_string(s, chain.form)});
  std::optional<ChainCertificate> search;
  if (!chain.valid) {
    search = multiplier_search(s);
    cert.conditions.push_back(Condition{"multiplier search", search ? search->form.minCoeff() : 0.0,
                                        search.has_value(),
                                        search ? "sum = " + form_string(s, search->form) : "no multipliers exist"});
  }
  const bool certified = chain.valid || search.has_value();

  // (c) Corroboration.
  if (opts.run_spread) {
    const SpreadMinimum sm = minimize_spread(s, opts);
    cert.conditions.push_back(Condition{"spread minimum", sm.best, sm.best > opts.spread_floor,
                                        std::to_string(sm.starts) + " starts over squared coordinates in [" +
                                            fmt_num(opts.spread_box_min) + ", 1]; evidence only"});
  }

  const bool hdet = cert.find("h-detection")->satisfied;
  if (hdet && certified && (hyp || j9)) {
    cert.verdict = Verdict::NonDistinguished;
    if (j9) cert.notes.push_back("j9: hypothesis replaced by the verified multiplier certificate");
  } else if (hdet && !certified) {
    // Look for a distinguished point of W in the orbit.
    const Matrix m = coefficient_forms(s);
    Matrix diff(m.rows() - 1, m.cols());
    for (Eigen::Index e = 0; e + 1 < m.rows(); ++e) diff.row(e) = m.row(e + 1) - m.row(0);
    if (const auto xs = positive_kernel_vector(diff)) {
      const Vector w = xs->cwiseSqrt();
      const double res = distinguished_report(s.tensor(w)).residual;
      const double gap = torus_gap(s, s.family_point(), w);
      cert.conditions.push_back(Condition{"distinguished point in W", res, res < 1e-10,
                                          "squared coordinates solve every coefficient equation"});
      cert.conditions.push_back(Condition{"reached by diagonal H", gap, gap < 1e-10, "log-linear fit residual"});
      if (res < 1e-10 && gap < 1e-10) cert.verdict = Verdict::Distinguished;
    }
  } else if (!hyp && certified) {
    cert.notes.push_back("coefficient equations have no positive solution, but 2k >= 4n+d fails; verdict withheld");
  }
  for (auto& n : spec.notes()) cert.notes.push_back(std::move(n));
  return cert;
}

// ---------------------------------------------------------------------------
// Orbit separation
// ---------------------------------------------------------------------------

OrbitInvariant orbit_separation_invariant(const FamilySpec& spec) {
  if (spec.kind != FamilyKind::NonEinstein) throw ContractError("orbit_separation_invariant: needs a non-einstein family");
  spec.validate();
  if (spec.n < 2) throw ContractError("orbit_separation_invariant: needs n >= 2");
  const WSpace s = WSpace::for_family(spec);
  const StructureTensor c = build_family(spec);
  const auto [x, outside] = s.coordinates_of(c);
  if (outside > 1e-12) throw NumericalError("orbit_separation_invariant: tensor is not in W");

  OrbitInvariant inv;
  const double d1 = x(s.var_index("d1")), d2 = x(s.var_index("d2"));
  for (int i = 1; i < spec.n; ++i) {
    const double b = x(s.var_index("b" + std::to_string(i)));
    const double cc = x(s.var_index("c" + std::to_string(i)));
    inv.h_invariant.push_back(b * d2 / (cc * d1));
  }
  for (double t : inv.h_invariant) inv.g_canonical.push_back(std::abs(t));
  std::sort(inv.g_canonical.begin(), inv.g_canonical.end());

  const int q = c.q(), p = c.p();
  const int mid0 = 2 * spec.k;
  auto verify = [&](std::string what, std::vector<double> t_to, Matrix g) {
    FamilySpec other = spec;
    other.t = t_to;
    GroupElement e{std::move(g), Matrix::Identity(p, p)};
    const double err = max_abs_difference(group_act(e, c), build_family(other));
    inv.identifications.push_back(OrbitIdentification{std::move(what), spec.t, std::move(t_to), std::move(e), err});
  };
  for (int i = 0; i + 1 < spec.n; ++i) {
    if (spec.t[static_cast<std::size_t>(i)] == 0.0) continue;
    Matrix g = Matrix::Identity(q, q);
    g.block(mid0 + 4 * i, mid0 + 4 * i, 4, 4) = standard_matrix(BlockName::B2);
    std::vector<double> t = spec.t;
    t[static_cast<std::size_t>(i)] = -t[static_cast<std::size_t>(i)];
    verify("t" + std::to_string(i + 1) + " -> -t" + std::to_string(i + 1) + " (conjugate middle block by B2)", t, g);
  }
  for (int i = 0; i + 2 < spec.n; ++i) {
    Matrix g = Matrix::Identity(q, q);
    const int a = mid0 + 4 * i, b = a + 4;
    g.block(a, a, 4, 4).setZero();
    g.block(b, b, 4, 4).setZero();
    g.block(a, b, 4, 4) = Matrix::Identity(4, 4);
    g.block(b, a, 4, 4) = Matrix::Identity(4, 4);
    std::vector<double> t = spec.t;
    std::swap(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(i + 1)]);
    verify("swap t" + std::to_string(i + 1) + ", t" + std::to_string(i + 2) + " (permute middle blocks)", t, g);
  }
  return inv;
}

bool same_h_orbit(const OrbitInvariant& a, const OrbitInvariant& b, double rtol) {
  if (a.h_invariant.size() != b.h_invariant.size()) return false;
  for (std::size_t i = 0; i < a.h_invariant.size(); ++i) {
    const double x = a.h_invariant[i], y = b.h_invariant[i];
    if (std::abs(x - y) > rtol * std::max({1.0, std::abs(x), std::abs(y)})) return false;
  }
  return true;
}

}  // namespace nilsoliton
