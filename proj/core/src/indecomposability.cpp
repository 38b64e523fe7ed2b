#include "nilsoliton/indecomposability.hpp"

#include "nilsoliton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

namespace nilsoliton {

namespace {

Matrix stacked(const StructureTensor& c) {
  Matrix s(c.p() * c.q(), c.q());
  for (int k = 0; k < c.p(); ++k) s.middleRows(k * c.q(), c.q()) = c[k];
  return s;
}

// Orthonormal basis of the null space of m (columns).
Matrix null_space(const Matrix& m, double rel_tol) {
  const auto n = m.cols();
  if (m.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double top = s.size() ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * top && top > 0.0) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// Orthonormal basis of the column space.
Matrix range_basis(const Matrix& m, double rel_tol) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0) && s(0) > 0.0) ++rank;
  return svd.matrixU().leftCols(rank);
}

double cond_ratio(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

Matrix combination(const StructureTensor& c, const Vector& a) {
  Matrix x = Matrix::Zero(c.q(), c.q());
  for (int k = 0; k < c.p(); ++k) x += a(k) * c[k];
  return x;
}

}  // namespace

Matrix common_kernel(const StructureTensor& c, double rel_tol) { return null_space(stacked(c), rel_tol); }

double pfaffian(const Matrix& in) {
  const auto n = in.rows();
  if (in.cols() != n) throw DimensionError("pfaffian: matrix is not square");
  if (n % 2 != 0) return 0.0;
  Matrix a = in;
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = 0;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == 0.0) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Vector tau = a.row(k).tail(n - k - 2).transpose() / a(k, k + 1);
      const Vector col = a.col(k + 1).tail(n - k - 2);
      a.bottomRightCorner(n - k - 2, n - k - 2) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

bool pencil_nonsingular(const StructureTensor& c, int samples, std::uint64_t seed) {
  const int q = c.q(), p = c.p();
  if (q % 2 != 0) return false;
  constexpr double kSingular = 1e-10;
  if (p == 1) return cond_ratio(c[0]) > kSingular;
  if (p == 2) {
    if (cond_ratio(c[1]) <= kSingular) return false;
    const Matrix t = c[1].partialPivLu().solve(c[0]);
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(t, false).eigenvalues();
    const double scale = 1.0 + ev.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (std::abs(ev(i).imag()) <= 1e-9 * scale) return false;
    return true;
  }
  // Pf(-X) = (-1)^{q/2} Pf(X) and the sphere is connected, so for q/2 odd
  // some combination is singular.
  if ((q / 2) % 2 == 1) return false;
  // Normalised Pfaffian over coordinate-ish directions and random points of
  // the sphere: it must stay away from zero with one sign.
  std::vector<Vector> dirs;
  for (int i = 0; i < p; ++i) {
    Vector e = Vector::Zero(p);
    e(i) = 1.0;
    dirs.push_back(e);
    for (int j = i + 1; j < p; ++j)
      for (double s : {1.0, -1.0}) {
        Vector f = Vector::Zero(p);
        f(i) = 1.0;
        f(j) = s;
        dirs.push_back(f.normalized());
      }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Vector v(p);
    for (int i = 0; i < p; ++i) v(i) = normal(rng);
    dirs.push_back(v.normalized());
  }
  int sign = 0;
  for (const auto& v : dirs) {
    const Matrix x = combination(c, v);
    const double top = Eigen::JacobiSVD<Matrix>(x).singularValues()(0);
    if (top == 0.0) return false;
    const double pf = pfaffian(x / top);
    if (std::abs(pf) < 1e-6) return false;
    const int sg = pf > 0 ? 1 : -1;
    if (sign == 0) sign = sg;
    if (sg != sign) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

bool close_tensors(const StructureTensor& a, const StructureTensor& b) {
  if (a.p() != b.p() || a.q() != b.q()) return false;
  return max_abs_difference(a, b) <= 1e-12 * (1.0 + norm(a));
}

bool component_indecomposable(const Composition& comp, const IndecompOptions& base, std::string& why);

bool leaf_indecomposable(const StructureTensor& c, const IndecompOptions& base, std::string& why) {
  IndecompOptions o;
  o.certify = base.certify;
  o.pencil_samples = base.pencil_samples;
  const Certificate cert = structural_criteria(c, o);
  if (cert.verdict != Verdict::Indecomposable) {
    why = "component of type (" + std::to_string(c.p()) + "," + std::to_string(c.q()) + ") not certified";
    return false;
  }
  return true;
}

bool component_indecomposable(const Composition& comp, const IndecompOptions& base, std::string& why) {
  switch (comp.kind) {
    case Composition::Kind::Leaf:
      return leaf_indecomposable(*comp.leaf, base, why);
    case Composition::Kind::Concat: {
      int pmax = 0;
      for (const auto& part : comp.parts) pmax = std::max(pmax, part.build().p());
      bool has_full = false;
      for (const auto& part : comp.parts) {
        const StructureTensor t = part.build();
        if (common_kernel(t).cols() != 0) {
          why = "a concatenated component has a common kernel";
          return false;
        }
        if (!component_indecomposable(part, base, why)) return false;
        if (t.p() == pmax) has_full = true;
      }
      if (!has_full) {
        why = "no component fills every slot";
        return false;
      }
      return true;
    }
    case Composition::Kind::Adjoin:
      for (const auto& part : comp.parts) {
        if (common_kernel(part.build()).cols() != 0) {
          why = "an adjoined component has a common kernel";
          return false;
        }
        if (!component_indecomposable(part, base, why)) return false;
      }
      return true;
  }
  return false;
}

}  // namespace

Certificate structural_criteria(const StructureTensor& c, const IndecompOptions& opts) {
  Certificate cert;
  cert.family = opts.meta;
  const int p = c.p(), q = c.q();
  const int kdim = static_cast<int>(common_kernel(c).cols());
  const bool no_kernel = kdim == 0;
  cert.conditions.push_back(Condition{"no common kernel", static_cast<double>(kdim), no_kernel,
                                      "dimension of the common kernel"});

  {
    const int lo = (q - 2) * (q - 3) / 2 + 2;
    const bool ok = q % 2 == 0 && lo <= p && p <= so_dimension(q);
    std::string detail = std::to_string(lo) + " <= p <= " + std::to_string(so_dimension(q)) + ", q even";
    if (q == 6) {
      detail += "; the q = 6 remark quotes 3 <= p <= 6, the formula gives 8 <= p <= 15";
      cert.notes.push_back("q = 6: bound (a) follows the displayed formula (8 <= p <= 15), not the remark's 3 <= p <= 6");
    }
    cert.conditions.push_back(Condition{"(a) large p", static_cast<double>(lo), ok, detail});
  }
  cert.conditions.push_back(
      Condition{"(b) type (2,3)", 0.0, p == 2 && q == 3 && no_kernel, "kernels of the components are odd dimensional"});

  // (c) needs a non-Einstein certificate for this very tensor.
  {
    bool ok = false;
    std::string detail = "p = 2, no common kernel and certified non-Einstein";
    if (p == 2 && no_kernel) {
      std::optional<Certificate> ne = opts.non_einstein;
      if (!ne && opts.meta &&
          (opts.meta->kind == FamilyKind::NonEinstein || opts.meta->kind == FamilyKind::J9 ||
           opts.meta->kind == FamilyKind::AdjoinedNonEinstein) &&
          close_tensors(build_family(*opts.meta), c)) {
        CertifyOptions co = opts.certify;
        co.run_spread = false;
        ne = non_einstein_certificate(*opts.meta, co);
      }
      ok = ne && ne->verdict == Verdict::NonDistinguished;
      if (!ne) detail += " (no certificate available)";
    }
    cert.conditions.push_back(Condition{"(c) type (2,q) non-Einstein", 0.0, ok, detail});
  }

  // (d) composition.
  {
    bool ok = false;
    std::string detail = "no composition given";
    if (opts.meta) {
      const Composition comp = family_composition(*opts.meta);
      if (!close_tensors(comp.build(), c)) {
        detail = "tensor does not match the family composition";
      } else if (comp.kind == Composition::Kind::Leaf) {
        detail = "family is a single tuple";
      } else if (!no_kernel) {
        detail = "common kernel present";
      } else {
        std::string why;
        ok = component_indecomposable(comp, opts, why);
        detail = ok ? std::string(comp.kind == Composition::Kind::Concat ? "concatenation" : "adjoin") +
                          " of certified components"
                    : why;
      }
    }
    cert.conditions.push_back(Condition{"(d) composition", 0.0, ok, detail});
  }

  cert.conditions.push_back(Condition{"p = 1 without kernel", 0.0, p == 1 && no_kernel, "a single nondegenerate form"});
  {
    const bool pencil = no_kernel && q % 2 == 0 && pencil_nonsingular(c, opts.pencil_samples);
    cert.conditions.push_back(
        Condition{"pencil nonsingular", 0.0, pencil, "every nontrivial combination is invertible"});
  }

  // Only the criteria fire; bookkeeping rows ("no common kernel") do not.
  for (const auto& cond : cert.conditions)
    if (cond.satisfied && cond.name != "no common kernel") cert.verdict = Verdict::Indecomposable;
  return cert;
}

// ---------------------------------------------------------------------------

double verify_decomposition(const StructureTensor& c, const Decomposition& d) {
  const int q = c.q();
  const auto d1 = d.v1.cols();
  Matrix pm(q, q);
  pm << d.v1, d.v2;
  const double scale = 1e-300 + norm(c);
  double err = 0.0;
  auto check = [&](const Matrix& coeffs, bool top) {
    for (Eigen::Index r = 0; r < coeffs.rows(); ++r) {
      Vector a = coeffs.row(r).transpose();
      const Matrix x = pm.transpose() * combination(c, a) * pm;
      Matrix off = x;
      if (top)
        off.topLeftCorner(d1, d1).setZero();
      else
        off.bottomRightCorner(q - d1, q - d1).setZero();
      err = std::max(err, off.cwiseAbs().maxCoeff() / (scale * std::max(1.0, a.norm())));
    }
  };
  check(d.z, true);
  check(d.w, false);
  return err;
}

namespace {

std::optional<Decomposition> try_split(const StructureTensor& c, const Matrix& v1, const Matrix& v2, double tol) {
  const int p = c.p(), q = c.q();
  if (v1.cols() == 0 || v2.cols() == 0 || v1.cols() + v2.cols() != q) return std::nullopt;
  auto coeff_kernel = [&](const Matrix& v) {
    Matrix sys(q * v.cols(), p);
    for (int k = 0; k < p; ++k) {
      const Matrix img = c[k] * v;
      sys.col(k) = Eigen::Map<const Vector>(img.data(), img.size());
    }
    return null_space(sys, tol);
  };
  const Matrix z = coeff_kernel(v2);  // p x dimZ
  const Matrix w = coeff_kernel(v1);
  if (z.cols() == 0 || w.cols() == 0 || z.cols() + w.cols() != p) return std::nullopt;

  auto kernel_of = [&](const Matrix& coeffs) {
    Matrix st(q * coeffs.cols(), q);
    for (Eigen::Index r = 0; r < coeffs.cols(); ++r) st.middleRows(r * q, q) = combination(c, coeffs.col(r));
    return null_space(st, tol);
  };
  if (kernel_of(z).cols() != v2.cols() || kernel_of(w).cols() != v1.cols()) return std::nullopt;

  Decomposition d{v1, v2, z.transpose(), w.transpose(), 0.0};
  d.reconstruction_error = verify_decomposition(c, d);
  if (d.reconstruction_error > 1e-8) return std::nullopt;
  return d;
}

// Real bases of the invariant subspaces belonging to eigenvalue clusters
// (a complex eigenvalue is grouped with its conjugate).
std::vector<Matrix> invariant_clusters(const Matrix& t, double tol) {
  Eigen::EigenSolver<Matrix> es(t, true);
  const Eigen::VectorXcd ev = es.eigenvalues();
  const Eigen::MatrixXcd vecs = es.eigenvectors();
  const auto n = ev.size();
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::vector<std::complex<double>> reps;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::complex<double> z = ev(i);
    if (z.imag() < 0) z = std::conj(z);
    int found = -1;
    for (std::size_t r = 0; r < reps.size(); ++r)
      if (std::abs(reps[r] - z) <= tol * (1.0 + std::abs(z))) {
        found = static_cast<int>(r);
        break;
      }
    if (found < 0) {
      reps.push_back(z);
      found = static_cast<int>(reps.size()) - 1;
    }
    label[static_cast<std::size_t>(i)] = found;
  }
  std::vector<Matrix> out;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    std::vector<Vector> cols;
    for (Eigen::Index i = 0; i < n; ++i)
      if (label[static_cast<std::size_t>(i)] == static_cast<int>(r)) {
        cols.push_back(vecs.col(i).real());
        cols.push_back(vecs.col(i).imag());
      }
    Matrix m(t.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = cols[k];
    out.push_back(range_basis(m, 1e-8));
  }
  return out;
}

std::vector<Matrix> symmetric_clusters(const Matrix& s, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  const Vector ev = es.eigenvalues();
  std::vector<Matrix> out;
  Eigen::Index start = 0;
  const double scale = 1.0 + ev.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 1; i <= ev.size(); ++i) {
    if (i == ev.size() || ev(i) - ev(i - 1) > tol * scale) {
      out.push_back(es.eigenvectors().middleCols(start, i - start));
      start = i;
    }
  }
  return out;
}

std::optional<Decomposition> try_clusters(const StructureTensor& c, const std::vector<Matrix>& clusters, double tol) {
  int total = 0;
  for (const auto& m : clusters) total += static_cast<int>(m.cols());
  if (total != c.q() || clusters.size() < 2 || clusters.size() > 14) return std::nullopt;
  const std::size_t nc = clusters.size();
  // Subsets containing cluster 0 for V1; the complement goes to V2.
  for (std::uint64_t mask = 1; mask < (1ULL << nc) - 1; mask += 2) {
    int d1 = 0;
    for (std::size_t i = 0; i < nc; ++i)
      if (mask >> i & 1ULL) d1 += static_cast<int>(clusters[i].cols());
    Matrix v1(c.q(), d1), v2(c.q(), c.q() - d1);
    int a = 0, b = 0;
    for (std::size_t i = 0; i < nc; ++i) {
      const auto w = clusters[i].cols();
      if (mask >> i & 1ULL) {
        v1.middleCols(a, w) = clusters[i];
        a += static_cast<int>(w);
      } else {
        v2.middleCols(b, w) = clusters[i];
        b += static_cast<int>(w);
      }
    }
    if (auto d = try_split(c, v1, v2, tol)) return d;
  }
  return std::nullopt;
}

// Basis of {T : C_k T = T^T C_k for all k}, the maps self-adjoint for every
// form. Projections onto the factors of a splitting lie in it.
std::vector<Matrix> self_adjoint_maps(const StructureTensor& c) {
  const int q = c.q();
  const int nn = q * q;
  Matrix g = Matrix::Zero(nn, nn);
  Vector row(nn);
  for (int k = 0; k < c.p(); ++k) {
    const Matrix& ck = c[k];
    for (int r = 0; r < q; ++r)
      for (int s = 0; s < q; ++s) {
        row.setZero();
        for (int m = 0; m < q; ++m) {
          row(m + s * q) += ck(r, m);
          row(m + r * q) -= ck(m, s);
        }
        g.selfadjointView<Eigen::Lower>().rankUpdate(row);
      }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.selfadjointView<Eigen::Lower>());
  const Vector& ev = es.eigenvalues();
  const double top = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Matrix> out;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) <= 1e-12 * top) out.push_back(Eigen::Map<const Matrix>(es.eigenvectors().col(i).data(), q, q));
  return out;
}

}  // namespace

std::optional<Decomposition> decomposition_search(const StructureTensor& c, const SearchOptions& opts) {
  if (c.p() > opts.max_p)
    throw ContractError("decomposition_search: p = " + std::to_string(c.p()) + " exceeds the search cap " +
                        std::to_string(opts.max_p));
  if (common_kernel(c, opts.rel_tol).cols() != 0)
    throw ContractError("decomposition_search: the components have a common kernel (abelian factor)");

  const int p = c.p(), q = c.q();
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto rand_vec = [&](int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
  };
  // a one-dimensional space holds only the identity
  const std::vector<Matrix> adj = q <= 24 ? self_adjoint_maps(c) : std::vector<Matrix>{};
  for (int attempt = 0; attempt < opts.attempts; ++attempt) {
    if (adj.size() > 1) {
      Matrix t = Matrix::Zero(q, q);
      for (const auto& a : adj) t += normal(rng) * a;
      if (auto d = try_clusters(c, invariant_clusters(t, 1e-6), opts.rel_tol)) return d;
    }
    // (i) invariant subspaces of Y^{-1} X for generic X, Y in the span.
    const Matrix y = combination(c, rand_vec(p));
    if (cond_ratio(y) > 1e-8) {
      const Matrix t = y.partialPivLu().solve(combination(c, rand_vec(p)));
      if (auto d = try_clusters(c, invariant_clusters(t, 1e-6), opts.rel_tol)) return d;
    }
    // (ii) eigenspaces of a random symmetric element of the algebra
    // generated by C_i C_j^T.
    Matrix s = Matrix::Zero(q, q);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        const double r = normal(rng);
        const Matrix e = c[i] * c[j].transpose();
        s += r * (e + e.transpose());
      }
    if (auto d = try_clusters(c, symmetric_clusters(s, 1e-6), opts.rel_tol)) return d;
  }
  return std::nullopt;
}

}  // namespace nilsoliton
