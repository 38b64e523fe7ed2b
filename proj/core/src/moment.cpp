#include "nilsoliton/moment.hpp"

#include "nilsoliton/errors.hpp"

#include <cmath>

namespace nilsoliton {

double MomentImage::norm() const { return std::sqrt(m1.squaredNorm() + m2.squaredNorm()); }

MomentImage moment(const StructureTensor& c) {
  const int p = c.p();
  const int q = c.q();
  MomentImage m{Matrix::Zero(q, q), Matrix::Zero(p, p)};
  // -2 sum C_i^2 = 2 sum C_i C_i^T for skew C_i; the latter is symmetric by construction.
  for (int i = 0; i < p; ++i) m.m1.noalias() += 2.0 * c[i] * c[i].transpose();
  m.m1 = 0.5 * (m.m1 + m.m1.transpose());
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) {
      const double g = c[i].cwiseProduct(c[j]).sum();
      m.m2(i, j) = g;
      m.m2(j, i) = g;
    }
  return m;
}

MomentImage moment_oracle(const StructureTensor& c) {
  const int p = c.p();
  const int q = c.q();
  MomentImage m{Matrix::Zero(q, q), Matrix::Zero(p, p)};
  const Matrix zero_q = Matrix::Zero(q, q);
  const Matrix zero_p = Matrix::Zero(p, p);

  // With the trace pairing, <<M, E_ii>> = M_ii and <<M, E_ij + E_ji>> = 2 M_ij.
  for (int a = 0; a < q; ++a)
    for (int b = a; b < q; ++b) {
      Matrix e = Matrix::Zero(q, q);
      e(a, b) = 1.0;
      e(b, a) = 1.0;
      const double val = inner(infinitesimal_act(e, zero_p, c), c);
      if (a == b) {
        m.m1(a, a) = val;
      } else {
        m.m1(a, b) = 0.5 * val;
        m.m1(b, a) = 0.5 * val;
      }
    }
  for (int a = 0; a < p; ++a)
    for (int b = a; b < p; ++b) {
      Matrix f = Matrix::Zero(p, p);
      f(a, b) = 1.0;
      f(b, a) = 1.0;
      const double val = inner(infinitesimal_act(zero_q, f, c), c);
      if (a == b) {
        m.m2(a, a) = val;
      } else {
        m.m2(a, b) = 0.5 * val;
        m.m2(b, a) = 0.5 * val;
      }
    }
  return m;
}

StructureTensor moment_action(const StructureTensor& c, const MomentImage& m) {
  return infinitesimal_act(m.m1, m.m2, c);
}

StructureTensor moment_action(const StructureTensor& c) { return moment_action(c, moment(c)); }

double traceless_defect(const Matrix& m) {
  const double n = m.norm();
  if (n == 0.0) return 0.0;
  const double mean = m.trace() / static_cast<double>(m.rows());
  return (m - mean * Matrix::Identity(m.rows(), m.cols())).norm() / n;
}

DistinguishedReport distinguished_report(const StructureTensor& c) {
  const double cc = inner(c, c);
  if (cc == 0.0) throw ContractError("distinguished_report: zero tensor");
  const MomentImage m = moment(c);
  const StructureTensor w = moment_action(c, m);

  DistinguishedReport rep;
  rep.r = inner(w, c) / cc;
  rep.residual = norm(axpy(w, -rep.r, c)) / (std::sqrt(cc) * m.norm());
  rep.sl_p_defect = traceless_defect(m.m2);
  rep.sl_q_defect = traceless_defect(m.m1);
  rep.full_min_defect = (m.m1.norm() + m.m2.norm()) / cc;
  return rep;
}

double minimality_defect(const StructureTensor& c, Subgroup subgroup) {
  const double cc = inner(c, c);
  if (cc == 0.0) throw ContractError("minimality_defect: zero tensor");
  const MomentImage m = moment(c);
  switch (subgroup) {
    case Subgroup::SLp:
      return traceless_defect(m.m2);
    case Subgroup::SLq:
      return traceless_defect(m.m1);
    case Subgroup::SLboth:
      return traceless_defect(m.m1) + traceless_defect(m.m2);
    case Subgroup::Full:
      return (m.m1.norm() + m.m2.norm()) / cc;
  }
  return 0.0;
}

}  // namespace nilsoliton
