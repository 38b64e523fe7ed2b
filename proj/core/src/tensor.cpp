#include "nilsoliton/tensor.hpp"

#include "nilsoliton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nilsoliton {

namespace {

std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix skew_part(const Matrix& m) { return 0.5 * (m - m.transpose()); }

StructureTensor::StructureTensor(int p, int q, std::vector<Matrix> entries) {
  if (p < 1) throw ContractError("structure tensor needs p >= 1, got p=" + std::to_string(p));
  if (q < 2) throw ContractError("structure tensor needs q >= 2, got q=" + std::to_string(q));
  if (static_cast<int>(entries.size()) != p) {
    throw DimensionError("expected " + std::to_string(p) + " matrices, got " +
                         std::to_string(entries.size()));
  }
  q_ = q;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Matrix& m = entries[k];
    if (m.rows() != q || m.cols() != q) {
      throw DimensionError("matrix " + std::to_string(k) + " is " + shape_of(m) + ", expected " +
                           std::to_string(q) + "x" + std::to_string(q));
    }
    if (!m.allFinite()) throw ContractError("matrix " + std::to_string(k) + " has a non-finite entry");
    Matrix s = skew_part(m);
    correction_ = std::max(correction_, (m - s).cwiseAbs().maxCoeff());
    mats_.push_back(std::move(s));
  }
}

StructureTensor StructureTensor::from_components(std::vector<Matrix> entries) {
  if (entries.empty()) throw ContractError("structure tensor needs at least one component");
  const int p = static_cast<int>(entries.size());
  const int q = static_cast<int>(entries.front().rows());
  return StructureTensor(p, q, std::move(entries));
}

StructureTensor StructureTensor::zero(int p, int q) {
  return StructureTensor(p, q, std::vector<Matrix>(static_cast<std::size_t>(std::max(p, 0)), Matrix::Zero(q, q)));
}

StructureTensor StructureTensor::with_labels(std::vector<std::string> labels) const {
  StructureTensor out = *this;
  out.labels_ = std::move(labels);
  return out;
}

StructureTensor StructureTensor::scaled(double s) const {
  StructureTensor out = *this;
  for (auto& m : out.mats_) m *= s;
  out.correction_ = 0.0;
  return out;
}

Matrix StructureTensor::coefficient_matrix() const {
  Matrix out(p(), so_dim());
  const double r2 = std::sqrt(2.0);
  for (int k = 0; k < p(); ++k) {
    int col = 0;
    for (int i = 0; i < q_; ++i)
      for (int j = i + 1; j < q_; ++j) out(k, col++) = r2 * mats_[static_cast<std::size_t>(k)](i, j);
  }
  return out;
}

bool StructureTensor::operator==(const StructureTensor& other) const {
  if (q_ != other.q_ || p() != other.p()) return false;
  for (int k = 0; k < p(); ++k)
    if (mats_[static_cast<std::size_t>(k)] != other.mats_[static_cast<std::size_t>(k)]) return false;
  return true;
}

StructureTensor new_tensor(int p, int q, std::vector<Matrix> entries) {
  return StructureTensor(p, q, std::move(entries));
}

double inner(const StructureTensor& a, const StructureTensor& b) {
  if (a.p() != b.p() || a.q() != b.q()) throw DimensionError("inner product of tensors of different type");
  double s = 0.0;
  for (int k = 0; k < a.p(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

double norm(const StructureTensor& c) { return std::sqrt(inner(c, c)); }

double max_abs_difference(const StructureTensor& a, const StructureTensor& b) {
  if (a.p() != b.p() || a.q() != b.q()) throw DimensionError("comparing tensors of different type");
  double m = 0.0;
  for (int k = 0; k < a.p(); ++k) m = std::max(m, (a[k] - b[k]).cwiseAbs().maxCoeff());
  return m;
}

StructureTensor axpy(const StructureTensor& a, double s, const StructureTensor& b) {
  if (a.p() != b.p() || a.q() != b.q()) throw DimensionError("axpy on tensors of different type");
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(a.p()));
  for (int k = 0; k < a.p(); ++k) out.push_back(a[k] + s * b[k]);
  return StructureTensor(a.p(), a.q(), std::move(out));
}

double component_rank_ratio(const StructureTensor& c) {
  const Matrix coeff = c.coefficient_matrix();
  if (c.p() > c.so_dim()) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(coeff);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

bool is_type_pq(const StructureTensor& c, double tol) { return component_rank_ratio(c) > tol; }

GroupElement GroupElement::identity(int q, int p) { return {Matrix::Identity(q, q), Matrix::Identity(p, p)}; }

GroupElement GroupElement::operator*(const GroupElement& other) const {
  if (g.rows() != other.g.rows() || h.rows() != other.h.rows())
    throw DimensionError("composing group elements of different size");
  return {g * other.g, h * other.h};
}

StructureTensor group_act(const GroupElement& e, const StructureTensor& c) {
  const int p = c.p();
  const int q = c.q();
  if (e.g.rows() != q || e.g.cols() != q) throw DimensionError("group element g is " + shape_of(e.g) + ", tensor q=" + std::to_string(q));
  if (e.h.rows() != p || e.h.cols() != p) throw DimensionError("group element h is " + shape_of(e.h) + ", tensor p=" + std::to_string(p));
  if (std::abs(e.g.determinant()) <= kInvertibilityTolerance) throw ContractError("group element g is singular");
  if (std::abs(e.h.determinant()) <= kInvertibilityTolerance) throw ContractError("group element h is singular");

  std::vector<Matrix> conj;
  conj.reserve(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) conj.push_back(e.g * c[j] * e.g.transpose());
  std::vector<Matrix> out(static_cast<std::size_t>(p), Matrix::Zero(q, q));
  for (int k = 0; k < p; ++k)
    for (int j = 0; j < p; ++j)
      if (e.h(k, j) != 0.0) out[static_cast<std::size_t>(k)] += e.h(k, j) * conj[static_cast<std::size_t>(j)];
  return StructureTensor(p, q, std::move(out));
}

StructureTensor infinitesimal_act(const Matrix& x, const Matrix& y, const StructureTensor& c) {
  const int p = c.p();
  const int q = c.q();
  if (x.rows() != q || x.cols() != q) throw DimensionError("X is " + shape_of(x) + ", tensor q=" + std::to_string(q));
  if (y.rows() != p || y.cols() != p) throw DimensionError("Y is " + shape_of(y) + ", tensor p=" + std::to_string(p));
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) {
    Matrix m = x * c[k] + c[k] * x.transpose();
    for (int j = 0; j < p; ++j)
      if (y(k, j) != 0.0) m += y(k, j) * c[j];
    out.push_back(std::move(m));
  }
  return StructureTensor(p, q, std::move(out));
}

Matrix block_diagonal(std::span<const Matrix> blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols()) throw DimensionError("block_diagonal needs square blocks");
    n += b.rows();
  }
  Matrix out = Matrix::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

}  // namespace nilsoliton
