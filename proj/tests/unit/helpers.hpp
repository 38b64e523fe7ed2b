#pragma once

#include "nilsoliton/constructions.hpp"
#include "nilsoliton/tensor.hpp"

namespace testutil {

inline nilsoliton::Matrix mat2(double a, double b, double c, double d) {
  nilsoliton::Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline nilsoliton::Matrix J() { return mat2(0, 1, -1, 0); }

// (J_k (+) 0, 0 (+) J_k) in so(4k)^2
inline nilsoliton::StructureTensor heisenberg_pair(int k) {
  const auto h = nilsoliton::standard_blocks(nilsoliton::BlockName::HeisenbergJ, k);
  nilsoliton::Matrix a = nilsoliton::Matrix::Zero(4 * k, 4 * k), b = a;
  a.topLeftCorner(2 * k, 2 * k) = h[0];
  b.bottomRightCorner(2 * k, 2 * k) = h[0];
  return nilsoliton::StructureTensor(2, 4 * k, {a, b});
}

inline double max_abs(const nilsoliton::Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testutil
