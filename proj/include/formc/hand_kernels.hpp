#pragma once

#include <vector>

#include "formc/geometry.hpp"

namespace formc {

/// Static op ledger of the hand-scheduled quadratic kernel below, counting
/// the core schedule that produces 6*K^e (negations, multiplies, adds) and
/// the extra multiplies that apply the 1/6 scale to the distinct values.
struct QuadraticHandLedger {
  static constexpr int negs = 2;
  static constexpr int mults = 9;
  static constexpr int adds = 7;
  static constexpr int core_ops = negs + mults + adds;  // 18
  static constexpr int scale_ops = 13;
};

/// Hand-coded 18-operation schedule for the quadratic Laplacian element
/// matrix in 2D. Returns the 6x6 matrix row-major with the upper triangle
/// (row <= col, library node ordering) filled.
std::vector<double> builtin_quadratic_kernel(const GeometryTensor& G);

}  // namespace formc
