#include "formc/hand_kernels.hpp"

#include <algorithm>

namespace formc {

std::vector<double> builtin_quadratic_kernel(const GeometryTensor& G) {
  if (G.dim != 2 || !G.symmetric)
    throw ParameterError("quadratic hand kernel needs a symmetric 2x2 G");
  const double g11 = G.g[0][0], g12 = G.g[0][1], g22 = G.g[1][1];

  // 18-operation core producing the element matrix scaled by six:
  // 7 adds, 9 multiplies, 2 negations.
  const double s11 = g11 + g12;        // add
  const double s22 = g12 + g22;        // add
  const double d4 = 4.0 * g12;         // mult
  const double d8 = 2.0 * d4;          // mult
  const double f = 8.0 * g22;          // mult
  const double i8 = 8.0 * g11;         // mult
  const double p = i8 + f;             // add
  const double mm = d8 + p;            // add; shared midpoint diagonal
  const double v1 = -4.0 * s11;        // mult
  const double v2 = -4.0 * s22;        // mult
  const double a = 3.0 * g11;          // mult
  const double b = 3.0 * g22;          // mult
  const double c = -g12;               // neg
  const double s = s11 + s22;          // add
  const double e = 3.0 * s;            // mult
  const double n8 = -d8;               // neg
  const double h = n8 - f;             // add
  const double k = n8 - i8;            // add

  // Scale the thirteen distinct values by 1/6 once each.
  const double w = 1.0 / 6.0;
  const double A = w * a, B = w * b, C = w * c, E = w * e;
  const double S11 = w * s11, S22 = w * s22, V1 = w * v1, V2 = w * v2;
  const double D4 = w * d4, D8 = w * d8, MM = w * mm, H = w * h, K2 = w * k;

  // Scatter into the library node ordering (vertices O,(0,1),(1,0), then
  // midpoints (0,1/2),(1/2,0),(1/2,1/2)); the schedule above is phrased in
  // the vertex-first numbering [x-vertex, y-vertex, origin, mid-x, mid-diag,
  // mid-y], permuted here via [2,1,0,4,5,3].
  static constexpr int perm[6] = {2, 1, 0, 4, 5, 3};
  const double vals[6][6] = {
      {A, C, S11, V1, D4, 0.0},  {0, B, S22, 0.0, D4, V2},
      {0, 0, E, V1, 0.0, V2},    {0, 0, 0, MM, H, D8},
      {0, 0, 0, 0, MM, K2},      {0, 0, 0, 0, 0, MM},
  };
  std::vector<double> out(36, 0.0);
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) {
      const int r = perm[i], cdx = perm[j];
      out[std::min(r, cdx) * 6 + std::max(r, cdx)] = vals[i][j];
    }
  return out;
}

}  // namespace formc
