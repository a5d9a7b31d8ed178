#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "formc/tabulation.hpp"

namespace formc {

struct DegenerateElementError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Physical vertex; only the first `dim` coordinates are used.
using Point = std::array<double, 3>;

/// Affine map xi -> J xi + x0 from the reference simplex to a physical one.
struct AffineMap {
  int dim = 0;
  std::array<std::array<double, 3>, 3> J{};    // columns are edge vectors
  std::array<std::array<double, 3>, 3> Jinv{}; // Jinv[m][j] = d xi_m / d x_j
  double detJ = 0.0;                           // signed
};

/// d x d geometry tensor contracted against a reference tensor.
struct GeometryTensor {
  int dim = 0;
  bool symmetric = false;
  std::array<std::array<double, 3>, 3> g{};

  double operator()(int m, int mp) const { return g[m][mp]; }
};

AffineMap affine_map_from_vertices(const std::vector<Point>& vertices, int dim);

/// G_{mm'} = |det J| * sum_j Jinv_{mj} Jinv_{m'j}; built from its upper
/// triangle so the symmetry is exact.
GeometryTensor geometry_tensor(const AffineMap& map);

/// Gtilde = |det J| * Jinv (not symmetric in general).
GeometryTensor tilde_geometry_tensor(const AffineMap& map);

}  // namespace formc
