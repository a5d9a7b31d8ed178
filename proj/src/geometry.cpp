#include "formc/geometry.hpp"

#include <cmath>

namespace formc {

namespace {

double det2(const std::array<std::array<double, 3>, 3>& a) {
  return a[0][0] * a[1][1] - a[0][1] * a[1][0];
}

double det3(const std::array<std::array<double, 3>, 3>& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

}  // namespace

AffineMap affine_map_from_vertices(const std::vector<Point>& vertices,
                                   int dim) {
  simplex_dim_check(dim);
  if (static_cast<int>(vertices.size()) != dim + 1)
    throw ParameterError("expected dim+1 vertices");

  AffineMap map;
  map.dim = dim;
  double edge_scale = 1.0;
  for (int i = 0; i < dim; ++i) {
    double norm2 = 0.0;
    for (int r = 0; r < dim; ++r) {
      map.J[r][i] = vertices[i + 1][r] - vertices[0][r];
      norm2 += map.J[r][i] * map.J[r][i];
    }
    edge_scale *= std::sqrt(norm2);
  }

  map.detJ = dim == 2 ? det2(map.J) : det3(map.J);
  if (std::abs(map.detJ) < 1e-14 * edge_scale)
    throw DegenerateElementError("degenerate element (|det J| ~ 0)");

  const double inv = 1.0 / map.detJ;
  if (dim == 2) {
    map.Jinv[0][0] = map.J[1][1] * inv;
    map.Jinv[0][1] = -map.J[0][1] * inv;
    map.Jinv[1][0] = -map.J[1][0] * inv;
    map.Jinv[1][1] = map.J[0][0] * inv;
  } else {
    const auto& j = map.J;
    map.Jinv[0][0] = (j[1][1] * j[2][2] - j[1][2] * j[2][1]) * inv;
    map.Jinv[0][1] = (j[0][2] * j[2][1] - j[0][1] * j[2][2]) * inv;
    map.Jinv[0][2] = (j[0][1] * j[1][2] - j[0][2] * j[1][1]) * inv;
    map.Jinv[1][0] = (j[1][2] * j[2][0] - j[1][0] * j[2][2]) * inv;
    map.Jinv[1][1] = (j[0][0] * j[2][2] - j[0][2] * j[2][0]) * inv;
    map.Jinv[1][2] = (j[0][2] * j[1][0] - j[0][0] * j[1][2]) * inv;
    map.Jinv[2][0] = (j[1][0] * j[2][1] - j[1][1] * j[2][0]) * inv;
    map.Jinv[2][1] = (j[0][1] * j[2][0] - j[0][0] * j[2][1]) * inv;
    map.Jinv[2][2] = (j[0][0] * j[1][1] - j[0][1] * j[1][0]) * inv;
  }
  return map;
}

GeometryTensor geometry_tensor(const AffineMap& map) {
  GeometryTensor g;
  g.dim = map.dim;
  g.symmetric = true;
  const double adet = std::abs(map.detJ);
  for (int m = 0; m < map.dim; ++m)
    for (int mp = m; mp < map.dim; ++mp) {
      double s = 0.0;
      for (int j = 0; j < map.dim; ++j) s += map.Jinv[m][j] * map.Jinv[mp][j];
      g.g[m][mp] = adet * s;
      g.g[mp][m] = g.g[m][mp];
    }
  return g;
}

GeometryTensor tilde_geometry_tensor(const AffineMap& map) {
  GeometryTensor g;
  g.dim = map.dim;
  g.symmetric = false;
  const double adet = std::abs(map.detJ);
  for (int m = 0; m < map.dim; ++m)
    for (int j = 0; j < map.dim; ++j) g.g[m][j] = adet * map.Jinv[m][j];
  return g;
}

}  // namespace formc
