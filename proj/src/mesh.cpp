#include "formc/mesh.hpp"

#include <cmath>
#include <map>

namespace formc {

std::vector<Point> StructuredMesh::cell_vertices(int e) const {
  std::vector<Point> out;
  for (int v : cells[e]) out.push_back(vertices[v]);
  return out;
}

StructuredMesh unit_square_mesh(int n) {
  if (n < 1) throw ParameterError("mesh subdivisions must be >= 1");
  StructuredMesh m;
  m.dim = 2;
  m.n = n;
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.vertices.push_back({i * h, j * h, 0.0});
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // Lower-left and upper-right triangle of each cell, both CCW.
      m.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      m.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  return m;
}

StructuredMesh unit_cube_mesh(int n) {
  if (n < 1) throw ParameterError("mesh subdivisions must be >= 1");
  StructuredMesh m;
  m.dim = 3;
  m.n = n;
  const double h = 1.0 / n;
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        m.vertices.push_back({i * h, j * h, k * h});
  auto vid = [n](int i, int j, int k) {
    return (k * (n + 1) + j) * (n + 1) + i;
  };
  // Kuhn subdivision: one tet per permutation of the axis order, each the
  // path from corner (0,0,0) to (1,1,1) adding one axis at a time.
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : perms) {
          int c[4][3] = {{i, j, k}, {}, {}, {}};
          for (int s = 0; s < 3; ++s) {
            for (int t = 0; t < 3; ++t) c[s + 1][t] = c[s][t];
            ++c[s + 1][p[s]];
          }
          std::vector<int> tet = {vid(c[0][0], c[0][1], c[0][2]),
                                  vid(c[1][0], c[1][1], c[1][2]),
                                  vid(c[2][0], c[2][1], c[2][2]),
                                  vid(c[3][0], c[3][1], c[3][2])};
          // Orient positively: swap two vertices if the path permutation is
          // odd (determinant of the edge matrix flips with the permutation).
          const bool odd = (p[0] == 0 && p[1] == 2) ||
                           (p[0] == 1 && p[1] == 0) ||
                           (p[0] == 2 && p[1] == 1);
          if (odd) std::swap(tet[1], tet[2]);
          m.cells.push_back(std::move(tet));
        }
  return m;
}

LocalToGlobal local_to_global(const StructuredMesh& mesh, int degree) {
  if (degree < 1 || degree > kMaxDegree)
    throw ParameterError("unsupported degree");
  if (mesh.dim == 3 && degree != 1)
    throw ParameterError("3D local-to-global supports degree 1 only");
  const auto ref_nodes = lagrange_nodes(degree, mesh.dim);
  const int nloc = static_cast<int>(ref_nodes.size());
  const long scale = static_cast<long>(mesh.n) * degree;

  LocalToGlobal l2g;
  l2g.degree = degree;
  l2g.dofs.assign(mesh.cells.size(), std::vector<int>(nloc, -1));

  // Structured meshes place every Lagrange node on the lattice with spacing
  // 1/(n*degree); quantizing physical coordinates to that lattice unifies
  // shared dofs exactly, including edge-interior nodes of adjacent cells.
  std::map<std::array<long, 3>, int> ids;
  for (std::size_t e = 0; e < mesh.cells.size(); ++e) {
    const auto verts = mesh.cell_vertices(static_cast<int>(e));
    const AffineMap map = affine_map_from_vertices(verts, mesh.dim);
    for (int la = 0; la < nloc; ++la) {
      Point x = verts[0];
      for (int r = 0; r < mesh.dim; ++r)
        for (int c = 0; c < mesh.dim; ++c)
          x[r] += map.J[r][c] * to_double(ref_nodes[la][c]);
      std::array<long, 3> key{0, 0, 0};
      for (int r = 0; r < mesh.dim; ++r) key[r] = std::lround(x[r] * scale);
      auto [it, inserted] = ids.try_emplace(key, l2g.n_dofs);
      if (inserted) {
        ++l2g.n_dofs;
        Point p{0, 0, 0};
        for (int r = 0; r < mesh.dim; ++r)
          p[r] = static_cast<double>(key[r]) / scale;
        l2g.dof_points.push_back(p);
        bool bdry = false;
        for (int r = 0; r < mesh.dim; ++r)
          if (key[r] == 0 || key[r] == scale) bdry = true;
        l2g.on_boundary.push_back(bdry);
      }
      l2g.dofs[e][la] = it->second;
    }
  }
  return l2g;
}

}  // namespace formc
