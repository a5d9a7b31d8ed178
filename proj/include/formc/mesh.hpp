#pragma once

#include <vector>

#include "formc/geometry.hpp"
#include "formc/tabulation.hpp"

namespace formc {

struct StructuredMesh {
  int dim = 0;
  int n = 0;  // subdivisions per side
  std::vector<Point> vertices;
  std::vector<std::vector<int>> cells;  // (dim+1) vertex ids, positive detJ

  int cell_count() const { return static_cast<int>(cells.size()); }
  std::vector<Point> cell_vertices(int e) const;
};

/// Unit square cut into 2n^2 triangles along one diagonal per cell.
StructuredMesh unit_square_mesh(int n);

/// Unit cube cut into 6n^3 Kuhn tetrahedra.
StructuredMesh unit_cube_mesh(int n);

struct LocalToGlobal {
  int n_dofs = 0;
  int degree = 1;
  std::vector<std::vector<int>> dofs;     // [cell][local node]
  std::vector<bool> on_boundary;          // per dof
  std::vector<Point> dof_points;          // physical node positions
};

/// Unifies shared lattice nodes across cells. Supported: any degree <= 6 in
/// 2D, degree 1 in 3D.
LocalToGlobal local_to_global(const StructuredMesh& mesh, int degree);

}  // namespace formc
