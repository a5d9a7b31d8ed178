#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "formc/assembly.hpp"

using namespace formc;
using doctest::Approx;

TEST_CASE("local-to-global dof counts") {
  CHECK(local_to_global(unit_square_mesh(1), 1).n_dofs == 4);
  CHECK(local_to_global(unit_square_mesh(1), 2).n_dofs == 9);
  CHECK(local_to_global(unit_square_mesh(2), 1).n_dofs == 9);
  CHECK(local_to_global(unit_square_mesh(2), 2).n_dofs == 25);
  CHECK(local_to_global(unit_cube_mesh(1), 1).n_dofs == 8);
  CHECK(local_to_global(unit_cube_mesh(2), 1).n_dofs == 27);
  CHECK_THROWS_AS(local_to_global(unit_cube_mesh(1), 2), ParameterError);
}

TEST_CASE("shared nodes resolve to one dof") {
  const auto mesh = unit_square_mesh(2);
  const auto l2g = local_to_global(mesh, 2);
  // Each dof id maps to exactly one physical point, so two cells agreeing on
  // an id must agree on the point; also check the reverse via a scan.
  for (int e = 0; e < mesh.cell_count(); ++e)
    for (int f = e + 1; f < mesh.cell_count(); ++f)
      for (std::size_t a = 0; a < l2g.dofs[e].size(); ++a)
        for (std::size_t b = 0; b < l2g.dofs[f].size(); ++b)
          if (l2g.dofs[e][a] != l2g.dofs[f][b]) {
            const Point& p = l2g.dof_points[l2g.dofs[e][a]];
            const Point& q = l2g.dof_points[l2g.dofs[f][b]];
            const double dist = std::abs(p[0] - q[0]) + std::abs(p[1] - q[1]);
            CHECK(dist > 1e-9);
          }
  // Boundary flags: 16 of the 25 quadratic lattice nodes lie on the boundary.
  int nb = 0;
  for (bool b : l2g.on_boundary) nb += b ? 1 : 0;
  CHECK(nb == 16);
}

TEST_CASE("sparse matrix basics") {
  // Two triangles sharing an edge: dofs {0,1,2} and {1,2,3}.
  SparseMatrix A(4, {{0, 1, 2}, {1, 2, 3}});
  A.add(0, 1, 2.0);
  A.add(1, 0, 2.0);
  A.add(1, 1, 1.0);
  A.add(1, 1, 0.5);
  CHECK(A.get(1, 1) == Approx(1.5));
  CHECK(A.get(0, 3) == 0.0);                       // outside pattern reads 0
  CHECK_THROWS_AS(A.add(0, 3, 1.0), std::logic_error);  // and cannot be written
  std::vector<double> y, x = {1.0, 1.0, 0.0, 0.0};
  A.matvec(x, y);
  CHECK(y[0] == Approx(2.0));
  CHECK(y[1] == Approx(3.5));
  CHECK(A.to_matrix_market().rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);
}

TEST_CASE("kernel variants assemble identical matrices") {
  struct Case {
    int degree, dim, n;
  };
  for (const Case c : {Case{1, 2, 4}, {2, 2, 4}, {1, 3, 2}}) {
    const auto mesh = c.dim == 2 ? unit_square_mesh(c.n) : unit_cube_mesh(c.n);
    const auto l2g = local_to_global(mesh, c.degree);
    const SparseMatrix A = assemble(mesh, l2g, named_kernel("quadrature", c.degree, c.dim));
    const SparseMatrix B = assemble(mesh, l2g, named_kernel("naive", c.degree, c.dim));
    const SparseMatrix C = assemble(mesh, l2g, named_kernel("zeroskip", c.degree, c.dim));
    const double scale = A.frobenius_norm();
    REQUIRE(A.values().size() == B.values().size());
    for (std::size_t k = 0; k < A.values().size(); ++k) {
      CHECK(std::abs(A.values()[k] - B.values()[k]) <= 1e-12 * scale);
      CHECK(std::abs(A.values()[k] - C.values()[k]) <= 1e-12 * scale);
    }
    CHECK(A.max_asymmetry() <= 1e-12 * scale);
    CHECK(A.max_abs_row_sum_violation() <= 1e-10 * scale);
  }
}

TEST_CASE("conjugate gradients on a small SPD system") {
  SparseMatrix A(3, {{0, 1, 2}});
  A.add(0, 0, 4.0);
  A.add(1, 1, 3.0);
  A.add(2, 2, 2.0);
  A.add(0, 1, 1.0);
  A.add(1, 0, 1.0);
  std::vector<double> x, b = {9.0, 5.0, 4.0};
  const int iters = cg_solve(A, b, x);
  CHECK(iters <= 10);
  CHECK(x[0] == Approx(2.0).epsilon(1e-10));
  CHECK(x[1] == Approx(1.0).epsilon(1e-10));
  CHECK(x[2] == Approx(2.0).epsilon(1e-10));
}

TEST_CASE("poisson convergence under refinement") {
  const double e4 = poisson_l2_error(4);
  const double e8 = poisson_l2_error(8);
  CHECK(e4 > 0.0);
  CHECK(e4 / e8 > 3.0);  // second-order L2 convergence
}
