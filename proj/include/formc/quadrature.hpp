#pragma once

#include <vector>

#include "formc/geometry.hpp"
#include "formc/tabulation.hpp"

namespace formc {

struct QuadratureRule {
  int dim = 0;
  int exactness = 0;
  std::vector<Point> points;
  std::vector<double> weights;  // sum to the simplex measure 1/d!
};

/// Edge-midpoint rule: 3 points with weight 1/6 on the triangle, 6 points
/// with weight 1/24 on the tetrahedron. The 2D rule is degree-2 exact; the
/// 3D variant keeps the conventional 1/24 weights (which do not sum to the
/// tet volume) because the degree-1 product tensors are defined with them.
QuadratureRule midpoint_rule(int dim);

/// Collapsed-coordinate Gauss product rule integrating all polynomials of
/// total degree <= exactness.
QuadratureRule quadrature_rule(int dim, int exactness);

/// Gauss-Legendre points/weights on [0,1].
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

/// Float-valued reference stiffness tensor evaluated by quadrature.
struct QuadTensor {
  int degree = 0, dim = 0, nbasis = 0;
  bool sufficient = true;  // false when the rule's exactness is too low
  std::vector<double> entries;  // (lambda, mu, m, mprime) row-major

  double k(int la, int mu, int m, int mp) const {
    return entries[((la * nbasis + mu) * dim + m) * dim + mp];
  }
};

QuadTensor quadrature_K(int degree, int dim, const QuadratureRule& rule);

/// Tabulated reference basis values and gradients at a rule's points,
/// shared by the quadrature assembly kernel and error integration.
struct BasisAtPoints {
  int nbasis = 0, npoints = 0, dim = 0;
  std::vector<double> phi;   // [point][lambda]
  std::vector<double> dphi;  // [point][lambda][m]

  double value(int q, int la) const { return phi[q * nbasis + la]; }
  double grad(int q, int la, int m) const {
    return dphi[(q * nbasis + la) * dim + m];
  }
};

BasisAtPoints tabulate_basis(int degree, int dim, const QuadratureRule& rule);

}  // namespace formc
