#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "formc/rational.hpp"

namespace formc {

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Point on the reference simplex; only the first `dim` coordinates are used.
using RefPoint = std::array<Rational, 3>;

/// Monomial exponent vector, x^a[0] * y^a[1] * z^a[2].
using Exponents = std::array<int, 3>;

/// Sparse multivariate polynomial with exact coefficients.
using Polynomial = std::map<Exponents, Rational>;

inline constexpr int kMaxDegree = 6;

int simplex_dim_check(int dim);
int basis_size(int degree, int dim);

/// Equispaced Lagrange lattice on the unit right simplex.
///
/// Ordering is fixed: nodes are grouped by the number of nonzero barycentric
/// coordinates (vertices, then edge nodes, then face/interior nodes) and each
/// group is sorted lexicographically by cartesian coordinates.
std::vector<RefPoint> lagrange_nodes(int degree, int dim);

/// Nodal basis on the lattice above.
struct LagrangeBasis {
  int degree = 0;
  int dim = 0;
  std::vector<RefPoint> nodes;
  std::vector<Exponents> monomials;          // monomial lattice, |a| <= degree
  std::vector<std::vector<Rational>> coeffs; // coeffs[lambda][alpha]

  int size() const { return static_cast<int>(nodes.size()); }
  Polynomial basis_polynomial(int lambda) const;
  Rational eval(int lambda, const RefPoint& x) const;
};

LagrangeBasis lagrange_basis(int degree, int dim);

/// Coefficient matrix of the nodal basis over the monomial lattice, i.e. the
/// inverse of the monomial Vandermonde matrix at the nodes.
std::vector<std::vector<Rational>> basis_coefficients(int degree, int dim);

/// Exact integral of x^a over the unit right d-simplex:
/// (prod a_i!) / (sum a_i + d)!.
Rational integrate_monomial(const Exponents& exponents, int dim);

Rational integrate(const Polynomial& p, int dim);

Polynomial derivative(const Polynomial& p, int direction);
Polynomial multiply(const Polynomial& a, const Polynomial& b);
Rational evaluate(const Polynomial& p, const RefPoint& x);

enum class TensorKind { Laplacian, Advection };

/// Exact 4-index reference tensor. Laplacian entries are indexed
/// (lambda, mu, m, mprime); advection entries are indexed (lambda, mu, rho, m).
struct ReferenceTensor {
  TensorKind kind = TensorKind::Laplacian;
  int degree = 0;
  int dim = 0;
  int nbasis = 0;
  std::vector<Rational> entries;

  const Rational& k(int lambda, int mu, int m, int mprime) const {
    return entries[((lambda * nbasis + mu) * dim + m) * dim + mprime];
  }
  Rational& k(int lambda, int mu, int m, int mprime) {
    return entries[((lambda * nbasis + mu) * dim + m) * dim + mprime];
  }
  const Rational& n(int lambda, int mu, int rho, int m) const {
    return entries[((lambda * nbasis + mu) * nbasis + rho) * dim + m];
  }
  Rational& n(int lambda, int mu, int rho, int m) {
    return entries[((lambda * nbasis + mu) * nbasis + rho) * dim + m];
  }
};

/// K_{lambda,mu,m,m'} = int over the reference simplex of
/// d phi_lambda / d xi_m * d phi_mu / d xi_m'.
ReferenceTensor reference_stiffness_tensor(int degree, int dim);

/// N_{lambda,mu,rho,m} = int of phi_lambda * d phi_mu / d xi_m * phi_rho.
///
/// For degree 1 the products are integrated with the edge-midpoint rule in
/// exact rationals, which defines the factorized D x F tensor used throughout
/// the advection pipeline (in 3D this differs from the exact integral; the
/// midpoint rule is only degree-1 exact on tetrahedra). Degree >= 2 uses
/// exact symbolic integration.
ReferenceTensor reference_advection_tensor(int degree, int dim);

/// One-line description of the node ordering, embedded in tensor dumps.
std::string node_ordering_description();

}  // namespace formc
