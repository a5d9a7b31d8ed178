#include "formc/tabulation.hpp"

#include <algorithm>
#include <numeric>

namespace formc {

int simplex_dim_check(int dim) {
  if (dim != 2 && dim != 3)
    throw ParameterError("dim must be 2 or 3, got " + std::to_string(dim));
  return dim;
}

int basis_size(int degree, int dim) {
  // C(degree + dim, dim)
  long long n = 1;
  for (int i = 1; i <= dim; ++i) n = n * (degree + i) / i;
  return static_cast<int>(n);
}

namespace {

void degree_check(int degree, int dim) {
  simplex_dim_check(dim);
  if (degree < 1 || degree > kMaxDegree)
    throw ParameterError("degree must be in [1," + std::to_string(kMaxDegree) +
                         "], got " + std::to_string(degree));
}

// Number of nonzero barycentric coordinates of a lattice point (i / degree).
int bary_support(const std::array<int, 3>& i, int degree, int dim) {
  int sum = 0, nonzero = 0;
  for (int j = 0; j < dim; ++j) {
    sum += i[j];
    if (i[j] != 0) ++nonzero;
  }
  if (degree - sum != 0) ++nonzero;
  return nonzero;
}

std::vector<Exponents> monomial_lattice(int degree, int dim) {
  std::vector<Exponents> out;
  if (dim == 2) {
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) out.push_back({a, b, 0});
  } else {
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
        for (int c = 0; a + b + c <= degree; ++c) out.push_back({a, b, c});
  }
  return out;
}

Rational pow_rational(const Rational& x, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

Rational monomial_at(const Exponents& a, const RefPoint& x, int dim) {
  Rational r = 1;
  for (int j = 0; j < dim; ++j) r *= pow_rational(x[j], a[j]);
  return r;
}

}  // namespace

std::vector<RefPoint> lagrange_nodes(int degree, int dim) {
  degree_check(degree, dim);
  std::vector<std::array<int, 3>> lattice;
  if (dim == 2) {
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) lattice.push_back({a, b, 0});
  } else {
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
        for (int c = 0; a + b + c <= degree; ++c) lattice.push_back({a, b, c});
  }
  std::stable_sort(lattice.begin(), lattice.end(),
                   [&](const auto& p, const auto& q) {
                     int sp = bary_support(p, degree, dim);
                     int sq = bary_support(q, degree, dim);
                     if (sp != sq) return sp < sq;
                     return p < q;
                   });
  std::vector<RefPoint> nodes;
  nodes.reserve(lattice.size());
  for (const auto& i : lattice) {
    RefPoint x{Rational(0), Rational(0), Rational(0)};
    for (int j = 0; j < dim; ++j) x[j] = Rational(i[j], degree);
    nodes.push_back(x);
  }
  return nodes;
}

std::string node_ordering_description() {
  return "equispaced lattice; grouped by barycentric support size "
         "(vertices, edges, interior), lexicographic within each group";
}

std::vector<std::vector<Rational>> basis_coefficients(int degree, int dim) {
  degree_check(degree, dim);
  const auto nodes = lagrange_nodes(degree, dim);
  const auto monomials = monomial_lattice(degree, dim);
  const int n = static_cast<int>(nodes.size());

  // Vandermonde V[mu][alpha] = node_mu^alpha; solve V X = I exactly,
  // then coeffs[lambda][alpha] = X[alpha][lambda].
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n, 0));
  for (int mu = 0; mu < n; ++mu) {
    for (int al = 0; al < n; ++al)
      a[mu][al] = monomial_at(monomials[al], nodes[mu], dim);
    a[mu][n + mu] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col] != 0) { piv = r; break; }
    if (piv < 0)
      throw std::logic_error("singular Vandermonde on the simplex lattice");
    std::swap(a[col], a[piv]);
    const Rational inv = Rational(1) / a[col][col];
    for (int c = col; c < 2 * n; ++c) a[col][c] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (int c = col; c < 2 * n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<std::vector<Rational>> coeffs(n, std::vector<Rational>(n, 0));
  for (int lambda = 0; lambda < n; ++lambda)
    for (int al = 0; al < n; ++al) coeffs[lambda][al] = a[al][n + lambda];
  return coeffs;
}

LagrangeBasis lagrange_basis(int degree, int dim) {
  LagrangeBasis b;
  b.degree = degree;
  b.dim = dim;
  b.nodes = lagrange_nodes(degree, dim);
  b.monomials = monomial_lattice(degree, dim);
  b.coeffs = basis_coefficients(degree, dim);
  return b;
}

Polynomial LagrangeBasis::basis_polynomial(int lambda) const {
  Polynomial p;
  for (std::size_t al = 0; al < monomials.size(); ++al)
    if (coeffs[lambda][al] != 0) p[monomials[al]] = coeffs[lambda][al];
  return p;
}

Rational LagrangeBasis::eval(int lambda, const RefPoint& x) const {
  Rational r = 0;
  for (std::size_t al = 0; al < monomials.size(); ++al)
    if (coeffs[lambda][al] != 0)
      r += coeffs[lambda][al] * monomial_at(monomials[al], x, dim);
  return r;
}

Rational integrate_monomial(const Exponents& exponents, int dim) {
  simplex_dim_check(dim);
  int total = 0;
  Int num = 1;
  for (int j = 0; j < dim; ++j) {
    if (exponents[j] < 0) throw ParameterError("negative exponent");
    total += exponents[j];
    num *= factorial(exponents[j]);
  }
  return Rational(num, factorial(total + dim));
}

Rational integrate(const Polynomial& p, int dim) {
  Rational r = 0;
  for (const auto& [a, c] : p) r += c * integrate_monomial(a, dim);
  return r;
}

Polynomial derivative(const Polynomial& p, int direction) {
  Polynomial out;
  for (const auto& [a, c] : p) {
    if (a[direction] == 0) continue;
    Exponents b = a;
    --b[direction];
    out[b] += c * a[direction];
  }
  return out;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponents e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
      out[e] += ca * cb;
    }
  return out;
}

Rational evaluate(const Polynomial& p, const RefPoint& x) {
  Rational r = 0;
  for (const auto& [a, c] : p) r += c * monomial_at(a, x, 3);
  return r;
}

ReferenceTensor reference_stiffness_tensor(int degree, int dim) {
  degree_check(degree, dim);
  const auto basis = lagrange_basis(degree, dim);
  const int n = basis.size();

  std::vector<std::vector<Polynomial>> grad(n, std::vector<Polynomial>(dim));
  for (int lambda = 0; lambda < n; ++lambda) {
    const Polynomial p = basis.basis_polynomial(lambda);
    for (int m = 0; m < dim; ++m) grad[lambda][m] = derivative(p, m);
  }

  ReferenceTensor t;
  t.kind = TensorKind::Laplacian;
  t.degree = degree;
  t.dim = dim;
  t.nbasis = n;
  t.entries.assign(static_cast<std::size_t>(n) * n * dim * dim, Rational(0));

  std::map<Exponents, Rational> integral_cache;
  auto cached_integral = [&](const Exponents& e) {
    auto it = integral_cache.find(e);
    if (it == integral_cache.end())
      it = integral_cache.emplace(e, integrate_monomial(e, dim)).first;
    return it->second;
  };

  for (int lambda = 0; lambda < n; ++lambda)
    for (int mu = lambda; mu < n; ++mu)
      for (int m = 0; m < dim; ++m)
        for (int mp = 0; mp < dim; ++mp) {
          Rational v = 0;
          for (const auto& [ea, ca] : grad[lambda][m])
            for (const auto& [eb, cb] : grad[mu][mp]) {
              Exponents e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
              v += ca * cb * cached_integral(e);
            }
          t.k(lambda, mu, m, mp) = v;
          t.k(mu, lambda, mp, m) = v;
        }
  return t;
}

ReferenceTensor reference_advection_tensor(int degree, int dim) {
  degree_check(degree, dim);
  const auto basis = lagrange_basis(degree, dim);
  const int n = basis.size();

  if (degree == 1) {
    // Piecewise-linear convention: the products phi_lambda*phi_rho are
    // summed over edge midpoints with the conventional weights 1/6 (2D) and
    // 1/24 (3D), evaluated in exact rational arithmetic. This reproduces the
    // D x F factorization exactly. The 2D sum is a genuine degree-2
    // quadrature; the 3D one is not (the resulting tensor deliberately
    // differs from the exact integral, diagonal 1/32 vs 1/60), but the
    // factorized values are the normative ones for this library.
    std::vector<RefPoint> verts(dim + 1,
                                RefPoint{Rational(0), Rational(0), Rational(0)});
    for (int j = 0; j < dim; ++j) verts[j + 1][j] = 1;
    std::vector<RefPoint> mids;
    for (int a = 0; a <= dim; ++a)
      for (int b = a + 1; b <= dim; ++b) {
        RefPoint p;
        for (int j = 0; j < dim; ++j)
          p[j] = (verts[a][j] + verts[b][j]) / 2;
        mids.push_back(p);
      }
    const Rational w = dim == 2 ? rat(1, 6) : rat(1, 24);

    ReferenceTensor t;
    t.kind = TensorKind::Advection;
    t.degree = degree;
    t.dim = dim;
    t.nbasis = n;
    t.entries.assign(static_cast<std::size_t>(n) * n * n * dim, Rational(0));

    // F[lambda][rho] = sum_pts w * phi_lambda * phi_rho; D[mu][m] constant.
    std::vector<std::vector<Rational>> F(n, std::vector<Rational>(n, 0));
    for (const auto& p : mids)
      for (int la = 0; la < n; ++la) {
        const Rational vla = basis.eval(la, p);
        if (vla == 0) continue;
        for (int rho = 0; rho < n; ++rho) F[la][rho] += w * vla * basis.eval(rho, p);
      }
    for (int mu = 0; mu < n; ++mu) {
      const Polynomial p = basis.basis_polynomial(mu);
      for (int m = 0; m < dim; ++m) {
        const Polynomial dp = derivative(p, m);
        const Rational d = dp.empty() ? Rational(0) : dp.begin()->second;
        if (d == 0) continue;
        for (int la = 0; la < n; ++la)
          for (int rho = 0; rho < n; ++rho)
            t.n(la, mu, rho, m) = d * F[la][rho];
      }
    }
    return t;
  }

  std::vector<Polynomial> phi(n);
  std::vector<std::vector<Polynomial>> dphi(n, std::vector<Polynomial>(dim));
  for (int lambda = 0; lambda < n; ++lambda) {
    phi[lambda] = basis.basis_polynomial(lambda);
    for (int m = 0; m < dim; ++m) dphi[lambda][m] = derivative(phi[lambda], m);
  }

  ReferenceTensor t;
  t.kind = TensorKind::Advection;
  t.degree = degree;
  t.dim = dim;
  t.nbasis = n;
  t.entries.assign(static_cast<std::size_t>(n) * n * n * dim, Rational(0));

  for (int lambda = 0; lambda < n; ++lambda)
    for (int rho = lambda; rho < n; ++rho) {
      const Polynomial pair = multiply(phi[lambda], phi[rho]);
      for (int mu = 0; mu < n; ++mu)
        for (int m = 0; m < dim; ++m) {
          const Rational v = integrate(multiply(pair, dphi[mu][m]), dim);
          t.n(lambda, mu, rho, m) = v;
          t.n(rho, mu, lambda, m) = v; // N is symmetric in (lambda, rho)
        }
    }
  return t;
}

}  // namespace formc
