#include "formc/quadrature.hpp"

#include <cmath>

namespace formc {

void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n over [-1,1], Tricomi-style initial guess.
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = 0.5 * (1.0 + t);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

QuadratureRule midpoint_rule(int dim) {
  simplex_dim_check(dim);
  QuadratureRule r;
  r.dim = dim;
  r.exactness = dim == 2 ? 2 : 0;
  std::vector<Point> verts(dim + 1, Point{0, 0, 0});
  for (int j = 0; j < dim; ++j) verts[j + 1][j] = 1.0;
  for (int a = 0; a <= dim; ++a)
    for (int b = a + 1; b <= dim; ++b) {
      Point p{0, 0, 0};
      for (int j = 0; j < dim; ++j) p[j] = 0.5 * (verts[a][j] + verts[b][j]);
      r.points.push_back(p);
    }
  // Conventional weights: 1/6 in 2D (a true degree-2 rule) and 1/24 in 3D.
  // The 3D weights do not sum to the tetrahedron volume; that variant exists
  // to reproduce the published piecewise-linear product constants and is not
  // a consistent volume rule, hence exactness 0.
  r.weights.assign(r.points.size(), dim == 2 ? 1.0 / 6.0 : 1.0 / 24.0);
  return r;
}

QuadratureRule quadrature_rule(int dim, int exactness) {
  simplex_dim_check(dim);
  if (exactness < 0) throw ParameterError("exactness must be nonnegative");
  QuadratureRule r;
  r.dim = dim;
  r.exactness = exactness;
  // Duffy transform; the collapse Jacobian raises the per-direction degree,
  // so take a couple of extra Gauss points.
  const int q = exactness / 2 + 2;
  std::vector<double> x, w;
  gauss_legendre_01(q, x, w);
  if (dim == 2) {
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        r.points.push_back({x[i], x[j] * (1.0 - x[i]), 0.0});
        r.weights.push_back(w[i] * w[j] * (1.0 - x[i]));
      }
  } else {
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        for (int k = 0; k < q; ++k) {
          const double xi = x[i], eta = x[j] * (1.0 - xi),
                       zeta = x[k] * (1.0 - xi) * (1.0 - x[j]);
          r.points.push_back({xi, eta, zeta});
          r.weights.push_back(w[i] * w[j] * w[k] * (1.0 - xi) * (1.0 - xi) *
                              (1.0 - x[j]));
        }
  }
  return r;
}

BasisAtPoints tabulate_basis(int degree, int dim, const QuadratureRule& rule) {
  const auto basis = lagrange_basis(degree, dim);
  const int n = basis.size();
  const int np = static_cast<int>(rule.points.size());

  // Double-precision copies of the monomial coefficients.
  const int nmono = static_cast<int>(basis.monomials.size());
  std::vector<double> coeff(static_cast<std::size_t>(n) * nmono);
  for (int la = 0; la < n; ++la)
    for (int al = 0; al < nmono; ++al)
      coeff[la * nmono + al] = to_double(basis.coeffs[la][al]);

  BasisAtPoints out;
  out.nbasis = n;
  out.npoints = np;
  out.dim = dim;
  out.phi.assign(static_cast<std::size_t>(np) * n, 0.0);
  out.dphi.assign(static_cast<std::size_t>(np) * n * dim, 0.0);

  std::vector<double> mono(nmono), dmono(nmono);
  for (int qp = 0; qp < np; ++qp) {
    const Point& p = rule.points[qp];
    for (int al = 0; al < nmono; ++al) {
      const auto& a = basis.monomials[al];
      double v = 1.0;
      for (int j = 0; j < dim; ++j) v *= std::pow(p[j], a[j]);
      mono[al] = v;
    }
    for (int la = 0; la < n; ++la) {
      double v = 0.0;
      for (int al = 0; al < nmono; ++al) v += coeff[la * nmono + al] * mono[al];
      out.phi[qp * n + la] = v;
    }
    for (int m = 0; m < dim; ++m) {
      for (int al = 0; al < nmono; ++al) {
        const auto& a = basis.monomials[al];
        if (a[m] == 0) {
          dmono[al] = 0.0;
          continue;
        }
        double v = a[m];
        for (int j = 0; j < dim; ++j)
          v *= std::pow(p[j], j == m ? a[j] - 1 : a[j]);
        dmono[al] = v;
      }
      for (int la = 0; la < n; ++la) {
        double v = 0.0;
        for (int al = 0; al < nmono; ++al)
          v += coeff[la * nmono + al] * dmono[al];
        out.dphi[(qp * n + la) * dim + m] = v;
      }
    }
  }
  return out;
}

QuadTensor quadrature_K(int degree, int dim, const QuadratureRule& rule) {
  const auto tab = tabulate_basis(degree, dim, rule);
  const int n = tab.nbasis;
  QuadTensor t;
  t.degree = degree;
  t.dim = dim;
  t.nbasis = n;
  t.sufficient = rule.exactness >= 2 * (degree - 1);
  t.entries.assign(static_cast<std::size_t>(n) * n * dim * dim, 0.0);
  for (int qp = 0; qp < tab.npoints; ++qp) {
    const double w = rule.weights[qp];
    for (int la = 0; la < n; ++la)
      for (int mu = 0; mu < n; ++mu)
        for (int m = 0; m < dim; ++m)
          for (int mp = 0; mp < dim; ++mp)
            t.entries[((la * n + mu) * dim + m) * dim + mp] +=
                w * tab.grad(qp, la, m) * tab.grad(qp, mu, mp);
  }
  return t;
}

}  // namespace formc
