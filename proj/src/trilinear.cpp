#include "formc/trilinear.hpp"

namespace formc {

GammaMatrix gamma(const GeometryTensor& Gtilde, const CoefficientField& u) {
  const int d = Gtilde.dim;
  if (static_cast<int>(u.size()) != d)
    throw ParameterError("coefficient field has wrong component count");
  const std::size_t n = u[0].size();
  for (const auto& row : u)
    if (row.size() != n) throw ParameterError("ragged coefficient field");
  GammaMatrix g(d, std::vector<double>(n, 0.0));
  for (int m = 0; m < d; ++m)
    for (int j = 0; j < d; ++j) {
      const double w = Gtilde.g[m][j];
      if (w == 0.0) continue;
      for (std::size_t la = 0; la < n; ++la) g[m][la] += w * u[j][la];
    }
  return g;
}

AdvectionLocalMatrix naive_keu(const ReferenceTensor& N, const GammaMatrix& g) {
  if (N.kind != TensorKind::Advection)
    throw ParameterError("naive_keu needs an advection tensor");
  const int n = N.nbasis, d = N.dim;
  if (static_cast<int>(g.size()) != d ||
      static_cast<int>(g[0].size()) != n)
    throw ParameterError("gamma has wrong dimensions");
  AdvectionLocalMatrix out(static_cast<std::size_t>(n) * n, 0.0);
  for (int mu = 0; mu < n; ++mu)
    for (int rho = 0; rho < n; ++rho) {
      double acc = 0.0;
      for (int m = 0; m < d; ++m)
        for (int la = 0; la < n; ++la)
          acc += g[m][la] * to_double(N.n(la, mu, rho, m));
      out[mu * n + rho] = acc;
    }
  return out;
}

std::pair<std::vector<std::vector<Rational>>, std::vector<std::vector<Rational>>>
linear_DF_factors(int dim) {
  simplex_dim_check(dim);
  const int n = dim + 1;
  // Library node ordering puts the origin first, then the coordinate
  // vertices in lexicographic order (z, y, x for 3D).
  std::vector<std::vector<Rational>> D(n, std::vector<Rational>(dim, 0));
  for (int m = 0; m < dim; ++m) D[0][m] = -1;
  for (int mu = 1; mu < n; ++mu) D[mu][dim - mu] = 1;
  const Rational off = Rational(Int(1), 4 * factorial(dim + 1));
  std::vector<std::vector<Rational>> F(n, std::vector<Rational>(n, off));
  for (int la = 0; la < n; ++la) F[la][la] = off * dim;
  return {D, F};
}

AdvectionLocalMatrix optimized_keu_linear3d(const GammaMatrix& g,
                                            bool fold_scale) {
  if (g.size() != 3 || g[0].size() != 4 || g[1].size() != 4 ||
      g[2].size() != 4)
    throw ParameterError("optimized kernel needs a 3x4 gamma");
  double gm[3], row[3][4];
  for (int m = 0; m < 3; ++m)
    gm[m] = ((g[m][0] + g[m][1]) + g[m][2]) + g[m][3];  // 3 adds each

  if (fold_scale) {
    // Folded variant: q = gamma + gamma_m/2, vertex rows scaled by 1/48.
    for (int m = 0; m < 3; ++m) {
      const double h = 0.5 * gm[m];  // 1 mult
      for (int la = 0; la < 4; ++la)
        row[m][la] = (1.0 / 48.0) * (g[m][la] + h);  // add + scale mult
    }
  } else {
    // Literal recurrence: gtilde = 2*gamma + gamma_m, scaled by 1/96.
    for (int m = 0; m < 3; ++m)
      for (int la = 0; la < 4; ++la)
        row[m][la] = (1.0 / 96.0) * (2.0 * g[m][la] + gm[m]);
  }

  AdvectionLocalMatrix out(16, 0.0);
  // Vertex node mu has constant gradient e_{3-mu}; the origin row is the
  // negated sum of the three vertex rows.
  for (int mu = 1; mu < 4; ++mu)
    for (int rho = 0; rho < 4; ++rho) out[mu * 4 + rho] = row[3 - mu][rho];
  for (int rho = 0; rho < 4; ++rho)
    out[rho] = -((out[4 + rho] + out[8 + rho]) + out[12 + rho]);
  return out;
}

std::vector<BlockVector> advection_blocks(const ReferenceTensor& N) {
  if (N.kind != TensorKind::Advection)
    throw ParameterError("advection_blocks needs an advection tensor");
  const int n = N.nbasis, d = N.dim;
  std::vector<BlockVector> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int mu = 0; mu < n; ++mu)
    for (int rho = 0; rho < n; ++rho) {
      BlockVector b;
      b.owner = {mu, rho};
      b.values.resize(static_cast<std::size_t>(d) * n);
      for (int m = 0; m < d; ++m)
        for (int la = 0; la < n; ++la)
          b.values[m * n + la] = N.n(la, mu, rho, m);
      out.push_back(std::move(b));
    }
  return out;
}

std::vector<BlockVector> advection_helpers(int dim, int nbasis) {
  std::vector<BlockVector> out;
  for (int m = 0; m < dim; ++m) {
    BlockVector b;
    b.owner = {-1, m};
    b.values.assign(static_cast<std::size_t>(dim) * nbasis, Rational(0));
    for (int la = 0; la < nbasis; ++la) b.values[m * nbasis + la] = 1;
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace formc
