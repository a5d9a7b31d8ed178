#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "formc/hand_kernels.hpp"
#include "formc/kernel_ir.hpp"
#include "formc/random_elements.hpp"

using namespace formc;

namespace {

KernelIR laplacian_ir(int degree, int dim, const ReferenceTensor& K) {
  return lower(run_passes(blocks_of(K)), "laplacian", degree, dim, K.nbasis);
}

std::vector<double> naive_contraction(const ReferenceTensor& K,
                                      const GeometryTensor& G) {
  const int n = K.nbasis, d = K.dim;
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int la = 0; la < n; ++la)
    for (int mu = 0; mu < n; ++mu) {
      double acc = 0.0;
      for (int m = 0; m < d; ++m)
        for (int mp = 0; mp < d; ++mp)
          acc += G.g[m][mp] * to_double(K.k(la, mu, m, mp));
      out[la * n + mu] = acc;
    }
  return out;
}

double max_upper_dev(const std::vector<double>& a, const std::vector<double>& b,
                     int n) {
  double worst = 0.0;
  for (int la = 0; la < n; ++la)
    for (int mu = la; mu < n; ++mu)
      worst = std::max(worst, std::abs(a[la * n + mu] - b[la * n + mu]));
  return worst;
}

}  // namespace

TEST_CASE("interpreted IR matches the naive contraction") {
  std::mt19937_64 rng(11);
  for (auto [degree, dim] : {std::pair{1, 2}, {2, 2}, {3, 2}, {1, 3}}) {
    const auto K = reference_stiffness_tensor(degree, dim);
    const KernelIR ir = laplacian_ir(degree, dim, K);
    CHECK(ir.upper_only);
    CHECK(ir.n_inputs == dim * dim);
    double scale = 0.0, worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto G =
          geometry_tensor(affine_map_from_vertices(random_simplex(dim, rng), dim));
      std::vector<double> in;
      for (int m = 0; m < dim; ++m)
        for (int mp = 0; mp < dim; ++mp) in.push_back(G.g[m][mp]);
      const auto ref = naive_contraction(K, G);
      for (double v : ref) scale = std::max(scale, std::abs(v));
      worst = std::max(worst, max_upper_dev(interpret(ir, in), ref, K.nbasis));
    }
    CHECK(worst / scale < 1e-12);
  }
}

TEST_CASE("exact interpretation is exactly the contraction") {
  const auto K = reference_stiffness_tensor(2, 2);
  const KernelIR ir = laplacian_ir(2, 2, K);
  // A rational symmetric G.
  const std::vector<Rational> G = {rat(7, 3), rat(-1, 2), rat(-1, 2), rat(5, 4)};
  const auto out = interpret_exact(ir, G);
  for (int la = 0; la < 6; ++la)
    for (int mu = la; mu < 6; ++mu) {
      Rational ref = 0;
      for (int m = 0; m < 2; ++m)
        for (int mp = 0; mp < 2; ++mp)
          ref += G[m * 2 + mp] * K.k(la, mu, m, mp);
      CHECK(out[la * 6 + mu] == ref);
    }
}

TEST_CASE("ir-json round trip") {
  const auto K = reference_stiffness_tensor(2, 2);
  const KernelIR ir = laplacian_ir(2, 2, K);
  const KernelSource js = emit_source(ir, Backend::IrJson);
  const KernelIR back = parse_ir_json(js.text);
  CHECK(back.form == ir.form);
  CHECK(back.instructions.size() == ir.instructions.size());
  CHECK(back.maps == ir.maps);
  const std::vector<double> in = {2.0, -1.0, -1.0, 1.0};
  CHECK(interpret(back, in) == interpret(ir, in));
  CHECK_THROWS_AS(parse_ir_json("{\"format\":\"other\"}"), ParameterError);
}

TEST_CASE("source emission") {
  const auto K = reference_stiffness_tensor(1, 2);
  const KernelIR ir = laplacian_ir(1, 2, K);
  const KernelSource native = emit_source(ir, Backend::Native);
  CHECK(native.symbol == "k_laplacian_p1_2d");
  CHECK(native.text.find("extern \"C\" void k_laplacian_p1_2d") != std::string::npos);
  const KernelSource curly = emit_source(ir, Backend::PortableCurly);
  CHECK(curly.text.find("extern") == std::string::npos);
  CHECK(curly.text.find("void k_laplacian_p1_2d") != std::string::npos);
}

TEST_CASE("hand quadratic kernel matches the exact tensor") {
  const auto K = reference_stiffness_tensor(2, 2);
  std::mt19937_64 rng(13);
  double scale = 0.0, worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto G =
        geometry_tensor(affine_map_from_vertices(random_simplex(2, rng), 2));
    const auto hand = builtin_quadratic_kernel(G);
    const auto ref = naive_contraction(K, G);
    for (double v : ref) scale = std::max(scale, std::abs(v));
    worst = std::max(worst, max_upper_dev(hand, ref, 6));
  }
  CHECK(worst / scale < 1e-12);
  // Static ledger: 18 core operations.
  CHECK(QuadraticHandLedger::core_ops == 18);
  CHECK(QuadraticHandLedger::negs == 2);
  CHECK(QuadraticHandLedger::mults == 9);
  CHECK(QuadraticHandLedger::adds == 7);
}
