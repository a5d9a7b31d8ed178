// Acceptance gate: one pass/fail line per criterion, exit code is the number
// of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "formc/assembly.hpp"
#include "formc/compiled_kernels.hpp"
#include "formc/hand_kernels.hpp"
#include "formc/kernel_ir.hpp"
#include "formc/quadrature.hpp"
#include "formc/random_elements.hpp"
#include "formc/trilinear.hpp"

using namespace formc;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int criterion, bool ok, const std::string& note) {
  std::printf("criterion %d: %s — %s\n", criterion, ok ? "PASS" : "FAIL",
              note.c_str());
  if (!ok) ++failures;
}

// Published linear tensor for the Laplacian in 3D, as a 12x12 matrix of
// 3x3 blocks; row = (published node, m), column = (published node, m').
// The published node order is (e1, e2, e3, origin); ours is
// (origin, e3, e2, e1), i.e. the permutation [3, 2, 1, 0].
const int kTableK13[12][12] = {
    {1, 0, 0, 0, 1, 0, 0, 0, 1, -1, -1, -1},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, 0, 0, 0, 1, 0, 0, 0, 1, -1, -1, -1},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, 0, 0, 0, 1, 0, 0, 0, 1, -1, -1, -1},
    {-1, 0, 0, 0, -1, 0, 0, 0, -1, 1, 1, 1},
    {-1, 0, 0, 0, -1, 0, 0, 0, -1, 1, 1, 1},
    {-1, 0, 0, 0, -1, 0, 0, 0, -1, 1, 1, 1},
};

// Published linear advection tensor in 3D, as a 12x16 matrix; row index
// 3*lambda + m, column index 4*mu + rho in the published node order.
// The published version prints the origin-node derivative row with positive
// signs; the tabulated gradients carry (-1,-1,-1) there, so the comparison
// negates the mu = origin rows (see the fixture use below).
const int kTableN13[12][16] = {
    {3, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 3, 1, 1, 1},
    {0, 0, 0, 0, 3, 1, 1, 1, 0, 0, 0, 0, 3, 1, 1, 1},
    {0, 0, 0, 0, 0, 0, 0, 0, 3, 1, 1, 1, 3, 1, 1, 1},
    {1, 3, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 3, 1, 1},
    {0, 0, 0, 0, 1, 3, 1, 1, 0, 0, 0, 0, 1, 3, 1, 1},
    {0, 0, 0, 0, 0, 0, 0, 0, 1, 3, 1, 1, 1, 3, 1, 1},
    {1, 1, 3, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 3, 1},
    {0, 0, 0, 0, 1, 1, 3, 1, 0, 0, 0, 0, 1, 1, 3, 1},
    {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 3, 1, 1, 1, 3, 1},
    {1, 1, 1, 3, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 3},
    {0, 0, 0, 0, 1, 1, 1, 3, 0, 0, 0, 0, 1, 1, 1, 3},
    {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 3, 1, 1, 1, 3},
};

void criterion1() {
  const auto t0 = Clock::now();
  const int perm[4] = {3, 2, 1, 0};  // published node -> our node

  // Laplacian golden. The uniform scale relating the printed table to the
  // exact tensor is determined from the oracle itself (the first nonzero
  // entry) and then asserted entrywise with zero tolerance.
  const auto K = reference_stiffness_tensor(1, 3);
  Rational scaleK = 0;
  bool okK = true;
  for (int lp = 0; lp < 4 && okK; ++lp)
    for (int m = 0; m < 3 && okK; ++m)
      for (int mp2 = 0; mp2 < 4 && okK; ++mp2)
        for (int mm = 0; mm < 3 && okK; ++mm) {
          const Rational exact = K.k(perm[lp], perm[mp2], m, mm);
          const int printed = kTableK13[3 * lp + m][3 * mp2 + mm];
          if (printed == 0) {
            okK = exact == 0;
          } else if (exact == 0) {
            okK = false;
          } else {
            const Rational s = Rational(printed) / exact;
            if (scaleK == 0) scaleK = s;
            okK = s == scaleK;
          }
        }

  // Advection golden: 96*N equals the printed table entrywise, with the
  // mu = origin rows negated (documented sign convention of the fixture).
  const auto N = reference_advection_tensor(1, 3);
  bool okN = true;
  for (int mup = 0; mup < 4 && okN; ++mup)
    for (int m = 0; m < 3 && okN; ++m)
      for (int lp = 0; lp < 4 && okN; ++lp)
        for (int rp = 0; rp < 4 && okN; ++rp) {
          const int sign = mup == 3 ? -1 : 1;
          const Rational exact = N.n(perm[lp], perm[mup], perm[rp], m);
          okN = 96 * exact == sign * kTableN13[3 * lp + m][4 * mup + rp];
        }

  const double dt = seconds_since(t0);
  std::ostringstream note;
  note << "golden K(1,3) " << (okK ? "ok" : "mismatch") << " (uniform scale "
       << scaleK << "), golden 96*N(1,3) " << (okN ? "ok" : "mismatch")
       << ", perm [3,2,1,0], " << dt << " s";
  report(1, okK && okN && dt < 1.0, note.str());
}

void criterion2() {
  const auto K = reference_stiffness_tensor(2, 2);
  const int perm[6] = {2, 1, 0, 4, 5, 3};  // published node -> our node
  // Published claim: block (3,1) and block (4,1) differ by a factor -4. The
  // oracle fixes the direction: block(4,1) = -4 * block(3,1).
  bool rel = true;
  for (int m = 0; m < 2; ++m)
    for (int mp = 0; mp < 2; ++mp)
      rel = rel &&
            K.k(perm[3], perm[0], m, mp) == -4 * K.k(perm[2], perm[0], m, mp);

  const DependencyGraph g = run_passes(blocks_of(K));
  const bool zeros = g.histogram.zero == 3;
  std::ostringstream note;
  note << "block(4,1) = -4*block(3,1) " << (rel ? "exact" : "violated")
       << "; zero upper blocks = " << g.histogram.zero << " (want 3)";
  report(2, rel && zeros, note.str());
}

void criterion3() {
  const auto t0 = Clock::now();
  const long published[7] = {0, 7, 15, 45, 176, 443, 867};
  bool ok = true;
  std::ostringstream note;
  note << "maps";
  for (int degree = 1; degree <= 6; ++degree) {
    const auto K = reference_stiffness_tensor(degree, 2);
    const CostReport r = map_count(run_passes(blocks_of(K)), degree, 2);
    const double limit = degree <= 3 ? 1.25 : 1.5;
    const bool good = r.ferari_maps < r.base_maps &&
                      r.ferari_maps <= published[degree] * limit;
    ok = ok && good;
    note << " p" << degree << ":" << r.ferari_maps << "/" << r.base_maps
         << (good ? "" : "(!)");
  }
  const double dt = seconds_since(t0);
  note << ", " << dt << " s";
  report(3, ok && dt < 60.0, note.str());
}

struct Pair {
  std::string form;
  int degree, dim;
};

const std::vector<Pair> kInScope = {
    {"laplacian", 1, 2}, {"laplacian", 2, 2}, {"laplacian", 3, 2},
    {"laplacian", 4, 2}, {"laplacian", 5, 2}, {"laplacian", 6, 2},
    {"laplacian", 1, 3}, {"advection", 1, 2}, {"advection", 1, 3},
};

void criterion4() {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst_rel = 0.0;
  std::string missing;
  for (const auto& p : kInScope) {
    KernelIR ir;
    ReferenceTensor t;
    if (p.form == "laplacian") {
      t = reference_stiffness_tensor(p.degree, p.dim);
      ir = lower(run_passes(blocks_of(t)), p.form, p.degree, p.dim, t.nbasis);
    } else {
      t = reference_advection_tensor(p.degree, p.dim);
      PassOptions opt;
      opt.enable_transpose = false;
      opt.scaled_edit = true;
      opt.default_charge = DefaultCharge::NonzeroCount;
      opt.helpers = advection_helpers(p.dim, t.nbasis);
      ir = lower(run_passes(advection_blocks(t), opt), p.form, p.degree, p.dim,
                 t.nbasis);
    }
    const CompiledKernelFn fn = compiled_kernel(p.form, p.degree, p.dim);
    if (!fn) {
      ok = false;
      missing += " " + p.form + std::to_string(p.degree) + "d" +
                 std::to_string(p.dim);
      continue;
    }
    const int n = t.nbasis, d = p.dim;
    std::mt19937_64 rng(kDefaultSeed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const AffineMap map =
          affine_map_from_vertices(random_simplex(d, rng), d);
      std::vector<double> in, ref(static_cast<std::size_t>(n) * n, 0.0);
      if (p.form == "laplacian") {
        const GeometryTensor G = geometry_tensor(map);
        for (int m = 0; m < d; ++m)
          for (int mp = 0; mp < d; ++mp) in.push_back(G.g[m][mp]);
        for (int la = 0; la < n; ++la)
          for (int mu = 0; mu < n; ++mu) {
            double acc = 0.0;
            for (int m = 0; m < d; ++m)
              for (int mp = 0; mp < d; ++mp)
                acc += G.g[m][mp] * to_double(t.k(la, mu, m, mp));
            ref[la * n + mu] = acc;
          }
      } else {
        const GeometryTensor Gt = tilde_geometry_tensor(map);
        CoefficientField u(d, std::vector<double>(n));
        for (auto& row : u)
          for (auto& v : row) v = coeff(rng);
        const GammaMatrix gm = gamma(Gt, u);
        for (int m = 0; m < d; ++m)
          for (int la = 0; la < n; ++la) in.push_back(gm[m][la]);
        ref = naive_keu(t, gm);
      }
      auto interp = interpret(ir, in);
      std::vector<double> compiled(interp.size(), 0.0);
      fn(in.data(), compiled.data());
      if (ir.upper_only)
        for (int la = 0; la < n; ++la)
          for (int mu = 0; mu < la; ++mu) {
            interp[la * n + mu] = interp[mu * n + la];
            compiled[la * n + mu] = compiled[mu * n + la];
          }
      double scale = 0.0;
      for (double v : ref) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < ref.size(); ++i) {
        const double dev = std::max(std::abs(interp[i] - ref[i]),
                                    std::abs(compiled[i] - ref[i]));
        worst_rel = std::max(worst_rel, dev / scale);
      }
    }
  }
  const double dt = seconds_since(t0);
  ok = ok && worst_rel <= 1e-12;
  std::ostringstream note;
  note << "9 kernel pairs x 1000 elements, max relative deviation "
       << worst_rel;
  if (!missing.empty()) note << ", missing compiled:" << missing;
  note << ", " << dt << " s";
  report(4, ok && dt < 30.0, note.str());
}

void criterion5() {
  std::mt19937_64 rng(kDefaultSeed);
  // Quadratic Laplacian hand schedule.
  const auto K = reference_stiffness_tensor(2, 2);
  double worst_q = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const GeometryTensor G =
        geometry_tensor(affine_map_from_vertices(random_simplex(2, rng), 2));
    const auto hand = builtin_quadratic_kernel(G);
    double scale = 0.0, dev = 0.0;
    for (int la = 0; la < 6; ++la)
      for (int mu = la; mu < 6; ++mu) {
        double acc = 0.0;
        for (int m = 0; m < 2; ++m)
          for (int mp = 0; mp < 2; ++mp)
            acc += G.g[m][mp] * to_double(K.k(la, mu, m, mp));
        scale = std::max(scale, std::abs(acc));
        dev = std::max(dev, std::abs(hand[la * 6 + mu] - acc));
      }
    worst_q = std::max(worst_q, dev / scale);
  }
  const bool ledger_q = QuadraticHandLedger::core_ops == 18;

  // Degree-1 3D advection hand schedule.
  const auto N = reference_advection_tensor(1, 3);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  double worst_a = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    GammaMatrix g(3, std::vector<double>(4));
    for (auto& row : g)
      for (auto& v : row) v = d(rng);
    const auto ref = naive_keu(N, g);
    const auto hand = optimized_keu_linear3d(g);
    double scale = 0.0, dev = 0.0;
    for (int i = 0; i < 16; ++i) {
      scale = std::max(scale, std::abs(ref[i]));
      dev = std::max(dev, std::abs(hand[i] - ref[i]));
    }
    worst_a = std::max(worst_a, dev / scale);
  }
  const bool ledger_a = AdvectionHandLedger::folded_core <= 39;

  const bool ok =
      worst_q <= 1e-12 && worst_a <= 1e-12 && ledger_q && ledger_a;
  std::ostringstream note;
  note << "quadratic dev " << worst_q << " (ledger "
       << QuadraticHandLedger::core_ops << " ops), advection dev " << worst_a
       << " (ledger " << AdvectionHandLedger::folded_core << " <= 39 ops)";
  report(5, ok, note.str());
}

void criterion6() {
  bool ok = true;
  double worst = 0.0, worst_sym = 0.0, worst_row = 0.0;
  for (auto [degree, dim] : {std::pair{1, 2}, {2, 2}, {1, 3}}) {
    const CompiledKernelFn fn = compiled_kernel("laplacian", degree, dim);
    if (!fn) {
      ok = false;
      continue;
    }
    for (int n : {1, 4, 16}) {
      const StructuredMesh mesh =
          dim == 2 ? unit_square_mesh(n) : unit_cube_mesh(n);
      const LocalToGlobal l2g = local_to_global(mesh, degree);
      const std::vector<ElementKernel> kernels = {
          named_kernel("quadrature", degree, dim),
          named_kernel("naive", degree, dim),
          named_kernel("zeroskip", degree, dim),
          wrap_upper_kernel(fn, basis_size(degree, dim), dim),
      };
      SparseMatrix ref = assemble(mesh, l2g, kernels[0]);
      const double scale = ref.frobenius_norm();
      worst_sym = std::max(worst_sym, ref.max_asymmetry() / scale);
      worst_row = std::max(worst_row, ref.max_abs_row_sum_violation() / scale);
      for (std::size_t k = 1; k < kernels.size(); ++k) {
        const SparseMatrix A = assemble(mesh, l2g, kernels[k]);
        for (std::size_t i = 0; i < ref.values().size(); ++i)
          worst = std::max(
              worst, std::abs(A.values()[i] - ref.values()[i]) / scale);
      }
    }
  }
  ok = ok && worst <= 1e-12 && worst_sym <= 1e-12 && worst_row <= 1e-10;
  std::ostringstream note;
  note << "max kernel disagreement " << worst << ", asymmetry " << worst_sym
       << ", row-sum violation " << worst_row
       << " (3 configs x n in {1,4,16} x 4 kernels)";
  report(6, ok, note.str());
}

void criterion7() {
  const auto t0 = Clock::now();
  const double e8 = poisson_l2_error(8);
  const double e16 = poisson_l2_error(16);
  const double e32 = poisson_l2_error(32);
  const double r1 = e8 / e16, r2 = e16 / e32;
  const double dt = seconds_since(t0);
  const bool ok = r1 >= 3.5 && r2 >= 3.5 && dt < 30.0;
  std::ostringstream note;
  note << "L2 errors " << e8 << " / " << e16 << " / " << e32 << ", ratios "
       << r1 << ", " << r2 << " (want >= 3.5), " << dt << " s";
  report(7, ok, note.str());
}

void criterion8() {
  const int degree = 2, dim = 2;
  const CompiledKernelFn fn = compiled_kernel("laplacian", degree, dim);
  const StructuredMesh mesh = unit_square_mesh(128);
  const auto rows = bench(
      mesh, degree,
      {{"quadrature", named_kernel("quadrature", degree, dim)},
       {"generated", wrap_upper_kernel(fn, basis_size(degree, dim), dim)}});
  double quad_local = 0.0, gen_local = 0.0, gen_insert = 0.0;
  for (const auto& r : rows) {
    if (r.kernel == "quadrature") quad_local = r.local_time;
    if (r.kernel == "generated") {
      gen_local = r.local_time;
      gen_insert = r.insert_time;
    }
  }
  const bool ok = gen_local < quad_local && gen_insert > gen_local;
  std::ostringstream note;
  note << "n=128 p2: local generated " << gen_local << " vs quadrature "
       << quad_local << ", generated insert " << gen_insert
       << " (s per 1e6 elements)";
  report(8, ok, note.str());
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  return failures;
}
