#pragma once

#include <utility>
#include <vector>

#include "formc/geometry.hpp"
#include "formc/optimizer.hpp"
#include "formc/tabulation.hpp"

namespace formc {

/// Nodal coefficients of a vector field, indexed u[j][lambda] (component,
/// then local node).
using CoefficientField = std::vector<std::vector<double>>;

/// gamma[m][lambda] = sum_j Gtilde_{mj} u_{j,lambda}.
using GammaMatrix = std::vector<std::vector<double>>;

/// Local advection matrix Keu, |L| x |L| row-major; acts blockwise as
/// I_d (x) Keu on vector fields.
using AdvectionLocalMatrix = std::vector<double>;

GammaMatrix gamma(const GeometryTensor& Gtilde, const CoefficientField& u);

/// Full contraction Keu[mu][rho] = sum_{m,lambda} gamma[m][lambda] *
/// N_{lambda,mu,rho,m}; d*|L| multiply-add pairs per entry.
AdvectionLocalMatrix naive_keu(const ReferenceTensor& N, const GammaMatrix& g);

/// Factorization of the degree-1 advection tensor, N_{lambda,mu,rho,m} =
/// D[mu][m] * F[lambda][rho]. D holds the constant gradients (unit rows for
/// the coordinate vertices, an all-(-1) row for the origin); F is the
/// edge-midpoint product matrix with d/(4(d+1)!) on the diagonal and
/// 1/(4(d+1)!) off it.
std::pair<std::vector<std::vector<Rational>>, std::vector<std::vector<Rational>>>
linear_DF_factors(int dim);

/// Static op ledger of the hand-scheduled degree-1 3D advection kernel.
/// "Folded" is the shipped default: the 2*gamma+gamma_m recurrence is folded
/// into gamma + gamma_m/2 with the factor 2 absorbed by the global scale.
struct AdvectionHandLedger {
  static constexpr int folded_core = 36;        // 29 adds, 3 mults, 4 negs
  static constexpr int folded_with_scale = 48;  // + 12 scale mults
  static constexpr int unfolded_core = 45;      // 41 adds/mults, 4 negs
  static constexpr int unfolded_with_scale = 61;
};

/// Hand schedule for the degree-1 3D advection matrix. The three vertex rows
/// are scaled shifted gamma rows; the origin row is the negated sum of the
/// vertex rows. Matches naive_keu on the tabulated degree-1 tensor.
AdvectionLocalMatrix optimized_keu_linear3d(const GammaMatrix& g,
                                            bool fold_scale = true);

/// One evaluation vector per output (mu,rho) in lexicographic order, length
/// d*|L| flattened (m-major, lambda-minor); input to the generic optimizer.
std::vector<BlockVector> advection_blocks(const ReferenceTensor& N);

/// Row-sum helper vectors V_m (ones over lambda for fixed m), offered to the
/// edit-distance passes as extra derivation candidates.
std::vector<BlockVector> advection_helpers(int dim, int nbasis);

}  // namespace formc
