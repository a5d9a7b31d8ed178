#pragma once

#include <random>

#include "formc/geometry.hpp"

namespace formc {

/// Deterministic seed used by verification commands unless overridden.
inline constexpr std::uint64_t kDefaultSeed = 424242;

/// Random nondegenerate physical simplex: the reference simplex with vertex
/// perturbations, retried until the Jacobian is comfortably invertible.
inline std::vector<Point> random_simplex(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-0.35, 0.35);
  for (;;) {
    std::vector<Point> verts(dim + 1, Point{0, 0, 0});
    for (int j = 0; j < dim; ++j) verts[j + 1][j] = 1.0;
    for (auto& v : verts)
      for (int j = 0; j < dim; ++j) v[j] += dist(rng);
    try {
      const AffineMap map = affine_map_from_vertices(verts, dim);
      if (std::abs(map.detJ) > 0.05) return verts;
    } catch (const DegenerateElementError&) {
    }
  }
}

}  // namespace formc
