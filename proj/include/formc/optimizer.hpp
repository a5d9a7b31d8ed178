#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "formc/tabulation.hpp"

namespace formc {

/// One d x d slice of a reference tensor (or one (mu,rho) evaluation vector
/// of an advection tensor) flattened to an exact rational vector.
struct BlockVector {
  std::pair<int, int> owner{-1, -1};
  std::vector<Rational> values;
};

enum class DepClass {
  Zero,
  Equal,
  Transpose,
  OneEntry,
  Colinear,
  EditDist1,
  EditDist2,
  LinComb,
  Default,
};

struct EditTerm {
  int pos = -1;
  Rational delta;
};

struct OpCost {
  int negs = 0;
  int mults = 0;
  int adds = 0;
  int total() const { return negs + mults + adds; }
};

struct DependencyNode {
  std::pair<int, int> owner{-1, -1};
  std::vector<Rational> values;
  DepClass cls = DepClass::Default;
  bool helper = false;  // auxiliary vector, not an output
  bool used = true;

  int ref1 = -1;
  int ref2 = -1;
  Rational c1;                  // Colinear alpha / LinComb c1 / Ed base scale
  Rational c2;                  // LinComb c2
  int one_entry_pos = -1;
  Rational one_entry_coeff;
  std::vector<EditTerm> edits;  // Ed1/Ed2 corrections

  int maps = 0;
  OpCost cost;
};

struct ClassHistogram {
  int zero = 0, eq = 0, eq_t = 0, one_entry = 0, col = 0, ed1 = 0, ed2 = 0,
      lc = 0, dflt = 0;
  int sum() const {
    return zero + eq + eq_t + one_entry + col + ed1 + ed2 + lc + dflt;
  }
};

struct DependencyGraph {
  std::vector<DependencyNode> nodes;
  std::vector<int> order;  // topological, used nodes only
  int vec_len = 0;
  int maps_per_entry = 0;  // naive cost of one output (d^2, or d*|L|)
  long total_maps = 0;
  ClassHistogram histogram;
};

enum class DefaultCharge { VectorLength, NonzeroCount };

struct PassOptions {
  bool enable_transpose = true;   // requires a symmetric geometry tensor
  bool scaled_edit = false;       // allow an overall scale in Ed matching
  DefaultCharge default_charge = DefaultCharge::VectorLength;
  std::vector<BlockVector> helpers;  // extra Ed candidates (e.g. row sums)
};

struct CostReport {
  int degree = 0, dim = 0;
  int entries = 0;
  long base_maps = 0;
  long ferari_maps = 0;
  ClassHistogram histogram;
};

/// Upper-triangle d x d blocks of a Laplacian tensor in (lambda, mu)
/// lexicographic order, each flattened row-major to length d^2.
std::vector<BlockVector> blocks_of(const ReferenceTensor& tensor);

/// Scales v by the inverse magnitude of its first nonzero entry; two vectors
/// are colinear iff their normalized forms are identical.
BlockVector normalize_direction(const BlockVector& v);

/// Exact coefficients with v = c1*a + c2*b, if they exist.
std::optional<std::pair<Rational, Rational>> check_lincomb(
    const BlockVector& v, const BlockVector& a, const BlockVector& b);

/// Runs the classification passes in the fixed order
/// Zero -> Equal -> Transpose -> OneEntry -> Colinear -> Ed1* -> Ed2* -> LC
/// -> Default and returns the ordered, costed graph.
DependencyGraph run_passes(const std::vector<BlockVector>& blocks,
                           const PassOptions& options = {});

CostReport map_count(const DependencyGraph& graph, int degree, int dim);

}  // namespace formc
