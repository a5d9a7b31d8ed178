#include "formc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace formc {

namespace {

bool is_zero(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](const Rational& x) { return x == 0; });
}

int nonzero_count(const std::vector<Rational>& v) {
  int n = 0;
  for (const auto& x : v)
    if (x != 0) ++n;
  return n;
}

std::vector<Rational> transpose_of(const std::vector<Rational>& v, int d) {
  std::vector<Rational> out(v.size());
  for (int m = 0; m < d; ++m)
    for (int mp = 0; mp < d; ++mp) out[m * d + mp] = v[mp * d + m];
  return out;
}

// Primitive integer direction: values = scale * prim, prim has coprime
// entries and a positive first nonzero entry. Colinearity becomes equality
// of the primitive vectors.
struct Primitive {
  std::vector<long long> prim;
  Rational scale = 1;
};

Primitive primitive_of(const std::vector<Rational>& values) {
  Primitive p;
  p.prim.assign(values.size(), 0);
  if (is_zero(values)) return p;
  Int lcm = 1;
  for (const auto& v : values)
    if (v != 0) lcm = boost::multiprecision::lcm(lcm, denominator(v));
  std::vector<Int> ints(values.size());
  Int g = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    ints[k] = numerator(values[k]) * (lcm / denominator(values[k]));
    g = boost::multiprecision::gcd(g, abs(ints[k]));
  }
  int sign = 0;
  for (const auto& i : ints)
    if (i != 0) { sign = i > 0 ? 1 : -1; break; }
  for (std::size_t k = 0; k < values.size(); ++k) {
    Int q = sign * ints[k] / g;
    p.prim[k] = q.convert_to<long long>();
  }
  p.scale = Rational(sign * g, lcm);
  return p;
}

struct ScaleCost {
  OpCost cost;
  int maps = 0;
};

ScaleCost scale_cost(const Rational& c) {
  ScaleCost s;
  if (c == 1) return s;
  if (c == -1) { s.cost.negs = 1; return s; }
  s.cost.mults = 1;
  s.maps = 1;
  return s;
}

ScaleCost axpy_cost(const Rational& c) {
  ScaleCost s;
  if (c == 0) return s;
  s.cost.adds = 1;
  if (c == -1) s.cost.negs = 1;
  else if (c != 1) { s.cost.mults = 1; s.maps = 1; }
  return s;
}

void assign_cost(DependencyNode& node, DefaultCharge charge, int vec_len) {
  node.cost = {};
  node.maps = 0;
  auto account = [&](const ScaleCost& s) {
    node.cost.negs += s.cost.negs;
    node.cost.mults += s.cost.mults;
    node.cost.adds += s.cost.adds;
    node.maps += s.maps;
  };
  switch (node.cls) {
    case DepClass::Zero:
    case DepClass::Equal:
    case DepClass::Transpose:
      break;
    case DepClass::OneEntry:
      account(scale_cost(node.one_entry_coeff));
      break;
    case DepClass::Colinear:
      account(scale_cost(node.c1));
      break;
    case DepClass::EditDist1:
    case DepClass::EditDist2:
      account(scale_cost(node.c1));
      for (const auto& e : node.edits) account(axpy_cost(e.delta));
      break;
    case DepClass::LinComb:
      account(scale_cost(node.c1));
      account(axpy_cost(node.c2));
      break;
    case DepClass::Default: {
      bool first = true;
      int nnz = 0;
      for (const auto& v : node.values) {
        if (v == 0) continue;
        ++nnz;
        account(first ? scale_cost(v) : axpy_cost(v));
        first = false;
      }
      node.maps = charge == DefaultCharge::VectorLength ? vec_len : nnz;
      break;
    }
  }
}

}  // namespace

std::vector<BlockVector> blocks_of(const ReferenceTensor& tensor) {
  if (tensor.kind != TensorKind::Laplacian)
    throw ParameterError("blocks_of expects a laplacian-kind tensor");
  const int n = tensor.nbasis, d = tensor.dim;
  std::vector<BlockVector> blocks;
  for (int lambda = 0; lambda < n; ++lambda)
    for (int mu = lambda; mu < n; ++mu) {
      BlockVector b;
      b.owner = {lambda, mu};
      b.values.reserve(d * d);
      for (int m = 0; m < d; ++m)
        for (int mp = 0; mp < d; ++mp)
          b.values.push_back(tensor.k(lambda, mu, m, mp));
      blocks.push_back(std::move(b));
    }
  return blocks;
}

BlockVector normalize_direction(const BlockVector& v) {
  if (is_zero(v.values)) throw ParameterError("cannot normalize zero vector");
  Rational first;
  for (const auto& x : v.values)
    if (x != 0) { first = abs(x); break; }
  BlockVector out;
  out.owner = v.owner;
  out.values.reserve(v.values.size());
  Rational sign = 1;
  for (const auto& x : v.values)
    if (x != 0) { sign = x > 0 ? 1 : -1; break; }
  for (const auto& x : v.values) out.values.push_back(sign * x / first);
  return out;
}

std::optional<std::pair<Rational, Rational>> check_lincomb(
    const BlockVector& v, const BlockVector& a, const BlockVector& b) {
  const std::size_t len = v.values.size();
  // Least-squares normal equations in exact arithmetic, then an exact
  // consistency check of every coordinate.
  Rational aa = 0, ab = 0, bb = 0, av = 0, bv = 0;
  for (std::size_t k = 0; k < len; ++k) {
    aa += a.values[k] * a.values[k];
    ab += a.values[k] * b.values[k];
    bb += b.values[k] * b.values[k];
    av += a.values[k] * v.values[k];
    bv += b.values[k] * v.values[k];
  }
  const Rational det = aa * bb - ab * ab;
  if (det == 0) return std::nullopt;  // a, b not independent
  const Rational c1 = (av * bb - bv * ab) / det;
  const Rational c2 = (aa * bv - ab * av) / det;
  for (std::size_t k = 0; k < len; ++k)
    if (v.values[k] != c1 * a.values[k] + c2 * b.values[k])
      return std::nullopt;
  return std::make_pair(c1, c2);
}

DependencyGraph run_passes(const std::vector<BlockVector>& blocks,
                           const PassOptions& options) {
  if (blocks.empty()) throw ParameterError("no blocks to classify");
  const int vec_len = static_cast<int>(blocks[0].values.size());

  DependencyGraph graph;
  graph.vec_len = vec_len;
  for (const auto& b : blocks) {
    DependencyNode node;
    node.owner = b.owner;
    node.values = b.values;
    graph.nodes.push_back(std::move(node));
  }
  const int n_outputs = static_cast<int>(graph.nodes.size());
  for (const auto& h : options.helpers) {
    DependencyNode node;
    node.owner = h.owner;
    node.values = h.values;
    node.helper = true;
    node.cls = DepClass::Default;
    graph.nodes.push_back(std::move(node));
  }
  auto& nodes = graph.nodes;
  const int n_total = static_cast<int>(nodes.size());

  std::vector<Primitive> prim(n_total);
  for (int i = 0; i < n_total; ++i) prim[i] = primitive_of(nodes[i].values);

  std::vector<bool> marked(n_total, false);
  for (int i = n_outputs; i < n_total; ++i) marked[i] = true;  // helpers

  auto reaches = [&](int from, int target) {
    std::vector<int> stack{from};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      if (cur == target) return true;
      if (nodes[cur].ref1 >= 0) stack.push_back(nodes[cur].ref1);
      if (nodes[cur].ref2 >= 0) stack.push_back(nodes[cur].ref2);
    }
    return false;
  };

  // Zero
  for (int i = 0; i < n_outputs; ++i)
    if (is_zero(nodes[i].values)) {
      nodes[i].cls = DepClass::Zero;
      marked[i] = true;
      ++graph.histogram.zero;
    }

  // Equal: exact-key associative search, first occurrence is representative.
  {
    std::map<std::vector<Rational>, int> seen;
    for (int i = 0; i < n_outputs; ++i) {
      if (marked[i]) continue;
      auto [it, inserted] = seen.try_emplace(nodes[i].values, i);
      if (!inserted) {
        nodes[i].cls = DepClass::Equal;
        nodes[i].ref1 = it->second;
        marked[i] = true;
        ++graph.histogram.eq;
      }
    }
  }

  // Transpose: group by symmetric part, then confirm exact transposition.
  if (options.enable_transpose) {
    const int d = static_cast<int>(std::lround(std::sqrt(double(vec_len))));
    if (d * d == vec_len) {
      std::map<std::vector<Rational>, std::vector<int>> by_sym;
      for (int i = 0; i < n_outputs; ++i) {
        if (marked[i]) continue;
        std::vector<Rational> sym(vec_len);
        const auto t = transpose_of(nodes[i].values, d);
        for (int k = 0; k < vec_len; ++k)
          sym[k] = (nodes[i].values[k] + t[k]) / 2;
        auto& bucket = by_sym[sym];
        bool found = false;
        for (int j : bucket)
          if (transpose_of(nodes[j].values, d) == nodes[i].values) {
            nodes[i].cls = DepClass::Transpose;
            nodes[i].ref1 = j;
            marked[i] = true;
            ++graph.histogram.eq_t;
            found = true;
            break;
          }
        if (!found) bucket.push_back(i);
      }
    }
  }

  // OneEntry
  for (int i = 0; i < n_outputs; ++i) {
    if (marked[i]) continue;
    if (nonzero_count(nodes[i].values) == 1) {
      nodes[i].cls = DepClass::OneEntry;
      for (int k = 0; k < vec_len; ++k)
        if (nodes[i].values[k] != 0) {
          nodes[i].one_entry_pos = k;
          nodes[i].one_entry_coeff = nodes[i].values[k];
        }
      marked[i] = true;
      ++graph.histogram.one_entry;
    }
  }

  // Colinear: identical primitive directions.
  {
    std::map<std::vector<long long>, int> seen;
    for (int i = 0; i < n_outputs; ++i) {
      if (marked[i]) continue;
      auto [it, inserted] = seen.try_emplace(prim[i].prim, i);
      if (!inserted) {
        const int rep = it->second;
        nodes[i].cls = DepClass::Colinear;
        nodes[i].ref1 = rep;
        nodes[i].c1 = prim[i].scale / prim[rep].scale;
        marked[i] = true;
        ++graph.histogram.col;
      }
    }
  }

  // Ed matching. Unscaled mode compares v against +/- u; scaled mode allows
  // any nonzero rational base scale (used for advection evaluation vectors).
  auto try_edit = [&](int i, int j, int max_diff, Rational& base,
                      std::vector<EditTerm>& edits) -> bool {
    const auto& v = nodes[i].values;
    const auto& u = nodes[j].values;
    if (is_zero(u)) return false;
    if (!options.scaled_edit) {
      for (const Rational s : {Rational(1), Rational(-1)}) {
        std::vector<EditTerm> diffs;
        for (int k = 0; k < vec_len; ++k)
          if (v[k] != s * u[k]) {
            if (static_cast<int>(diffs.size()) == max_diff) { diffs.clear(); diffs.push_back({-2, 0}); break; }
            diffs.push_back({k, v[k] - s * u[k]});
          }
        if (!diffs.empty() && diffs[0].pos == -2) continue;
        if (diffs.empty()) continue;  // colinear; handled earlier
        base = s;
        edits = std::move(diffs);
        return true;
      }
      return false;
    }
    // Scaled: all positions outside a difference set of size <= max_diff
    // must share one ratio v[k]/u[k].
    std::vector<Rational> ratios;
    for (int k = 0; k < vec_len; ++k)
      if (u[k] != 0) {
        Rational r = v[k] / u[k];
        if (std::find(ratios.begin(), ratios.end(), r) == ratios.end())
          ratios.push_back(r);
      }
    for (const Rational& s : ratios) {
      if (s == 0) continue;
      std::vector<EditTerm> diffs;
      bool ok = true;
      for (int k = 0; k < vec_len; ++k)
        if (v[k] != s * u[k]) {
          if (static_cast<int>(diffs.size()) == max_diff) { ok = false; break; }
          diffs.push_back({k, v[k] - s * u[k]});
        }
      if (!ok || diffs.empty()) continue;
      base = s;
      edits = std::move(diffs);
      return true;
    }
    return false;
  };

  auto edit_pass = [&](int max_diff, DepClass cls, int& counter) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (int i = 0; i < n_outputs; ++i) {
        if (marked[i]) continue;
        for (int j = 0; j < n_total; ++j) {
          if (j == i || !marked[j]) continue;
          if (nodes[j].cls == DepClass::Zero) continue;
          Rational base;
          std::vector<EditTerm> edits;
          if (!try_edit(i, j, max_diff, base, edits)) continue;
          if (reaches(j, i)) continue;
          nodes[i].cls = cls;
          nodes[i].ref1 = j;
          nodes[i].c1 = base;
          nodes[i].edits = std::move(edits);
          marked[i] = true;
          ++counter;
          progress = true;
          break;
        }
      }
    }
  };
  edit_pass(1, DepClass::EditDist1, graph.histogram.ed1);
  edit_pass(2, DepClass::EditDist2, graph.histogram.ed2);

  // LinComb over primitive integer vectors with exact verification.
  {
    using I128 = __int128;
    auto support_ok = [&](int i, int a, int b) {
      for (int k = 0; k < vec_len; ++k)
        if (prim[i].prim[k] != 0 && prim[a].prim[k] == 0 &&
            prim[b].prim[k] == 0)
          return false;
      return true;
    };
    for (int i = 0; i < n_outputs; ++i) {
      if (marked[i]) continue;
      bool done = false;
      for (int a = 0; a < n_total && !done; ++a) {
        if (a == i || is_zero(nodes[a].values)) continue;
        // Single-term fallback: colinear with an already-marked node.
        if (prim[a].prim == prim[i].prim && !reaches(a, i)) {
          nodes[i].cls = DepClass::LinComb;
          nodes[i].ref1 = a;
          nodes[i].c1 = prim[i].scale / prim[a].scale;
          nodes[i].c2 = 0;
          nodes[i].ref2 = -1;
          marked[i] = true;
          ++graph.histogram.lc;
          done = true;
          break;
        }
        for (int b = a + 1; b < n_total && !done; ++b) {
          if (b == i || is_zero(nodes[b].values)) continue;
          if (!support_ok(i, a, b)) continue;
          const auto& A = prim[a].prim;
          const auto& B = prim[b].prim;
          const auto& V = prim[i].prim;
          int r1 = -1, r2 = -1;
          for (int k = 0; k < vec_len; ++k)
            if (A[k] != 0 || B[k] != 0) { r1 = k; break; }
          if (r1 < 0) continue;
          I128 det = 0;
          for (int k = r1 + 1; k < vec_len; ++k) {
            det = I128(A[r1]) * B[k] - I128(A[k]) * B[r1];
            if (det != 0) { r2 = k; break; }
          }
          if (r2 < 0) continue;  // colinear pair
          const I128 x1 = I128(V[r1]) * B[r2] - I128(V[r2]) * B[r1];
          const I128 x2 = I128(A[r1]) * V[r2] - I128(A[r2]) * V[r1];
          bool ok = true;
          for (int k = 0; k < vec_len; ++k)
            if (I128(V[k]) * det != x1 * A[k] + x2 * B[k]) { ok = false; break; }
          if (!ok) continue;
          if (reaches(a, i) || reaches(b, i)) continue;
          const Rational dq(Int(static_cast<long long>(det)));
          Rational c1 = Rational(Int(static_cast<long long>(x1))) / dq *
                        prim[i].scale / prim[a].scale;
          Rational c2 = Rational(Int(static_cast<long long>(x2))) / dq *
                        prim[i].scale / prim[b].scale;
          nodes[i].cls = DepClass::LinComb;
          nodes[i].ref1 = a;
          nodes[i].ref2 = b;
          nodes[i].c1 = c1;
          nodes[i].c2 = c2;
          marked[i] = true;
          ++graph.histogram.lc;
          done = true;
        }
      }
    }
  }

  // Default
  for (int i = 0; i < n_outputs; ++i)
    if (!marked[i]) {
      nodes[i].cls = DepClass::Default;
      marked[i] = true;
      ++graph.histogram.dflt;
    }

  // Drop helpers nobody references.
  std::vector<bool> used(n_total, false);
  {
    std::vector<int> stack;
    for (int i = 0; i < n_outputs; ++i) stack.push_back(i);
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      if (used[cur]) continue;
      used[cur] = true;
      if (nodes[cur].ref1 >= 0) stack.push_back(nodes[cur].ref1);
      if (nodes[cur].ref2 >= 0) stack.push_back(nodes[cur].ref2);
    }
  }
  for (int i = 0; i < n_total; ++i) nodes[i].used = used[i];

  // Costs.
  graph.maps_per_entry = vec_len;
  graph.total_maps = 0;
  for (int i = 0; i < n_total; ++i) {
    if (!used[i]) continue;
    assign_cost(nodes[i], options.default_charge, vec_len);
    graph.total_maps += nodes[i].maps;
  }

  // Topological order, smallest index first among ready nodes.
  {
    std::vector<int> indegree(n_total, 0);
    std::vector<std::vector<int>> dependents(n_total);
    for (int i = 0; i < n_total; ++i) {
      if (!used[i]) continue;
      for (int r : {nodes[i].ref1, nodes[i].ref2})
        if (r >= 0) {
          ++indegree[i];
          dependents[r].push_back(i);
        }
    }
    std::set<int> ready;
    int remaining = 0;
    for (int i = 0; i < n_total; ++i)
      if (used[i]) {
        ++remaining;
        if (indegree[i] == 0) ready.insert(i);
      }
    while (!ready.empty()) {
      int cur = *ready.begin();
      ready.erase(ready.begin());
      graph.order.push_back(cur);
      --remaining;
      for (int dep : dependents[cur])
        if (--indegree[dep] == 0) ready.insert(dep);
    }
    if (remaining != 0)
      throw std::logic_error("dependency graph has a cycle");
  }

  return graph;
}

CostReport map_count(const DependencyGraph& graph, int degree, int dim) {
  CostReport r;
  r.degree = degree;
  r.dim = dim;
  r.entries = graph.histogram.sum();
  r.base_maps = static_cast<long>(r.entries) * graph.maps_per_entry;
  r.ferari_maps = graph.total_maps;
  r.histogram = graph.histogram;
  return r;
}

}  // namespace formc
