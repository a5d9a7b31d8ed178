#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "formc/optimizer.hpp"

using namespace formc;

namespace {

BlockVector bv(std::vector<long long> vals, int la = 0, int mu = 0) {
  BlockVector b;
  b.owner = {la, mu};
  for (long long v : vals) b.values.push_back(Rational(v));
  return b;
}

}  // namespace

TEST_CASE("normalize_direction") {
  const auto n = normalize_direction(bv({-2, 4, 0, -6}));
  CHECK(n.values == std::vector<Rational>{1, -2, 0, 3});
  // Colinear vectors normalize identically regardless of scale and sign.
  CHECK(normalize_direction(bv({3, -6, 0, 9})).values == n.values);
  CHECK_THROWS_AS(normalize_direction(bv({0, 0, 0, 0})), ParameterError);
}

TEST_CASE("check_lincomb") {
  const auto a = bv({1, 0, 2, 0});
  const auto b = bv({0, 1, 1, 0});
  auto c = check_lincomb(bv({2, 3, 7, 0}), a, b);
  REQUIRE(c.has_value());
  CHECK(c->first == 2);
  CHECK(c->second == 3);
  CHECK_FALSE(check_lincomb(bv({0, 0, 0, 1}), a, b).has_value());
  // Dependent pair is rejected.
  CHECK_FALSE(check_lincomb(bv({2, 0, 4, 0}), a, bv({2, 0, 4, 0})).has_value());
}

TEST_CASE("classification on a synthetic block set") {
  std::vector<BlockVector> blocks = {
      bv({2, 1, 1, 3}, 0, 0),    // first occurrence -> depends on inputs
      bv({0, 0, 0, 0}, 0, 1),    // zero
      bv({2, 1, 1, 3}, 0, 2),    // equal
      bv({2, 1, 1, 3}, 1, 1),    // equal (maps to the first)
      bv({-4, -2, -2, -6}, 1, 2),// colinear, alpha -2
      bv({0, 0, 5, 0}, 2, 2),    // one entry
      bv({2, 1, 1, 4}, 2, 3),    // edit distance 1 from the first
      bv({2, 1, 4, 4}, 3, 3),    // edit distance 2
  };
  PassOptions opt;
  opt.enable_transpose = false;
  const DependencyGraph g = run_passes(blocks, opt);
  CHECK(g.histogram.zero == 1);
  CHECK(g.histogram.eq == 2);
  CHECK(g.histogram.col == 1);
  CHECK(g.histogram.one_entry >= 1);
  CHECK(g.histogram.ed1 >= 1);
  CHECK(g.histogram.sum() == static_cast<int>(blocks.size()));

  // Topological order: every reference resolves to an earlier position.
  std::vector<int> pos(g.nodes.size(), -1);
  for (std::size_t i = 0; i < g.order.size(); ++i) pos[g.order[i]] = static_cast<int>(i);
  for (int idx : g.order) {
    const auto& node = g.nodes[idx];
    if (node.ref1 >= 0) CHECK(pos[node.ref1] < pos[idx]);
    if (node.ref2 >= 0) CHECK(pos[node.ref2] < pos[idx]);
  }
}

TEST_CASE("transpose pass requires the flag") {
  std::vector<BlockVector> blocks = {
      bv({1, 2, 3, 4}, 0, 0),
      bv({1, 3, 2, 4}, 0, 1),  // the transpose
  };
  PassOptions opt;
  const DependencyGraph with = run_passes(blocks, opt);
  CHECK(with.histogram.eq_t == 1);
  opt.enable_transpose = false;
  const DependencyGraph without = run_passes(blocks, opt);
  CHECK(without.histogram.eq_t == 0);
}

TEST_CASE("laplacian map counts meet the published ceilings") {
  const long published[7] = {0, 7, 15, 45, 176, 443, 867};
  const long base[7] = {0, 24, 84, 220, 480, 924, 1624};
  for (int degree = 1; degree <= 4; ++degree) {
    const auto K = reference_stiffness_tensor(degree, 2);
    const DependencyGraph g = run_passes(blocks_of(K));
    const CostReport r = map_count(g, degree, 2);
    CHECK(r.base_maps == base[degree]);
    CHECK(r.ferari_maps < r.base_maps);
    const double limit = degree <= 3 ? 1.25 : 1.5;
    CHECK(r.ferari_maps <= published[degree] * limit);
    CHECK(r.histogram.sum() == r.entries);
  }
  // Degrees 1 and 2 reproduce the published counts exactly.
  {
    const auto K = reference_stiffness_tensor(1, 2);
    CHECK(map_count(run_passes(blocks_of(K)), 1, 2).ferari_maps == 7);
  }
  {
    const auto K = reference_stiffness_tensor(2, 2);
    const CostReport r = map_count(run_passes(blocks_of(K)), 2, 2);
    CHECK(r.ferari_maps == 15);
    CHECK(r.histogram.zero == 3);  // three vanishing upper-triangle blocks
  }
}

TEST_CASE("runs are deterministic") {
  const auto K = reference_stiffness_tensor(3, 2);
  const DependencyGraph a = run_passes(blocks_of(K));
  const DependencyGraph b = run_passes(blocks_of(K));
  REQUIRE(a.order == b.order);
  REQUIRE(a.total_maps == b.total_maps);
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].cls == b.nodes[i].cls);
    CHECK(a.nodes[i].ref1 == b.nodes[i].ref1);
  }
}
