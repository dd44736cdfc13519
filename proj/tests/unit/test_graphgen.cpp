#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "gnpn/error.hpp"
#include "gnpn/graphgen.hpp"

using namespace gnpn;

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) v = parent[v] = parent[parent[v]];
  return v;
}

// true if the edge set has no cycle and spans all vertices
bool is_spanning_tree(const GraphStructure& g) {
  std::vector<std::size_t> parent(g.dim());
  std::iota(parent.begin(), parent.end(), 0);
  for (const Edge& e : g.edges()) {
    const auto a = find_root(parent, e.lo), b = find_root(parent, e.hi);
    if (a == b) return false;
    parent[a] = b;
  }
  return g.edge_count() + 1 == g.dim();
}

}  // namespace

TEST(ErdosRenyi, ZeroProbabilityGivesIdentity) {
  RngStream rng(1, 0);
  ErConfig cfg;
  cfg.forced_p = 0.0;
  const auto m = gen_erdos_renyi(10, rng, cfg);
  EXPECT_EQ(m.gamma_rho, SymmetricMatrix::identity(10));
  EXPECT_EQ(m.edges.edge_count(), 0u);
  EXPECT_EQ(m.b_norm, 0.0);
}

TEST(ErdosRenyi, DensityTracksDrawnProbability) {
  // Each kept pair survives the |w| >= 0.1 cut with P(|N(0, 0.3)| >= 0.1).
  const double keep = std::erfc((0.1 / 0.3) / std::sqrt(2.0));
  double realized = 0.0, expected = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    RngStream rng(11, s);
    const auto m = gen_erdos_renyi(10, rng);
    realized += static_cast<double>(m.edges.edge_count()) / 45.0;
    expected += m.edge_probability * keep;
  }
  EXPECT_NEAR(realized / 1000.0, expected / 1000.0, 0.05);
}

TEST(ErdosRenyi, Deterministic) {
  RngStream a(5, 3), b(5, 3);
  const auto ma = gen_erdos_renyi(10, a), mb = gen_erdos_renyi(10, b);
  EXPECT_EQ(ma.gamma_rho, mb.gamma_rho);
  EXPECT_EQ(ma.edges, mb.edges);
}

TEST(ErdosRenyi, ValidityInvariants) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    RngStream rng(2, s);
    const auto m = gen_erdos_renyi(10, rng);
    EXPECT_LT(m.b_norm, 1.0);
    EXPECT_NO_THROW(invert_spd(m.gamma_rho));
    for (const Edge& e : m.edges.edges()) EXPECT_GE(std::abs(m.gamma_rho(e.lo, e.hi)), 0.1);
  }
}

TEST(ErdosRenyi, WithoutNormCheckCanExceedOne) {
  ErConfig cfg;
  cfg.enforce_b_norm = false;
  bool seen = false;
  for (std::uint64_t s = 0; s < 300 && !seen; ++s) {
    RngStream rng(3, s);
    seen = gen_erdos_renyi(10, rng, cfg).b_norm >= 1.0;
  }
  EXPECT_TRUE(seen);
}

TEST(ErdosRenyi, RetriesExhausted) {
  RngStream rng(1, 0);
  ErConfig cfg;
  cfg.forced_p = 1.0;
  cfg.weights.scale = 50.0;
  cfg.max_retries = 5;
  try {
    gen_erdos_renyi(10, rng, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RetriesExhausted);
  }
}

TEST(GaltonWatson, TwoNodes) {
  RngStream rng(4, 0);
  const auto m = gen_galton_watson(2, rng);
  ASSERT_EQ(m.edges.edge_count(), 1u);
  EXPECT_TRUE(m.edges.has_edge(0, 1));
  EXPECT_NEAR(m.b_norm, std::abs(m.gamma_rho(0, 1)), 1e-12);
}

TEST(GaltonWatson, AlwaysASpanningTree) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    RngStream rng(9, s);
    const auto m = gen_galton_watson(10, rng);
    ASSERT_EQ(m.edges.edge_count(), 9u);
    ASSERT_TRUE(is_spanning_tree(m.edges));
    for (const Edge& e : m.edges.edges()) ASSERT_GE(std::abs(m.gamma_rho(e.lo, e.hi)), 0.1);
  }
}

TEST(GaltonWatson, Deterministic) {
  RngStream a(8, 1), b(8, 1);
  EXPECT_EQ(gen_galton_watson(12, a).gamma_rho, gen_galton_watson(12, b).gamma_rho);
}

TEST(GaltonWatson, ExtinctionWithoutRestart) {
  GwConfig cfg;
  cfg.lambda = 1e-6;
  cfg.restart_on_extinction = false;
  RngStream rng(1, 1);
  try {
    gen_galton_watson(10, rng, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateTree);
  }
}

TEST(StructureOf, IdentityHasNoEdges) {
  EXPECT_EQ(structure_of(make_precision_model(SymmetricMatrix::identity(5))).edge_count(), 0u);
}

TEST(StructureOf, CircleIsEightCycle) {
  const auto g = structure_of(make_precision_model(circle_precision(8, 1.0 / 22.0)));
  ASSERT_EQ(g.edge_count(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_TRUE(g.has_edge(i, (i + 1) % 8));
}

TEST(StructureOf, MatchesNonzeros) {
  RngStream rng(6, 0);
  const auto m = gen_erdos_renyi(10, rng);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = i + 1; j < 10; ++j) EXPECT_EQ(m.edges.has_edge(i, j), m.gamma_rho(i, j) != 0.0);
}

TEST(MakePrecisionModel, RejectsNonUnitDiagonal) {
  SymmetricMatrix g = SymmetricMatrix::identity(3);
  g.set(1, 1, 2.0);
  EXPECT_THROW(make_precision_model(g), Error);
}
