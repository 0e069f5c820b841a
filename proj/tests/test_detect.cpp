#include <gtest/gtest.h>

#include <cmath>

#include "qsep/qsep.hpp"

using namespace qsep;

namespace {

FunctionInstance cycle_function(std::uint32_t n) {
  std::vector<Element> s(n);
  for (std::uint32_t i = 0; i < n; ++i) s[i] = (i + 1) % n;
  return FunctionInstance(std::move(s));
}

FunctionInstance random_function(std::uint32_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Element> s(n);
  for (auto& x : s) x = static_cast<Element>(rng.below(n));
  return FunctionInstance(std::move(s));
}

// Exposes only the oracle surface; detectors must compile against it.
class SentinelGraph {
 public:
  explicit SentinelGraph(const GraphInstance& g) : o_(g) {}
  std::uint32_t n() const { return o_.n(); }
  std::uint64_t count() const { return o_.count(); }
  std::uint32_t degree(Vertex v) { return o_.degree(v); }
  Vertex neighbor(Vertex v, std::uint32_t i) { return o_.neighbor(v, i); }

 private:
  CountedGraphOracle o_;
};

ScaleParams collision_params() {
  ScaleParams p;
  p.c = 0.3;
  return p;
}

}  // namespace

static_assert(GraphOracle<SentinelGraph>);

TEST(BruteForce, TinyTable) {
  FunctionInstance f(std::vector<Element>{1, 0, 0});
  const auto w = brute_force_find(f, Target::collision());
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].vertices, (std::vector<std::uint32_t>{1, 2, 0}));
}

TEST(BruteForce, EmptyGraphHasNothing) {
  GraphInstance g(16, std::vector<std::pair<Vertex, Vertex>>{});
  for (auto t : {Target::edge(), Target::wedge(), Target::claw(), Target::star(4), Target::clique(3)}) {
    EXPECT_TRUE(brute_force_find(g, t).empty()) << t.str();
  }
}

TEST(BruteForce, SizeGuard) {
  auto f = identity_function(kBruteForceLimit + 1);
  EXPECT_THROW(brute_force_find(f, Target::k_collision(3)), ParameterError);
}

TEST(CollisionSearch, FindsValidWitness) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto b = gen_collision_function(1 << 14, collision_params(), seed);
    CountedFunctionOracle o(b.instance, Relabeling::random(seed + 1));
    auto r = cert_collision_search(o, std::get<CollisionScale>(b.certificate), {std::nullopt, seed});
    ASSERT_EQ(r.status, Status::Found);
    EXPECT_EQ(r.queries, o.count());
    EXPECT_TRUE(validate(b.instance, OracleInspector::unrelabel(o, *r.witness)));
  }
}

TEST(CollisionSearch, NoWitnessNeverFound) {
  ScaleParams p = collision_params();
  p.forced_b = 0;
  auto b = gen_collision_function(1 << 12, p, 1);
  CountedFunctionOracle o(b.instance);
  auto r = cert_collision_search(o, std::get<CollisionScale>(b.certificate), {20000, 1});
  EXPECT_EQ(r.status, Status::BudgetExceeded);
  EXPECT_EQ(r.queries, 20000u);
}

TEST(CollisionSearch, AttemptOnCycleAndPath) {
  auto f = cycle_function(64);
  CountedFunctionOracle o(f);
  auto a = collision_attempt(o, 0, 16);
  EXPECT_FALSE(a.success);
  EXPECT_EQ(a.queries, 16u);
  auto b = collision_attempt(o, 0, 100);
  EXPECT_FALSE(b.success);
  EXPECT_EQ(b.queries, 64u);
  // 0 -> 1 -> 2 -> 3 -> 1 : collision at 1
  FunctionInstance g(std::vector<Element>{1, 2, 3, 1});
  CountedFunctionOracle og(g);
  auto c = collision_attempt(og, 0, 8);
  EXPECT_TRUE(c.success);
  EXPECT_EQ(c.queries, 4u);
}

TEST(MultiscaleSearch, NeverFoundOnPermutation) {
  auto f = cycle_function(1 << 12);
  CountedFunctionOracle o(f);
  auto r = multiscale_collision_search(o, 2, 5, {30000, 3});
  EXPECT_NE(r.status, Status::Found);
}

TEST(MultiscaleSearch, FindsValidWitness) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto b = gen_collision_function(1 << 14, collision_params(), seed);
    CountedFunctionOracle o(b.instance, Relabeling::random(seed));
    auto r = multiscale_collision_search(o, 2, 5, {std::nullopt, seed});
    ASSERT_EQ(r.status, Status::Found);
    EXPECT_TRUE(validate(b.instance, OracleInspector::unrelabel(o, *r.witness)));
  }
}

TEST(ClawSearch, FindsValidWitness) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto b = gen_claw_graph(1 << 14, collision_params(), seed);
    CountedGraphOracle o(b.instance, Relabeling::random(seed), std::nullopt, seed);
    auto r = cert_claw_search(o, std::get<ClawScale>(b.certificate), {std::nullopt, seed});
    ASSERT_EQ(r.status, Status::Found);
    EXPECT_TRUE(validate(b.instance, OracleInspector::unrelabel(o, *r.witness)));
  }
}

TEST(ClawSearch, NoWitnessNeverFound) {
  ScaleParams p = collision_params();
  p.forced_b = 0;
  auto b = gen_claw_graph(1 << 12, p, 2);
  CountedGraphOracle o(b.instance);
  EXPECT_NE(cert_claw_search(o, std::get<ClawScale>(b.certificate), {20000, 1}).status, Status::Found);
}

TEST(ClawSearch, WrongScaleStillSound) {
  auto b = gen_claw_graph(1 << 12, collision_params(), 5);
  const int t = std::get<ClawScale>(b.certificate).t;
  for (int wrong = 2; wrong <= 5; ++wrong) {
    if (wrong == t) continue;
    CountedGraphOracle o(b.instance, Relabeling::random(wrong));
    auto r = cert_claw_search(o, ClawScale{wrong}, {50000, 1});
    if (r.status == Status::Found) EXPECT_TRUE(validate(b.instance, OracleInspector::unrelabel(o, *r.witness)));
  }
}

TEST(FixedPointSearch, FindsPlantedFixedPoint) {
  FixedPointParams fp;
  fp.widen_window = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto b = gen_fixedpoint_function(1 << 14, fp, HSpec::fixed_point(), seed);
    CountedFunctionOracle o(b.instance, Relabeling::random(seed));
    auto r = cert_fixedpoint_search(o, std::get<FixedPointPrimes>(b.certificate), {}, {std::nullopt, seed});
    ASSERT_EQ(r.status, Status::Found);
    EXPECT_TRUE(validate(b.instance, OracleInspector::unrelabel(o, *r.witness)));
  }
}

TEST(FixedPointSearch, FindsKCollision) {
  FixedPointParams fp;
  fp.widen_window = true;
  auto b = gen_fixedpoint_function(1 << 16, fp, HSpec::k_collision(3), 4);
  CountedFunctionOracle o(b.instance, Relabeling::random(4));
  FixedPointSearchParams sp;
  sp.target = Target::k_collision(3);
  auto r = cert_fixedpoint_search(o, std::get<FixedPointPrimes>(b.certificate), sp, {std::nullopt, 4});
  ASSERT_EQ(r.status, Status::Found);
  EXPECT_TRUE(validate(b.instance, OracleInspector::unrelabel(o, *r.witness)));
}

TEST(FixedPointSearch, NoPatternNeverFound) {
  FixedPointParams fp;
  fp.widen_window = true;
  auto b = gen_fixedpoint_function(1 << 12, fp, HSpec::none(), 4);
  CountedFunctionOracle o(b.instance);
  auto r = cert_fixedpoint_search(o, FixedPointPrimes{{5, 7}}, {}, {40000, 4});
  EXPECT_NE(r.status, Status::Found);
}

TEST(StarSearch, QueryBoundAndGoodCenters) {
  const std::uint32_t n = 1 << 14;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto b = gen_star_graph(n, HSpec::clique(3), seed);
    CountedGraphOracle o(b.instance, Relabeling::random(seed), std::nullopt, seed);
    const auto& cert = std::get<StarDegrees>(b.certificate);
    auto r = cert_star_search(o, cert, {}, {std::nullopt, seed});
    ASSERT_EQ(r.status, Status::Found);
    EXPECT_TRUE(validate(b.instance, OracleInspector::unrelabel(o, *r.witness)));
    EXPECT_LE(static_cast<double>(r.queries), 40.0 * std::sqrt(double(n)) * std::log2(double(n)));
    EXPECT_EQ(r.counter("good-centers"), cert.degrees.size());
  }
}

TEST(StarSearch, EmptyCertificate) {
  auto b = gen_star_graph(4096, HSpec::clique(3), 1);
  CountedGraphOracle o(b.instance);
  auto r = cert_star_search(o, StarDegrees{}, {}, {});
  EXPECT_EQ(r.status, Status::Exhausted);
  EXPECT_EQ(r.queries, 0u);
}

TEST(StarSearch, WrongDegreesStillTerminate) {
  auto b = gen_star_graph(4096, HSpec::clique(3), 2);
  const auto& good = std::get<StarDegrees>(b.certificate).degrees;
  std::uint32_t decoy = 0;
  for (Vertex v = 0; v < b.instance.n() && !decoy; ++v) {
    const auto d = b.instance.degree(v);
    if (d > 3 && std::find(good.begin(), good.end(), d) == good.end()) decoy = d;
  }
  ASSERT_GT(decoy, 0u);
  CountedGraphOracle o(b.instance, Relabeling::random(4));
  auto r = cert_star_search(o, StarDegrees{{decoy}}, {}, {std::nullopt, 4});
  ASSERT_EQ(r.status, Status::Found);
  EXPECT_TRUE(validate(b.instance, OracleInspector::unrelabel(o, *r.witness)));
}

TEST(StarPathSearch, SqrtCost) {
  const std::uint32_t n = 1 << 14;
  double total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto b = gen_starpath_graph(n, 4, seed);
    CountedGraphOracle o(b.instance, Relabeling::random(seed), std::nullopt, seed);
    auto r = cert_starpath_search(o, std::get<BackboneIndex>(b.certificate), {}, {std::nullopt, seed});
    ASSERT_EQ(r.status, Status::Found);
    EXPECT_EQ(r.counter("fallback"), 0u);
    EXPECT_TRUE(validate(b.instance, OracleInspector::unrelabel(o, *r.witness)));
    total += static_cast<double>(r.queries);
  }
  EXPECT_LE(total / 20, 20 * std::sqrt(double(n)));
}

TEST(StarPathSearch, CorruptedIndexIsSound) {
  auto b = gen_starpath_graph(4096, 4, 3);
  const auto k = std::get<BackboneIndex>(b.certificate).index;
  CountedGraphOracle o(b.instance, Relabeling::random(1));
  auto r = cert_starpath_search(o, BackboneIndex{k == 1 ? 2u : 1u}, {}, {std::nullopt, 1});
  if (r.status == Status::Found) {
    EXPECT_TRUE(validate(b.instance, OracleInspector::unrelabel(o, *r.witness)));
  }
}

TEST(PathK, IdentityExhausted) {
  auto f = identity_function(64);
  CountedFunctionOracle o(f);
  EXPECT_EQ(path_k_search(o, 1).status, Status::Exhausted);
}

TEST(PathK, CycleFirstAttempt) {
  auto f = cycle_function(100);
  CountedFunctionOracle o(f);
  auto r = path_k_search(o, 7);
  EXPECT_EQ(r.status, Status::Found);
  EXPECT_EQ(r.queries, 7u);
  EXPECT_EQ(r.attempts, 1u);
}

TEST(PathK, AgreesWithBruteForce) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto f = random_function(256, seed);
    const std::uint32_t k = 10 + static_cast<std::uint32_t>(seed % 20);
    CountedFunctionOracle o(f, Relabeling::random(seed));
    auto r = path_k_search(o, k, {std::nullopt, seed});
    const bool exists = !brute_force_find(f, Target::path(k)).empty();
    ASSERT_EQ(r.status == Status::Found, exists) << seed;
    if (exists) EXPECT_TRUE(validate(f, OracleInspector::unrelabel(o, *r.witness)));
  }
}

TEST(EdgeWedge, EmptyGraph) {
  GraphInstance g(32, std::vector<std::pair<Vertex, Vertex>>{});
  CountedGraphOracle o(g);
  EXPECT_NE(edge_wedge_search(o, Target::edge()).status, Status::Found);
  EXPECT_NE(edge_wedge_search(o, Target::wedge()).status, Status::Found);
}

TEST(EdgeWedge, SingleEdge) {
  std::vector<std::pair<Vertex, Vertex>> e{{3, 7}};
  GraphInstance g(64, e);
  CountedGraphOracle o(g);
  EXPECT_NE(edge_wedge_search(o, Target::wedge()).status, Status::Found);
  double samples = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    CountedGraphOracle oe(g);
    auto r = edge_wedge_search(oe, Target::edge(), {std::nullopt, s});
    ASSERT_EQ(r.status, Status::Found);
    samples += static_cast<double>(r.attempts);
  }
  EXPECT_NEAR(samples / 2000, 32.0, 3.0);
}

TEST(EdgeWedge, ShortPath) {
  std::vector<std::pair<Vertex, Vertex>> e{{0, 1}, {1, 2}};
  GraphInstance g(3, e);
  bool middle_seen = false;
  for (std::uint64_t s = 0; s < 50; ++s) {
    CountedGraphOracle o(g);
    auto r = edge_wedge_search(o, Target::wedge(), {std::nullopt, s});
    ASSERT_EQ(r.status, Status::Found);
    EXPECT_TRUE(validate(g, *r.witness));
    if (r.attempts == 1 && r.witness->vertices[1] == 1 && r.queries == 3) middle_seen = true;
  }
  EXPECT_TRUE(middle_seen);
}

TEST(Baseline, ModelMismatch) {
  auto f = identity_function(16);
  CountedFunctionOracle o(f);
  EXPECT_THROW(uniform_probe_baseline(o, Target::claw()), ModelMismatch);
}

TEST(Baseline, FindsStarOnSentinel) {
  auto b = gen_starpath_graph(4096, 4, 2);
  SentinelGraph s(b.instance);
  auto r = uniform_probe_baseline(s, Target::star(4), {std::nullopt, 2});
  ASSERT_EQ(r.status, Status::Found);
  EXPECT_TRUE(validate(b.instance, *r.witness));
}

TEST(Baseline, FindsFixedPoint) {
  FixedPointParams fp;
  fp.widen_window = true;
  auto b = gen_fixedpoint_function(1 << 12, fp, HSpec::fixed_point(), 1);
  CountedFunctionOracle o(b.instance, Relabeling::random(1));
  auto r = uniform_probe_baseline(o, Target::fixed_point(), {std::nullopt, 1});
  ASSERT_EQ(r.status, Status::Found);
  EXPECT_TRUE(validate(b.instance, OracleInspector::unrelabel(o, *r.witness)));
}

TEST(Targets, RoundTrip) {
  for (const char* s : {"collision", "collision:3", "fixed-point", "path:5", "claw", "star:4", "wedge", "edge", "triangle",
                        "clique:4"}) {
    EXPECT_EQ(Target::parse(s).str(), s);
  }
}
