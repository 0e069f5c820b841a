#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "qsep/qsep.hpp"

using namespace qsep;

namespace {

// Trial-division reference, independent of the segmented sieve.
bool is_prime_slow(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t d = 2; d * d <= x; ++d) {
    if (x % d == 0) return false;
  }
  return true;
}

std::uint64_t cycles_with_self_map(const FunctionInstance& f) {
  std::uint64_t k = 0;
  for (Element x = 0; x < f.n; ++x) k += f.succ[x] == x;
  return k;
}

}  // namespace

TEST(Primes, SmallWindows) {
  EXPECT_EQ(primes_in_range(4, 8), (std::vector<std::uint64_t>{5, 7}));
  EXPECT_EQ(primes_in_range(24, 32), (std::vector<std::uint64_t>{29, 31}));
  EXPECT_TRUE(primes_in_range(24, 29).empty());
}

TEST(Primes, WindowAtTwoToForty) {
  const double r = std::pow(2.0, 10);  // n^{1/4}
  const auto lo = static_cast<std::uint64_t>(r / 4), hi = static_cast<std::uint64_t>(r / 2);
  std::vector<std::uint64_t> ref;
  for (auto x = lo + 1; x < hi; ++x) {
    if (is_prime_slow(x)) ref.push_back(x);
  }
  EXPECT_EQ(primes_in_range(lo, hi), ref);
}

TEST(Primes, LargeRangeMatchesTrialDivision) {
  const std::uint64_t lo = 1'000'000'000, hi = lo + 5000;
  std::vector<std::uint64_t> ref;
  for (auto x = lo + 1; x < hi; ++x) {
    if (is_prime_slow(x)) ref.push_back(x);
  }
  EXPECT_EQ(primes_in_range(lo, hi), ref);
}

TEST(Scales, PathCountsAtQuarterRho) {
  ScaleParams p;
  p.rho = 0.25;
  const auto plan = plan_scales(1024, p, LayoutModel::Function);
  EXPECT_EQ(plan.a, (std::vector<std::uint64_t>{52, 24, 10, 4}));
}

TEST(Scales, WitnessCountAtUnitRho) {
  ScaleParams p;
  p.i_min = p.i_max = 3;
  p.c = 0.3;
  p.rho = 1.0;
  const auto plan = plan_scales(1024, p, LayoutModel::Function);
  EXPECT_EQ(plan.b_at(3), 96u);

  auto bundle = gen_collision_function(1024, p, 11);
  check_partition(*bundle.instance.meta, 1024);
  EXPECT_EQ(brute_force_find(bundle.instance, Target::collision()).size(), 96u);
}

TEST(Scales, InfeasibleNamesCapacity) {
  ScaleParams p;
  p.rho = 1.0;
  try {
    plan_scales(1024, p, LayoutModel::Function);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("sum a_i*2^i"), std::string::npos) << e.what();
  }
}

TEST(Scales, ParameterChecks) {
  ScaleParams p;
  p.beta = 1.05;
  EXPECT_THROW(plan_scales(1 << 12, p, LayoutModel::Function), ParameterError);
  p = {};
  p.i_max = 20;
  EXPECT_THROW(plan_scales(1 << 12, p, LayoutModel::Function), ParameterError);
}

TEST(Scales, BluePoolMaxAtLowestScale) {
  ScaleParams p;
  p.i_min = 3;
  p.i_max = 7;
  p.c = 0.2;
  const auto plan = plan_scales(1 << 14, p, LayoutModel::Claw);
  EXPECT_EQ(plan.blue_pool(), 4 * plan.b_at(3));
}

TEST(CollisionGen, ForcedZeroWitnessesHasNoCollision) {
  ScaleParams p;
  p.forced_b = 0;
  p.filler = Filler::SmallCycles;
  auto bundle = gen_collision_function(4096, p, 5);
  check_partition(*bundle.instance.meta, 4096);
  EXPECT_TRUE(brute_force_find(bundle.instance, Target::collision()).empty());
  EXPECT_EQ(cycles_with_self_map(bundle.instance), 0u);
}

TEST(CollisionGen, WitnessCountsOverSeeds) {
  ScaleParams p;
  p.c = 0.3;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto bundle = gen_collision_function(1 << 12, p, seed);
    const auto& meta = *bundle.instance.meta;
    check_partition(meta, 1 << 12);
    const int t = std::get<CollisionScale>(bundle.certificate).t;
    ASSERT_EQ(meta.good_index, t);
    const auto found = brute_force_find(bundle.instance, Target::collision());
    EXPECT_EQ(found.size(), meta.witness_locations.size());
    for (const auto& w : meta.witness_locations) {
      EXPECT_TRUE(validate(bundle.instance, {WitnessKind::Collision, w}));
    }
  }
}

TEST(CollisionGen, Deterministic) {
  ScaleParams p;
  auto a = gen_collision_function(1 << 12, p, 99);
  auto b = gen_collision_function(1 << 12, p, 99);
  EXPECT_EQ(a.instance.succ, b.instance.succ);
  EXPECT_EQ(a.certificate, b.certificate);
}

TEST(ClawGen, DegreeProfile) {
  ScaleParams p;
  p.c = 0.3;
  p.i_min = 1;
  auto bundle = gen_claw_graph(1 << 12, p, 3);
  const auto& g = bundle.instance;
  check_partition(*g.meta, g.n());
  const int t = std::get<ClawScale>(bundle.certificate).t;
  std::uint64_t deg3 = 0;
  for (Vertex v = 0; v < g.n(); ++v) {
    ASSERT_LE(g.degree(v), 3u);
    if (g.degree(v) == 3) {
      ++deg3;
      std::uint32_t ones = 0;
      for (auto w : g.neighbors(v)) ones += g.degree(w) == 1;
      EXPECT_EQ(ones, 2u);
    }
  }
  const auto witnesses = std::count_if(g.meta->structures.begin(), g.meta->structures.end(),
                                       [](const Structure& s) { return s.kind == StructureKind::WitnessGadget; });
  EXPECT_EQ(deg3, 2u * static_cast<std::uint64_t>(witnesses));
  EXPECT_EQ(brute_force_find(g, Target::claw()).size(), deg3);
  EXPECT_EQ(g.meta->good_index, t);
}

TEST(ClawGen, NoWitnessesMeansNoClaw) {
  ScaleParams p;
  p.forced_b = 0;
  auto bundle = gen_claw_graph(1 << 12, p, 4);
  EXPECT_TRUE(brute_force_find(bundle.instance, Target::claw()).empty());
}

TEST(FixedPointGen, DefaultWindowTooSmallAtTwoToSixteen) {
  FixedPointParams fp;
  fp.cycles = 3;
  try {
    gen_fixedpoint_function(1 << 16, fp, HSpec::fixed_point(), 1);
    FAIL() << "expected ParameterError";
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("widen"), std::string::npos) << e.what();
  }
  fp.widen_window = true;
  EXPECT_NO_THROW(gen_fixedpoint_function(1 << 16, fp, HSpec::fixed_point(), 1));
}

TEST(FixedPointGen, WindowAtTwoToSixteen) {
  FixedPointParams fp;
  fp.cycles = 2;
  const auto layout = plan_fixedpoint(1 << 16, fp, HSpec::fixed_point());
  EXPECT_EQ(layout.window, (std::vector<std::uint64_t>{5, 7}));
}

TEST(FixedPointGen, SingleFixedPointAndPrimeSpacing) {
  FixedPointParams fp;
  fp.widen_window = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto bundle = gen_fixedpoint_function(1 << 14, fp, HSpec::fixed_point(), seed);
    const auto& f = bundle.instance;
    const auto& meta = *f.meta;
    check_partition(meta, f.n);
    EXPECT_EQ(cycles_with_self_map(f), 1u);
    EXPECT_EQ(brute_force_find(f, Target::fixed_point()).size(), 1u);

    // Entry points of each feeder; the cycle they enter is its tag.
    std::map<std::int64_t, std::vector<Element>> entries;
    for (const auto& s : meta.structures) {
      if (s.kind == StructureKind::Feeder) entries[s.tag].push_back(f.succ[s.members.back()]);
    }
    for (auto& [idx, xs] : entries) {
      const auto& cyc = meta.structures[static_cast<std::size_t>(idx)];
      std::map<Element, std::size_t> pos;
      for (std::size_t k = 0; k < cyc.members.size(); ++k) pos[cyc.members[k]] = k;
      std::vector<std::size_t> ps;
      for (auto x : xs) ps.push_back(pos.at(x));
      std::sort(ps.begin(), ps.end());
      ASSERT_GE(ps.size(), 2u);
      const auto p = ps[1] - ps[0];
      EXPECT_TRUE(is_prime_slow(p));
      for (std::size_t k = 1; k < ps.size(); ++k) EXPECT_EQ(ps[k] - ps[k - 1], p);
      if (cyc.kind == StructureKind::Cycle) EXPECT_EQ(cyc.members.size() % p, 0u);
    }
  }
}

TEST(FixedPointGen, KCollisionCount) {
  FixedPointParams fp;
  fp.widen_window = true;
  auto bundle = gen_fixedpoint_function(1 << 16, fp, HSpec::k_collision(3), 2);
  check_partition(*bundle.instance.meta, bundle.instance.n);
  std::vector<std::uint32_t> indeg(bundle.instance.n, 0);
  for (auto y : bundle.instance.succ) ++indeg[y];
  EXPECT_EQ(std::count(indeg.begin(), indeg.end(), 3u), 1);
  EXPECT_EQ(std::count_if(indeg.begin(), indeg.end(), [](auto d) { return d > 3; }), 0);
  EXPECT_EQ(std::get<FixedPointPrimes>(bundle.certificate).primes.size(), 3u);
}

TEST(FixedPointGen, TooManyEntries) {
  FixedPointParams fp;
  fp.widen_window = true;
  fp.cycles = 2;
  EXPECT_THROW(gen_fixedpoint_function(1 << 14, fp, HSpec::k_collision(3), 2), ParameterError);
}

TEST(StarGen, DistinctDegreesAndSingleTriangle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto bundle = gen_star_graph(4096, HSpec::clique(3), seed);
    const auto& g = bundle.instance;
    check_partition(*g.meta, g.n());
    std::set<std::int64_t> degs;
    std::uint64_t centers = 0;
    for (const auto& s : g.meta->structures) {
      if (s.kind != StructureKind::Star) continue;
      ++centers;
      degs.insert(s.tag);
      EXPECT_GE(s.tag, 16);
      EXPECT_LE(s.tag, 96);
    }
    EXPECT_EQ(centers, 64u);
    EXPECT_EQ(degs.size(), 64u);
    EXPECT_EQ(brute_force_find(g, Target::clique(3)).size(), 1u);
  }
}

TEST(StarGen, NoPatternIsForest) {
  auto bundle = gen_star_graph(4096, HSpec::none(), 1);
  const auto& g = bundle.instance;
  EXPECT_EQ(g.edge_count(), 4096u - 64u);
  EXPECT_TRUE(brute_force_find(g, Target::clique(3)).empty());
}

TEST(StarPathGen, Shape) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto bundle = gen_starpath_graph(4096, 4, seed);
    const auto& g = bundle.instance;
    check_partition(*g.meta, g.n());
    EXPECT_EQ(brute_force_find(g, Target::star(4)).size(), 1u);
    std::uint32_t big = 0;
    for (Vertex v = 0; v < g.n(); ++v) big += g.degree(v) >= 5;
    EXPECT_LE(big, 1u);

    const Structure* backbone = nullptr;
    for (const auto& s : g.meta->structures) {
      if (s.kind == StructureKind::Backbone) backbone = &s;
    }
    ASSERT_NE(backbone, nullptr);
    const auto& bb = backbone->members;  // v0, v1, ..., vs
    const auto center = g.meta->witness_locations.at(0).at(0);
    for (std::size_t i = 2; i + 1 < bb.size(); ++i) {
      if (bb[i] == center) continue;
      EXPECT_EQ(g.degree(bb[i]), 3u) << i;
    }
    EXPECT_EQ(g.degree(bb[0]) - (bb[0] == center ? 4 : 0), 1u);
  }
}

TEST(StarPathGen, RejectsSmallK) { EXPECT_THROW(gen_starpath_graph(4096, 3, 1), ParameterError); }
