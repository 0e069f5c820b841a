#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qsep/gen/scales.hpp"
#include "qsep/instance.hpp"
#include "qsep/rng.hpp"

namespace qsep {

struct FunctionBundle {
  FunctionInstance instance;
  Certificate certificate;
  const StructureMeta& meta() const { return *instance.meta; }
};

struct GraphBundle {
  GraphInstance instance;
  Certificate certificate;
  const StructureMeta& meta() const { return *instance.meta; }
};

namespace detail {

// Draws disjoint uniformly random member lists from a shuffled [0, n).
class ElementPool {
 public:
  ElementPool(std::uint32_t n, Rng& rng) : order_(random_permutation(n, rng)) {}
  std::vector<std::uint32_t> take(std::uint64_t k) {
    std::vector<std::uint32_t> out(order_.begin() + static_cast<std::ptrdiff_t>(next_),
                                   order_.begin() + static_cast<std::ptrdiff_t>(next_ + k));
    next_ += k;
    return out;
  }
  std::uint64_t left() const { return order_.size() - next_; }

 private:
  std::vector<std::uint32_t> order_;
  std::uint64_t next_ = 0;
};

inline void record_plan(StructureMeta& meta, const ScalePlan& plan) {
  meta.note("rho", std::to_string(plan.rho));
  meta.note("path-elements", std::to_string(plan.path_elements()));
  for (const auto& w : plan.warnings) meta.note("warning", w);
}

inline std::uint64_t witness_count(const ScalePlan& plan, const ScaleParams& p, int t) {
  return p.forced_b ? std::min<std::uint64_t>(*p.forced_b, plan.a_at(t)) : plan.b_at(t);
}

}  // namespace detail

// Multi-scale function: a_i cycles/paths of 2^i elements per scale; b_t of the
// scale-t paths end by mapping into their own interior, one collision each.
inline FunctionBundle gen_collision_function(std::uint32_t n, const ScaleParams& params, std::uint64_t seed) {
  const ScalePlan plan = plan_scales(n, params, LayoutModel::Function);
  Rng rng(seed);
  const int t = params.forced_t ? *params.forced_t : static_cast<int>(rng.between(params.i_min, params.i_max));
  const std::uint64_t bt = detail::witness_count(plan, params, t);
  detail::ElementPool pool(n, rng);

  std::vector<Element> succ(n);
  StructureMeta meta;
  meta.good_index = t;
  detail::record_plan(meta, plan);

  for (int i = plan.i_min; i <= plan.i_max; ++i) {
    const std::uint64_t len = std::uint64_t{1} << i;
    const std::uint64_t a = plan.a_at(i);
    std::vector<std::uint8_t> witness(a, 0);
    if (i == t) {
      for (auto j : rng.sample_distinct(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(bt))) witness[j] = 1;
    }
    for (std::uint64_t j = 0; j < a; ++j) {
      auto members = pool.take(len);
      for (std::uint64_t k = 0; k + 1 < len; ++k) succ[members[k]] = members[k + 1];
      if (witness[j]) {
        const auto m = params.target == CollisionTarget::Far
                           ? len - 2
                           : static_cast<std::uint64_t>(rng.between(1, static_cast<std::int64_t>(len) - 2));
        succ[members.back()] = members[m];
        meta.witness_locations.push_back({members[m - 1], members.back(), members[m]});
        meta.structures.push_back({StructureKind::Path, i, static_cast<std::int64_t>(m), std::move(members)});
      } else {
        succ[members.back()] = members.front();
        meta.structures.push_back({StructureKind::Cycle, i, 0, std::move(members)});
      }
    }
  }

  auto rest = pool.take(pool.left());
  if (params.filler == Filler::FixedPoints || rest.empty()) {
    for (auto x : rest) succ[x] = x;
    if (!rest.empty()) meta.structures.push_back({StructureKind::Isolated, -1, 0, std::move(rest)});
  } else {
    if (rest.size() == 1) throw ParameterError("cycle filler cannot place a single leftover element");
    // 2-cycles, with one 3-cycle when the count is odd.
    std::size_t k = 0;
    while (k < rest.size()) {
      const std::size_t len = (rest.size() - k == 3) ? 3 : 2;
      std::vector<std::uint32_t> members(rest.begin() + k, rest.begin() + k + len);
      for (std::size_t j = 0; j < len; ++j) succ[members[j]] = members[(j + 1) % len];
      meta.structures.push_back({StructureKind::Cycle, -1, 0, std::move(members)});
      k += len;
    }
  }
  meta.note("witnesses", std::to_string(bt));
  return {FunctionInstance(std::move(succ), std::move(meta)), CollisionScale{t}};
}

// Multi-scale claw graph: a_i paths of 2^i vertices per scale; both ends of b_t
// scale-t paths get two fresh leaves each.
inline GraphBundle gen_claw_graph(std::uint32_t n, const ScaleParams& params, std::uint64_t seed) {
  const ScalePlan plan = plan_scales(n, params, LayoutModel::Claw);
  Rng rng(seed);
  const int t = params.forced_t ? *params.forced_t : static_cast<int>(rng.between(params.i_min, params.i_max));
  const std::uint64_t bt = detail::witness_count(plan, params, t);
  detail::ElementPool pool(n, rng);

  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(plan.path_elements() + 4 * bt);
  StructureMeta meta;
  meta.good_index = t;
  detail::record_plan(meta, plan);

  std::vector<std::size_t> witness_paths;
  for (int i = plan.i_min; i <= plan.i_max; ++i) {
    const std::uint64_t len = std::uint64_t{1} << i;
    const std::uint64_t a = plan.a_at(i);
    std::vector<std::uint8_t> witness(a, 0);
    if (i == t) {
      for (auto j : rng.sample_distinct(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(bt))) witness[j] = 1;
    }
    for (std::uint64_t j = 0; j < a; ++j) {
      auto members = pool.take(len);
      for (std::uint64_t k = 0; k + 1 < len; ++k) edges.emplace_back(members[k], members[k + 1]);
      if (witness[j]) witness_paths.push_back(meta.structures.size());
      meta.structures.push_back({StructureKind::Path, i, witness[j] ? 1 : 0, std::move(members)});
    }
  }
  for (auto idx : witness_paths) {
    auto leaves = pool.take(4);
    const auto& path = meta.structures[idx].members;
    const Vertex u = path.front(), v = path.back();
    edges.emplace_back(u, leaves[0]);
    edges.emplace_back(u, leaves[1]);
    edges.emplace_back(v, leaves[2]);
    edges.emplace_back(v, leaves[3]);
    meta.witness_locations.push_back({u, leaves[0], leaves[1], path[1]});
    meta.witness_locations.push_back({v, leaves[2], leaves[3], path[path.size() - 2]});
    meta.structures.push_back({StructureKind::WitnessGadget, t, static_cast<std::int64_t>(idx), std::move(leaves)});
  }
  auto rest = pool.take(pool.left());
  if (!rest.empty()) meta.structures.push_back({StructureKind::Isolated, -1, 0, std::move(rest)});
  meta.note("witnesses", std::to_string(bt));
  return {GraphInstance(n, edges, std::move(meta)), ClawScale{t}};
}

}  // namespace qsep
