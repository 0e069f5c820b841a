#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qsep/gen/multiscale.hpp"
#include "qsep/oracle.hpp"

namespace qsep {

enum class Color : std::uint8_t { Black, Red, Blue };

struct TraceRecord {
  std::uint64_t step;
  QueryKind kind;
  std::uint32_t arg0;
  std::uint32_t arg1;
  std::uint32_t answer;
  std::string event;  // empty, or ';'-joined red-heads:i / red-tails:i / blue:i
  std::uint32_t alive;
  bool resolved;
};

// Online version of the claw distribution. Paths of every scale are laid out
// up front; each scale keeps b_i red path sets and a blue pool is reserved.
// The good index is decided only when the algorithm touches a red or blue
// vertex: at a red end of scale i, heads with probability 1/|I| makes i good,
// tails removes i from I; a blue vertex makes a uniform member of I good.
// A vertex is touched when it is the subject of a query or returned as a
// neighbor.
class AdversarySession {
 public:
  AdversarySession(std::uint32_t n, const ScaleParams& params, std::uint64_t seed, std::uint64_t ordering_seed = 0)
      : n_(n), plan_(plan_scales(n, params, LayoutModel::Claw)), rng_(seed), order_(ordering_seed), ordering_seed_(ordering_seed), color_(n) {
    detail::ElementPool pool(n, rng_);
    blue_ = pool.take(plan_.blue_pool());
    for (auto v : blue_) color_[v] = Color::Blue;

    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(plan_.path_elements());
    scale_of_.assign(n, -1);
    for (int i = plan_.i_min; i <= plan_.i_max; ++i) {
      alive_.push_back(i);
      const std::uint64_t len = std::uint64_t{1} << i;
      const std::uint64_t a = plan_.a_at(i);
      std::vector<std::uint8_t> red(a, 0);
      for (auto j : rng_.sample_distinct(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(plan_.b_at(i)))) red[j] = 1;
      auto& reds = red_paths_[i];
      for (std::uint64_t j = 0; j < a; ++j) {
        auto members = pool.take(len);
        for (std::uint64_t k = 0; k + 1 < len; ++k) edges.emplace_back(members[k], members[k + 1]);
        if (red[j]) {
          reds.emplace_back(members.front(), members.back());
          color_[members.front()] = color_[members.back()] = Color::Red;
          scale_of_[members.front()] = scale_of_[members.back()] = i;
        }
        paths_.push_back({StructureKind::Path, i, 0, std::move(members)});
      }
    }
    isolated_ = pool.take(pool.left());
    base_ = GraphInstance(n, edges);
    base_edges_ = std::move(edges);
  }

  std::uint32_t n() const { return n_; }
  std::uint64_t count() const { return transcript_.size(); }
  const std::vector<QueryRecord>& transcript() const { return transcript_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }

  std::uint32_t degree(Vertex v) {
    if (v >= n_) throw DomainError("query_degree: vertex " + std::to_string(v) + " outside [0, n)");
    std::string event;
    touch(v, event);
    const std::uint32_t d = full_degree(v);
    record({QueryKind::Degree, v, 0, d}, std::move(event));
    return d;
  }

  Vertex neighbor(Vertex v, std::uint32_t i) {
    if (v >= n_) throw DomainError("query_neighbor: vertex " + std::to_string(v) + " outside [0, n)");
    std::string event;
    touch(v, event);
    const std::uint32_t d = full_degree(v);
    if (i >= d) throw IndexError("query_neighbor: index " + std::to_string(i) + " >= degree " + std::to_string(d));
    const std::uint32_t slot = order_.slot(v, d, i);
    const std::uint32_t base_d = base_.degree(v);
    const Vertex w = slot < base_d ? base_.neighbors(v)[slot] : extra_.at(v)[slot - base_d];
    touch(w, event);
    record({QueryKind::Neighbor, v, i, w}, std::move(event));
    return w;
  }

  // Completes the construction (drawing the good index from I if needed) and
  // returns the full graph. Idempotent.
  const GraphInstance& finalize() {
    if (!good_) resolve(alive_[rng_.below(alive_.size())]);
    if (!final_) build_final();
    return *final_;
  }

  bool resolved() const { return good_.has_value(); }
  std::optional<int> good_index() const { return good_; }
  const std::vector<int>& candidates() const { return alive_; }
  Color color(Vertex v) const { return good_ ? Color::Black : color_[v]; }
  const ScalePlan& plan() const { return plan_; }
  std::uint64_t ordering_seed() const { return ordering_seed_; }
  // Scale of a red path end, -1 for any other vertex.
  int red_scale(Vertex v) const { return color(v) == Color::Red ? scale_of_[v] : -1; }

 private:
  std::uint32_t full_degree(Vertex v) const {
    auto it = extra_.find(v);
    return base_.degree(v) + (it == extra_.end() ? 0 : static_cast<std::uint32_t>(it->second.size()));
  }

  void touch(Vertex v, std::string& event) {
    if (good_) return;
    auto add = [&](std::string e) {
      if (!event.empty()) event += ';';
      event += e;
    };
    if (color_[v] == Color::Red) {
      const int i = scale_of_[v];
      if (rng_.chance(1, alive_.size())) {
        add("red-heads:" + std::to_string(i));
        resolve(i);
      } else {
        add("red-tails:" + std::to_string(i));
        for (auto [a, b] : red_paths_[i]) color_[a] = color_[b] = Color::Black;
        alive_.erase(std::find(alive_.begin(), alive_.end(), i));
      }
    } else if (color_[v] == Color::Blue) {
      const int i = alive_[rng_.below(alive_.size())];
      add("blue:" + std::to_string(i));
      resolve(i);
    }
  }

  void resolve(int i) {
    good_ = i;
    const auto& reds = red_paths_[i];
    auto pick = rng_.sample_distinct(static_cast<std::uint32_t>(blue_.size()), static_cast<std::uint32_t>(4 * reds.size()));
    std::size_t k = 0;
    for (auto [u, v] : reds) {
      for (Vertex end : {u, v}) {
        for (int j = 0; j < 2; ++j) {
          const Vertex leaf = blue_[pick[k++]];
          extra_[end].push_back(leaf);
          extra_[leaf].push_back(end);
          leaf_edges_.emplace_back(end, leaf);
        }
      }
    }
  }

  void record(QueryRecord q, std::string event) {
    transcript_.push_back(q);
    trace_.push_back({transcript_.size(), q.kind, q.arg0, q.arg1, q.answer, std::move(event),
                      static_cast<std::uint32_t>(alive_.size()), good_.has_value()});
  }

  void build_final() {
    auto edges = base_edges_;
    edges.insert(edges.end(), leaf_edges_.begin(), leaf_edges_.end());
    StructureMeta meta;
    meta.good_index = good_;
    std::vector<std::uint8_t> used(n_, 0);
    std::unordered_map<Vertex, std::size_t> path_of_end;
    for (auto& p : paths_) {
      auto s = p;
      for (auto x : s.members) used[x] = 1;
      if (s.scale == *good_ && color_[s.members.front()] == Color::Red) {
        s.tag = 1;
        path_of_end[s.members.front()] = meta.structures.size();
      }
      meta.structures.push_back(std::move(s));
    }
    for (auto [u, v] : red_paths_[*good_]) {
      std::vector<std::uint32_t> leaves = extra_.at(u);
      leaves.insert(leaves.end(), extra_.at(v).begin(), extra_.at(v).end());
      for (auto x : leaves) used[x] = 1;
      const auto idx = path_of_end.at(u);
      const auto& path = meta.structures[idx].members;
      meta.witness_locations.push_back({u, leaves[0], leaves[1], path[1]});
      meta.witness_locations.push_back({v, leaves[2], leaves[3], path[path.size() - 2]});
      meta.structures.push_back({StructureKind::WitnessGadget, *good_, static_cast<std::int64_t>(idx), std::move(leaves)});
    }
    std::vector<std::uint32_t> rest;
    for (Vertex v = 0; v < n_; ++v) {
      if (!used[v]) rest.push_back(v);
    }
    if (!rest.empty()) meta.structures.push_back({StructureKind::Isolated, -1, 0, std::move(rest)});
    final_ = GraphInstance(n_, edges, std::move(meta));
  }

  std::uint32_t n_;
  ScalePlan plan_;
  Rng rng_;
  NeighborOrdering order_;
  std::uint64_t ordering_seed_;
  std::vector<Color> color_;
  std::vector<int> scale_of_;
  std::vector<Vertex> blue_;
  std::vector<Vertex> isolated_;
  std::unordered_map<int, std::vector<std::pair<Vertex, Vertex>>> red_paths_;
  std::vector<Structure> paths_;
  GraphInstance base_;
  std::vector<std::pair<Vertex, Vertex>> base_edges_;
  std::vector<int> alive_;
  std::optional<int> good_;
  std::unordered_map<Vertex, std::vector<Vertex>> extra_;
  std::vector<std::pair<Vertex, Vertex>> leaf_edges_;
  std::optional<GraphInstance> final_;
  std::vector<QueryRecord> transcript_;
  std::vector<TraceRecord> trace_;
};

inline AdversarySession gen_online_claw_session(std::uint32_t n, const ScaleParams& params, std::uint64_t seed) {
  return AdversarySession(n, params, seed, derive_seed(seed, 0x6f72646572ULL));
}

}  // namespace qsep
