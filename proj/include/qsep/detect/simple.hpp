#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qsep/detect/claw.hpp"
#include "qsep/detect/common.hpp"
#include "qsep/detect/star.hpp"

namespace qsep {

// Uniform starts without replacement; k forward steps; success iff the k+1
// elements are distinct.
template <FunctionOracle O>
SearchOutcome path_k_search(O& oracle, std::uint32_t k, const SearchOptions& opt = {}) {
  if (k == 0) throw ParameterError("path length k must be >= 1");
  Metered<O> m(oracle, opt.budget);
  Rng rng(opt.seed);
  return guarded(m, [&](SearchOutcome& out) {
    SamplerWithoutReplacement starts(m.n(), rng);
    std::unordered_set<Element> seen;
    while (!starts.empty()) {
      ++out.attempts;
      Element x = starts.next();
      std::vector<Element> path{x};
      seen.clear();
      seen.insert(x);
      while (path.size() <= k) {
        x = m.query(x);
        if (!seen.insert(x).second) break;
        path.push_back(x);
      }
      if (path.size() == k + 1) {
        out.status = Status::Found;
        out.witness = Witness{WitnessKind::Path, std::move(path)};
        return;
      }
    }
    out.status = Status::Exhausted;
  });
}

// Uniform vertex; edge: any neighbor; wedge: two neighbors, or a degree-1
// vertex whose neighbor has another neighbor. Exhausted once every vertex has
// been sampled.
template <GraphOracle O>
SearchOutcome edge_wedge_search(O& oracle, Target target, const SearchOptions& opt = {}) {
  if (target.kind != WitnessKind::Edge && target.kind != WitnessKind::Wedge) {
    throw ParameterError("edge_wedge_search targets edge or wedge");
  }
  Metered<O> m(oracle, opt.budget);
  Rng rng(opt.seed);
  return guarded(m, [&](SearchOutcome& out) {
    std::vector<std::uint8_t> sampled(m.n(), 0);
    std::uint32_t distinct = 0;
    while (distinct < m.n()) {
      ++out.attempts;
      const Vertex u = static_cast<Vertex>(rng.below(m.n()));
      distinct += sampled[u] == 0;
      sampled[u] = 1;
      const std::uint32_t d = m.degree(u);
      if (d == 0) continue;
      if (target.kind == WitnessKind::Edge) {
        out.status = Status::Found;
        out.witness = Witness{WitnessKind::Edge, {u, m.neighbor(u, 0)}};
        return;
      }
      if (d >= 2) {
        out.status = Status::Found;
        out.witness = Witness{WitnessKind::Wedge, {m.neighbor(u, 0), u, m.neighbor(u, 1)}};
        return;
      }
      const Vertex w = m.neighbor(u, 0);
      if (m.degree(w) >= 2) {
        out.status = Status::Found;
        out.witness = Witness{WitnessKind::Wedge, {u, w, detail::other_neighbor(m, w, u)}};
        return;
      }
    }
    out.status = Status::Exhausted;
  });
}

struct ProbeParams {
  // Clique target: vertices of degree above this are not expanded.
  std::uint32_t local_degree_cap = 0;  // 0: 2h
};

// Certificate-free baseline: probe vertices/elements uniformly without
// replacement with an O(1) local check around each probe.
template <typename O>
SearchOutcome uniform_probe_baseline(O& oracle, Target target, const SearchOptions& opt = {},
                                     const ProbeParams& params = {}) {
  Metered<O> m(oracle, opt.budget);
  Rng rng(opt.seed);
  if constexpr (FunctionOracle<O>) {
    if (!target.is_function()) throw ModelMismatch("graph target on a function oracle");
    if (target.kind == WitnessKind::Path) return path_k_search(oracle, target.size, opt);
    return guarded(m, [&](SearchOutcome& out) {
      SamplerWithoutReplacement probes(m.n(), rng);
      ObservedFunction obs;
      while (!probes.empty()) {
        ++out.attempts;
        const Element x = probes.next();
        const Element y = m.query(x);
        const std::size_t pre = obs.record(x, y);
        if (target.kind == WitnessKind::FixedPoint && y == x) {
          out.status = Status::Found;
          out.witness = Witness{WitnessKind::FixedPoint, {x}};
          return;
        }
        if (target.kind != WitnessKind::FixedPoint && pre >= target.size) {
          const auto& xs = obs.preimages(y);
          Witness w{target.kind, {xs.begin(), xs.begin() + target.size}};
          w.vertices.push_back(y);
          out.status = Status::Found;
          out.witness = std::move(w);
          return;
        }
      }
      out.status = Status::Exhausted;
    });
  } else {
    static_assert(GraphOracle<O>, "oracle must model FunctionOracle or GraphOracle");
    if (target.is_function()) throw ModelMismatch("function target on a graph oracle");
    if (target.kind == WitnessKind::Edge || target.kind == WitnessKind::Wedge) {
      return edge_wedge_search(oracle, target, opt);
    }
    const std::uint32_t cap = params.local_degree_cap ? params.local_degree_cap : 2 * target.size;
    return guarded(m, [&](SearchOutcome& out) {
      SamplerWithoutReplacement probes(m.n(), rng);
      while (!probes.empty()) {
        ++out.attempts;
        const Vertex v = probes.next();
        const std::uint32_t d = m.degree(v);
        if (target.kind == WitnessKind::Claw || target.kind == WitnessKind::KStar) {
          if (d >= target.size) {
            out.status = Status::Found;
            out.witness = detail::star_witness(m, v, target.size);
            return;
          }
          continue;
        }
        // Clique: expand low-degree probes and their low-degree neighbors.
        if (d + 1 < target.size || d > cap) continue;
        std::unordered_map<Vertex, std::unordered_set<Vertex>> adj;
        auto& mine = adj[v];
        std::vector<Vertex> around;
        for (std::uint32_t i = 0; i < d; ++i) around.push_back(m.neighbor(v, i));
        mine.insert(around.begin(), around.end());
        for (auto u : around) {
          const std::uint32_t du = m.degree(u);
          if (du + 1 < target.size || du > cap) continue;
          auto& nb = adj[u];
          for (std::uint32_t j = 0; j < du; ++j) nb.insert(m.neighbor(u, j));
        }
        if (auto q = detail::clique_among(adj, target.size)) {
          out.status = Status::Found;
          out.witness = Witness{WitnessKind::Clique, *q};
          return;
        }
      }
      out.status = Status::Exhausted;
    });
  }
}

}  // namespace qsep
