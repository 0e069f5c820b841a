#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "qsep/detect/common.hpp"

namespace qsep {

inline constexpr std::uint32_t kBruteForceLimit = 1u << 13;

namespace detail {

inline void combinations(const std::vector<std::uint32_t>& items, std::uint32_t k,
                         const std::function<void(const std::vector<std::uint32_t>&)>& emit) {
  std::vector<std::uint32_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (pick.size() == k) {
      emit(pick);
      return;
    }
    for (std::size_t i = from; i + (k - pick.size()) <= items.size(); ++i) {
      pick.push_back(items[i]);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
}

}  // namespace detail

// Every witness of the target kind, read straight from the raw arrays.
// Collision-type targets list one witness per preimage subset; paths one per
// start; star-type targets one per center (its first k neighbors); cliques
// one per vertex set.
inline std::vector<Witness> brute_force_find(const FunctionInstance& f, const Target& target) {
  if (!target.is_function()) throw ModelMismatch("graph target on a function instance");
  std::vector<Witness> out;
  switch (target.kind) {
    case WitnessKind::FixedPoint:
      for (Element x = 0; x < f.n; ++x) {
        if (f(x) == x) out.push_back({WitnessKind::FixedPoint, {x}});
      }
      break;
    case WitnessKind::Collision:
    case WitnessKind::KCollision: {
      if (target.kind == WitnessKind::KCollision && f.n > kBruteForceLimit) {
        throw ParameterError("brute force limited to n <= 8192");
      }
      std::vector<std::vector<Element>> pre(f.n);
      for (Element x = 0; x < f.n; ++x) pre[f(x)].push_back(x);
      for (Element z = 0; z < f.n; ++z) {
        if (pre[z].size() < target.size) continue;
        detail::combinations(pre[z], target.size, [&](const std::vector<std::uint32_t>& xs) {
          Witness w{target.kind, xs};
          w.vertices.push_back(z);
          out.push_back(std::move(w));
        });
      }
      break;
    }
    case WitnessKind::Path: {
      std::unordered_set<Element> seen;
      for (Element x = 0; x < f.n; ++x) {
        std::vector<Element> p{x};
        seen.clear();
        seen.insert(x);
        Element y = x;
        while (p.size() <= target.size) {
          y = f(y);
          if (!seen.insert(y).second) break;
          p.push_back(y);
        }
        if (p.size() == target.size + 1) out.push_back({WitnessKind::Path, std::move(p)});
      }
      break;
    }
    default:
      break;
  }
  return out;
}

inline std::vector<Witness> brute_force_find(const GraphInstance& g, const Target& target) {
  if (target.is_function()) throw ModelMismatch("function target on a graph instance");
  std::vector<Witness> out;
  const std::uint32_t n = g.n();
  switch (target.kind) {
    case WitnessKind::Edge:
      for (auto [u, v] : g.edges()) out.push_back({WitnessKind::Edge, {u, v}});
      break;
    case WitnessKind::Wedge:
    case WitnessKind::Claw:
    case WitnessKind::KStar:
      for (Vertex c = 0; c < n; ++c) {
        const auto nb = g.neighbors(c);
        if (nb.size() < target.size) continue;
        Witness w{target.kind, {}};
        if (target.kind == WitnessKind::Wedge) {
          w.vertices = {nb[0], c, nb[1]};
        } else {
          w.vertices.push_back(c);
          w.vertices.insert(w.vertices.end(), nb.begin(), nb.begin() + target.size);
        }
        out.push_back(std::move(w));
      }
      break;
    case WitnessKind::Clique: {
      if (n > kBruteForceLimit) throw ParameterError("brute force limited to n <= 8192");
      // Cliques as increasing vertex sequences over the forward adjacency.
      std::vector<Vertex> pick;
      std::function<void(const std::vector<Vertex>&)> rec = [&](const std::vector<Vertex>& cand) {
        if (pick.size() == target.size) {
          out.push_back({WitnessKind::Clique, pick});
          return;
        }
        for (std::size_t i = 0; i < cand.size(); ++i) {
          const Vertex v = cand[i];
          std::vector<Vertex> next;
          for (std::size_t j = i + 1; j < cand.size(); ++j) {
            if (g.adjacent(v, cand[j])) next.push_back(cand[j]);
          }
          if (pick.size() + 1 + next.size() < target.size) continue;
          pick.push_back(v);
          rec(next);
          pick.pop_back();
        }
      };
      for (Vertex v = 0; v < n; ++v) {
        std::vector<Vertex> up;
        for (auto u : g.neighbors(v)) {
          if (u > v) up.push_back(u);
        }
        std::sort(up.begin(), up.end());
        if (up.size() + 1 < target.size) continue;
        pick = {v};
        rec(up);
      }
      break;
    }
    default:
      break;
  }
  return out;
}

}  // namespace qsep
