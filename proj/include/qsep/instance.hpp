#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qsep/errors.hpp"

namespace qsep {

using Element = std::uint32_t;
using Vertex = std::uint32_t;

enum class StructureKind { Path, Cycle, Feeder, Star, Backbone, Isolated, WitnessGadget };

inline std::string_view to_string(StructureKind k) {
  switch (k) {
    case StructureKind::Path: return "path";
    case StructureKind::Cycle: return "cycle";
    case StructureKind::Feeder: return "feeder";
    case StructureKind::Star: return "star";
    case StructureKind::Backbone: return "backbone";
    case StructureKind::Isolated: return "isolated";
    case StructureKind::WitnessGadget: return "witness-gadget";
  }
  return "?";
}

inline StructureKind structure_kind_from(std::string_view s) {
  for (auto k : {StructureKind::Path, StructureKind::Cycle, StructureKind::Feeder, StructureKind::Star,
                 StructureKind::Backbone, StructureKind::Isolated, StructureKind::WitnessGadget}) {
    if (to_string(k) == s) return k;
  }
  throw ParameterError("unknown structure kind: " + std::string(s));
}

// One generator-side structure. `scale` is the multi-scale index i (path length
// 2^i) or -1 when the structure has no scale. `tag` is kind-specific: the
// collision target position on a witness path, the prime of a feeder cycle,
// the host cycle of a feeder, the hanging-path index, the star degree.
struct Structure {
  StructureKind kind = StructureKind::Isolated;
  int scale = -1;
  std::int64_t tag = 0;
  std::vector<std::uint32_t> members;

  friend bool operator==(const Structure&, const Structure&) = default;
};

// Generator-only ground truth. Never reachable through an oracle.
struct StructureMeta {
  std::vector<Structure> structures;
  std::optional<int> good_index;
  std::vector<std::vector<std::uint32_t>> witness_locations;
  std::vector<std::pair<std::string, std::string>> notes;

  friend bool operator==(const StructureMeta&, const StructureMeta&) = default;

  void note(std::string key, std::string value) { notes.emplace_back(std::move(key), std::move(value)); }
};

// Throws DomainError unless the structures partition [0, n).
inline void check_partition(const StructureMeta& meta, std::uint32_t n) {
  std::vector<std::uint8_t> seen(n, 0);
  std::uint64_t covered = 0;
  for (const auto& s : meta.structures) {
    for (auto x : s.members) {
      if (x >= n) throw DomainError("meta member " + std::to_string(x) + " outside [0, n)");
      if (seen[x]) throw DomainError("meta structures overlap at element " + std::to_string(x));
      seen[x] = 1;
      ++covered;
    }
  }
  if (covered != n) {
    throw DomainError("meta structures cover " + std::to_string(covered) + " of " + std::to_string(n) + " elements");
  }
}

struct FunctionInstance {
  std::uint32_t n = 0;
  std::vector<Element> succ;
  std::optional<StructureMeta> meta;

  FunctionInstance() = default;
  explicit FunctionInstance(std::vector<Element> s, std::optional<StructureMeta> m = std::nullopt)
      : n(static_cast<std::uint32_t>(s.size())), succ(std::move(s)), meta(std::move(m)) {
    validate();
  }

  Element operator()(Element x) const { return succ[x]; }

  void validate() const {
    if (n == 0) throw DomainError("function instance must have n > 0");
    if (succ.size() != n) throw DomainError("succ must have exactly n entries");
    for (auto y : succ) {
      if (y >= n) throw DomainError("succ value " + std::to_string(y) + " outside [0, n)");
    }
  }
};

inline FunctionInstance identity_function(std::uint32_t n) {
  std::vector<Element> s(n);
  for (std::uint32_t i = 0; i < n; ++i) s[i] = i;
  return FunctionInstance(std::move(s));
}

// Undirected simple graph in compressed adjacency form. Neighbor lists keep
// edge insertion order; oracles impose their own per-session order on top.
class GraphInstance {
 public:
  GraphInstance() = default;

  // Builds from an undirected edge list. Rejects self-loops and duplicates.
  GraphInstance(std::uint32_t n, std::span<const std::pair<Vertex, Vertex>> edges,
                std::optional<StructureMeta> meta = std::nullopt)
      : meta(std::move(meta)), n_(n) {
    if (n == 0) throw DomainError("graph instance must have n > 0");
    std::vector<std::uint32_t> deg(n, 0);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw DomainError("edge endpoint outside [0, n)");
      if (u == v) throw DomainError("self-loop at vertex " + std::to_string(u));
      ++deg[u];
      ++deg[v];
    }
    offsets_.assign(n + 1, 0);
    for (std::uint32_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
    adj_.resize(offsets_[n]);
    std::vector<std::uint64_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : edges) {
      adj_[fill[u]++] = v;
      adj_[fill[v]++] = u;
    }
    check_simple();
  }

  std::uint32_t n() const { return n_; }
  std::uint32_t degree(Vertex v) const { return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]); }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::uint64_t edge_count() const { return adj_.size() / 2; }

  bool adjacent(Vertex u, Vertex v) const {
    auto a = neighbors(degree(u) <= degree(v) ? u : v);
    Vertex other = degree(u) <= degree(v) ? v : u;
    return std::find(a.begin(), a.end(), other) != a.end();
  }

  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edge_count());
    for (Vertex u = 0; u < n_; ++u) {
      for (auto v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  friend bool operator==(const GraphInstance& a, const GraphInstance& b) {
    return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.adj_ == b.adj_ && a.meta == b.meta;
  }

  const std::vector<std::uint64_t>& offsets() const { return offsets_; }
  const std::vector<Vertex>& adjacency() const { return adj_; }

  // Raw constructor from CSR arrays (used by relabeling and file IO).
  static GraphInstance from_csr(std::uint32_t n, std::vector<std::uint64_t> offsets, std::vector<Vertex> adj,
                                std::optional<StructureMeta> meta) {
    GraphInstance g;
    g.n_ = n;
    g.offsets_ = std::move(offsets);
    g.adj_ = std::move(adj);
    g.meta = std::move(meta);
    if (n == 0 || g.offsets_.size() != static_cast<std::size_t>(n) + 1 || g.offsets_.front() != 0 ||
        g.offsets_.back() != g.adj_.size()) {
      throw DomainError("malformed adjacency arrays");
    }
    for (auto v : g.adj_) {
      if (v >= n) throw DomainError("neighbor outside [0, n)");
    }
    g.check_simple();
    g.check_symmetric();
    return g;
  }

  std::optional<StructureMeta> meta;

 private:
  void check_simple() const {
    std::vector<std::uint32_t> mark(n_, UINT32_MAX);
    for (Vertex v = 0; v < n_; ++v) {
      for (auto u : neighbors(v)) {
        if (u == v) throw DomainError("self-loop at vertex " + std::to_string(v));
        if (mark[u] == v) throw DomainError("duplicate edge at vertex " + std::to_string(v));
        mark[u] = v;
      }
    }
  }

  void check_symmetric() const {
    for (Vertex v = 0; v < n_; ++v) {
      for (auto u : neighbors(v)) {
        auto back = neighbors(u);
        if (std::find(back.begin(), back.end(), v) == back.end()) {
          throw DomainError("adjacency not symmetric at edge " + std::to_string(v) + "-" + std::to_string(u));
        }
      }
    }
  }

  std::uint32_t n_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<Vertex> adj_;
};

enum class WitnessKind { Collision, KCollision, FixedPoint, Path, Claw, KStar, Wedge, Edge, Clique };

inline std::string_view to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::Collision: return "collision";
    case WitnessKind::KCollision: return "k-collision";
    case WitnessKind::FixedPoint: return "fixed-point";
    case WitnessKind::Path: return "path";
    case WitnessKind::Claw: return "claw";
    case WitnessKind::KStar: return "k-star";
    case WitnessKind::Wedge: return "wedge";
    case WitnessKind::Edge: return "edge";
    case WitnessKind::Clique: return "clique";
  }
  return "?";
}

inline WitnessKind witness_kind_from(std::string_view s) {
  for (auto k : {WitnessKind::Collision, WitnessKind::KCollision, WitnessKind::FixedPoint, WitnessKind::Path,
                 WitnessKind::Claw, WitnessKind::KStar, WitnessKind::Wedge, WitnessKind::Edge,
                 WitnessKind::Clique}) {
    if (to_string(k) == s) return k;
  }
  throw ParameterError("unknown witness kind: " + std::string(s));
}

// Vertex conventions:
//   Collision   (x, y, z)          x != y, f(x) = f(y) = z
//   KCollision  (x_1..x_k, z)      distinct x_i, all f(x_i) = z
//   FixedPoint  (x)                f(x) = x
//   Path        (x_0..x_k)         distinct, f(x_i) = x_{i+1}
//   Claw/KStar  (c, l_1..l_k)      distinct leaves, all adjacent to c
//   Wedge       (a, c, b)          a != b, both adjacent to c
//   Edge        (u, v)
//   Clique      (v_1..v_h)         pairwise adjacent
struct Witness {
  WitnessKind kind = WitnessKind::Collision;
  std::vector<std::uint32_t> vertices;

  friend bool operator==(const Witness&, const Witness&) = default;
};

namespace detail {
inline bool all_distinct(std::span<const std::uint32_t> xs) {
  std::vector<std::uint32_t> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}
}  // namespace detail

inline bool validate(const FunctionInstance& f, const Witness& w) {
  const auto& xs = w.vertices;
  for (auto x : xs) {
    if (x >= f.n) return false;
  }
  switch (w.kind) {
    case WitnessKind::Collision:
      return xs.size() == 3 && xs[0] != xs[1] && f(xs[0]) == xs[2] && f(xs[1]) == xs[2];
    case WitnessKind::KCollision: {
      if (xs.size() < 3) return false;
      std::span<const std::uint32_t> pre(xs.data(), xs.size() - 1);
      if (!detail::all_distinct(pre)) return false;
      return std::all_of(pre.begin(), pre.end(), [&](auto x) { return f(x) == xs.back(); });
    }
    case WitnessKind::FixedPoint:
      return xs.size() == 1 && f(xs[0]) == xs[0];
    case WitnessKind::Path: {
      if (xs.size() < 2 || !detail::all_distinct(xs)) return false;
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (f(xs[i]) != xs[i + 1]) return false;
      }
      return true;
    }
    default:
      return false;
  }
}

inline bool validate(const GraphInstance& g, const Witness& w) {
  const auto& xs = w.vertices;
  for (auto x : xs) {
    if (x >= g.n()) return false;
  }
  switch (w.kind) {
    case WitnessKind::Claw:
    case WitnessKind::KStar: {
      if (xs.size() < 2 || (w.kind == WitnessKind::Claw && xs.size() != 4)) return false;
      if (!detail::all_distinct(xs)) return false;
      for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!g.adjacent(xs[0], xs[i])) return false;
      }
      return true;
    }
    case WitnessKind::Wedge:
      return xs.size() == 3 && detail::all_distinct(xs) && g.adjacent(xs[0], xs[1]) && g.adjacent(xs[1], xs[2]);
    case WitnessKind::Edge:
      return xs.size() == 2 && xs[0] != xs[1] && g.adjacent(xs[0], xs[1]);
    case WitnessKind::Clique: {
      if (xs.size() < 2 || !detail::all_distinct(xs)) return false;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
          if (!g.adjacent(xs[i], xs[j])) return false;
        }
      }
      return true;
    }
    default:
      return false;
  }
}

// The structural hint an informed algorithm holds.
struct CollisionScale {
  int t = 0;
  friend bool operator==(const CollisionScale&, const CollisionScale&) = default;
};
struct ClawScale {
  int t = 0;
  friend bool operator==(const ClawScale&, const ClawScale&) = default;
};
struct FixedPointPrimes {
  std::vector<std::uint64_t> primes;
  friend bool operator==(const FixedPointPrimes&, const FixedPointPrimes&) = default;
};
struct StarDegrees {
  std::vector<std::uint32_t> degrees;
  friend bool operator==(const StarDegrees&, const StarDegrees&) = default;
};
// Index of the hanging path holding the planted star center, counted from the
// pendant end of the backbone (1-based). 0 means the center is on the
// backbone or its pendant.
struct BackboneIndex {
  std::uint32_t index = 0;
  friend bool operator==(const BackboneIndex&, const BackboneIndex&) = default;
};
struct PathLength {
  std::uint32_t k = 0;
  friend bool operator==(const PathLength&, const PathLength&) = default;
};

using Certificate = std::variant<CollisionScale, ClawScale, FixedPointPrimes, StarDegrees, BackboneIndex, PathLength>;

inline std::string_view certificate_kind(const Certificate& c) {
  constexpr std::string_view names[] = {"collision-scale", "claw-scale",     "fixed-point-primes",
                                        "star-degrees",    "backbone-index", "path-length"};
  return names[c.index()];
}

}  // namespace qsep
