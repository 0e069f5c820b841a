#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qsep/errors.hpp"
#include "qsep/instance.hpp"
#include "qsep/rng.hpp"
#include "qsep/zero_array.hpp"

namespace qsep {

// Uniformly random bijection between algorithm-visible labels and internal
// labels, sampled lazily in both directions. Each new pair is drawn from the
// conditional distribution of a uniform permutation given the pairs revealed
// so far. Once three quarters of the labels are fixed the remainder is
// completed in one shuffle.
class LazyPermutation {
 public:
  LazyPermutation() = default;
  // The seed is moved to its own stream so that reusing a detector seed here
  // does not correlate the labels with the detector's draws.
  LazyPermutation(std::uint32_t n, std::uint64_t seed)
      : n_(n), rng_(derive_seed(seed, 0x72656c6162656cULL)), fwd_(n), bwd_(n) {}

  // Fixed permutation: internal = perm[visible].
  static LazyPermutation fixed(std::span<const std::uint32_t> perm) {
    LazyPermutation p(static_cast<std::uint32_t>(perm.size()), 0);
    for (std::uint32_t v = 0; v < p.n_; ++v) {
      p.fwd_[v] = perm[v] + 1;
      p.bwd_[perm[v]] = v + 1;
    }
    p.assigned_ = p.n_;
    return p;
  }

  std::uint32_t to_internal(std::uint32_t visible) {
    if (fwd_[visible] == 0) {
      std::uint32_t u;
      do {
        u = static_cast<std::uint32_t>(rng_.below(n_));
      } while (bwd_[u] != 0);
      bind(visible, u);
    }
    return fwd_[visible] - 1;
  }

  std::uint32_t to_visible(std::uint32_t internal) {
    if (bwd_[internal] == 0) {
      std::uint32_t v;
      do {
        v = static_cast<std::uint32_t>(rng_.below(n_));
      } while (fwd_[v] != 0);
      bind(v, internal);
    }
    return bwd_[internal] - 1;
  }

  std::uint32_t size() const { return n_; }
  std::uint32_t assigned() const { return assigned_; }

 private:
  void bind(std::uint32_t v, std::uint32_t u) {
    fwd_[v] = u + 1;
    bwd_[u] = v + 1;
    ++assigned_;
    if (static_cast<std::uint64_t>(assigned_) * 4 > static_cast<std::uint64_t>(n_) * 3 && assigned_ < n_) complete();
  }

  void complete() {
    std::vector<std::uint32_t> free_v, free_u;
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (fwd_[i] == 0) free_v.push_back(i);
      if (bwd_[i] == 0) free_u.push_back(i);
    }
    rng_.shuffle(free_u);
    for (std::size_t j = 0; j < free_v.size(); ++j) {
      fwd_[free_v[j]] = free_u[j] + 1;
      bwd_[free_u[j]] = free_v[j] + 1;
    }
    assigned_ = n_;
  }

  std::uint32_t n_ = 0;
  Rng rng_{0};
  ZeroArray<std::uint32_t> fwd_;
  ZeroArray<std::uint32_t> bwd_;
  std::uint32_t assigned_ = 0;
};

// Per-session neighbor ordering: the i-th neighbor an algorithm sees is a
// seeded, per-vertex uniform permutation of the stored list.
class NeighborOrdering {
 public:
  explicit NeighborOrdering(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint32_t slot(Vertex internal, std::uint32_t degree, std::uint32_t i) {
    if (degree <= 1) return i;
    const std::uint64_t h = derive_seed(seed_, internal);
    if (degree == 2) return i ^ static_cast<std::uint32_t>(h & 1);
    auto it = cache_.find(internal);
    if (it == cache_.end() || it->second.size() != degree) {
      std::vector<std::uint32_t> order(degree);
      for (std::uint32_t j = 0; j < degree; ++j) order[j] = j;
      Rng r(h);
      r.shuffle(order);
      it = cache_.insert_or_assign(internal, std::move(order)).first;
    }
    return it->second[i];
  }

 private:
  std::uint64_t seed_;
  std::unordered_map<Vertex, std::vector<std::uint32_t>> cache_;
};

enum class QueryKind : std::uint8_t { Function, Degree, Neighbor };

struct QueryRecord {
  QueryKind kind;
  std::uint32_t arg0;
  std::uint32_t arg1;
  std::uint32_t answer;

  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

// How visible labels map to internal ones.
struct Relabeling {
  enum class Mode { None, Random, Fixed } mode = Mode::None;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> perm;

  static Relabeling none() { return {}; }
  static Relabeling random(std::uint64_t seed) { return {Mode::Random, seed, {}}; }
  static Relabeling fixed(std::vector<std::uint32_t> perm) { return {Mode::Fixed, 0, std::move(perm)}; }
};

class OracleInspector;

namespace detail {

class LabelMap {
 public:
  LabelMap(std::uint32_t n, const Relabeling& r) : mode_(r.mode) {
    if (mode_ == Relabeling::Mode::Random) {
      perm_ = LazyPermutation(n, r.seed);
    } else if (mode_ == Relabeling::Mode::Fixed) {
      if (r.perm.size() != n) throw ParameterError("relabeling permutation has wrong size");
      perm_ = LazyPermutation::fixed(r.perm);
    }
  }
  std::uint32_t in(std::uint32_t v) { return mode_ == Relabeling::Mode::None ? v : perm_.to_internal(v); }
  std::uint32_t out(std::uint32_t u) { return mode_ == Relabeling::Mode::None ? u : perm_.to_visible(u); }

 private:
  Relabeling::Mode mode_;
  LazyPermutation perm_;
};

}  // namespace detail

// Query-counted black-box access to a function. The algorithm-visible surface
// is n(), query(), count(), transcript(); the relabeling and the instance are
// reachable only through OracleInspector.
class CountedFunctionOracle {
 public:
  CountedFunctionOracle(const FunctionInstance& f, Relabeling relabeling = {},
                        std::optional<std::uint64_t> budget = std::nullopt)
      : f_(&f), labels_(f.n, relabeling), budget_(budget) {}

  std::uint32_t n() const { return f_->n; }

  Element query(Element x) {
    if (x >= f_->n) throw DomainError("query_function: element " + std::to_string(x) + " outside [0, n)");
    charge();
    const Element y = labels_.out(f_->succ[labels_.in(x)]);
    transcript_.push_back({QueryKind::Function, x, 0, y});
    return y;
  }

  std::uint64_t count() const { return transcript_.size(); }
  const std::vector<QueryRecord>& transcript() const { return transcript_; }
  std::optional<std::uint64_t> budget() const { return budget_; }

 private:
  friend class OracleInspector;

  void charge() {
    if (budget_ && transcript_.size() >= *budget_) throw BudgetExhausted();
  }

  const FunctionInstance* f_;
  detail::LabelMap labels_;
  std::optional<std::uint64_t> budget_;
  std::vector<QueryRecord> transcript_;
};

// Query-counted adjacency-list access to a graph.
class CountedGraphOracle {
 public:
  CountedGraphOracle(const GraphInstance& g, Relabeling relabeling = {},
                     std::optional<std::uint64_t> budget = std::nullopt, std::uint64_t ordering_seed = 0)
      : g_(&g), labels_(g.n(), relabeling), order_(ordering_seed), budget_(budget) {}

  std::uint32_t n() const { return g_->n(); }

  std::uint32_t degree(Vertex v) {
    if (v >= g_->n()) throw DomainError("query_degree: vertex " + std::to_string(v) + " outside [0, n)");
    charge();
    const std::uint32_t d = g_->degree(labels_.in(v));
    transcript_.push_back({QueryKind::Degree, v, 0, d});
    return d;
  }

  Vertex neighbor(Vertex v, std::uint32_t i) {
    if (v >= g_->n()) throw DomainError("query_neighbor: vertex " + std::to_string(v) + " outside [0, n)");
    const Vertex u = labels_.in(v);
    const std::uint32_t d = g_->degree(u);
    if (i >= d) throw IndexError("query_neighbor: index " + std::to_string(i) + " >= degree " + std::to_string(d));
    charge();
    const Vertex w = labels_.out(g_->neighbors(u)[order_.slot(u, d, i)]);
    transcript_.push_back({QueryKind::Neighbor, v, i, w});
    return w;
  }

  std::uint64_t count() const { return transcript_.size(); }
  const std::vector<QueryRecord>& transcript() const { return transcript_; }
  std::optional<std::uint64_t> budget() const { return budget_; }

 private:
  friend class OracleInspector;

  void charge() {
    if (budget_ && transcript_.size() >= *budget_) throw BudgetExhausted();
  }

  const GraphInstance* g_;
  detail::LabelMap labels_;
  NeighborOrdering order_;
  std::optional<std::uint64_t> budget_;
  std::vector<QueryRecord> transcript_;
};

// Harness-side access to what oracles hide from algorithms.
class OracleInspector {
 public:
  static std::uint32_t internal_of(CountedFunctionOracle& o, std::uint32_t visible) { return o.labels_.in(visible); }
  static std::uint32_t internal_of(CountedGraphOracle& o, std::uint32_t visible) { return o.labels_.in(visible); }
  static std::uint32_t visible_of(CountedFunctionOracle& o, std::uint32_t internal) { return o.labels_.out(internal); }
  static std::uint32_t visible_of(CountedGraphOracle& o, std::uint32_t internal) { return o.labels_.out(internal); }

  template <typename Oracle>
  static Witness unrelabel(Oracle& o, Witness w) {
    for (auto& x : w.vertices) x = internal_of(o, x);
    return w;
  }
};

template <typename O>
concept FunctionOracle = requires(O o, const O co, Element x) {
  { co.n() } -> std::convertible_to<std::uint32_t>;
  { o.query(x) } -> std::convertible_to<Element>;
  { co.count() } -> std::convertible_to<std::uint64_t>;
};

template <typename O>
concept GraphOracle = requires(O o, const O co, Vertex v, std::uint32_t i) {
  { co.n() } -> std::convertible_to<std::uint32_t>;
  { o.degree(v) } -> std::convertible_to<std::uint32_t>;
  { o.neighbor(v, i) } -> std::convertible_to<Vertex>;
  { co.count() } -> std::convertible_to<std::uint64_t>;
};

// Conjugation of f by pi: g = pi^{-1} o f o pi, with internal = perm[visible].
// Structure (cycle type, tree shapes) is preserved. Meta members are carried
// to their new labels.
inline std::vector<std::uint32_t> inverse_permutation(std::span<const std::uint32_t> perm) {
  std::vector<std::uint32_t> inv(perm.size());
  for (std::uint32_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

namespace detail {
inline std::optional<StructureMeta> transport(const std::optional<StructureMeta>& meta,
                                              std::span<const std::uint32_t> inv) {
  if (!meta) return std::nullopt;
  StructureMeta out = *meta;
  for (auto& s : out.structures) {
    for (auto& x : s.members) x = inv[x];
  }
  for (auto& w : out.witness_locations) {
    for (auto& x : w) x = inv[x];
  }
  return out;
}
}  // namespace detail

inline FunctionInstance relabel(const FunctionInstance& f, std::span<const std::uint32_t> perm) {
  if (perm.size() != f.n) throw ParameterError("permutation size differs from n");
  const auto inv = inverse_permutation(perm);
  std::vector<Element> succ(f.n);
  for (std::uint32_t v = 0; v < f.n; ++v) succ[v] = inv[f.succ[perm[v]]];
  return FunctionInstance(std::move(succ), detail::transport(f.meta, inv));
}

// Relabeled graph: visible v has the neighbors of perm[v], mapped back. The
// per-vertex neighbor order is carried along unchanged.
inline GraphInstance relabel(const GraphInstance& g, std::span<const std::uint32_t> perm) {
  if (perm.size() != g.n()) throw ParameterError("permutation size differs from n");
  const auto inv = inverse_permutation(perm);
  std::vector<std::uint64_t> offsets(g.n() + 1, 0);
  for (std::uint32_t v = 0; v < g.n(); ++v) offsets[v + 1] = offsets[v] + g.degree(perm[v]);
  std::vector<Vertex> adj(offsets.back());
  for (std::uint32_t v = 0; v < g.n(); ++v) {
    auto src = g.neighbors(perm[v]);
    for (std::size_t j = 0; j < src.size(); ++j) adj[offsets[v] + j] = inv[src[j]];
  }
  return GraphInstance::from_csr(g.n(), std::move(offsets), std::move(adj), detail::transport(g.meta, inv));
}

inline FunctionInstance relabel(const FunctionInstance& f, std::uint64_t seed) {
  Rng rng(seed);
  return relabel(f, random_permutation(f.n, rng));
}

inline GraphInstance relabel(const GraphInstance& g, std::uint64_t seed) {
  Rng rng(seed);
  return relabel(g, random_permutation(g.n(), rng));
}

}  // namespace qsep
