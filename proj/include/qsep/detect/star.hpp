#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qsep/detect/claw.hpp"
#include "qsep/detect/common.hpp"

namespace qsep {

struct StarSearchParams {
  std::uint32_t clique = 3;  // h
  double rounds = 1.0;       // sampling rounds = rounds * sqrt(n) * log2(n)
};

namespace detail {

// Looks for an h-clique containing `seed` among vertices whose full
// neighbor lists are known.
inline std::optional<std::vector<Vertex>> clique_among(
    const std::unordered_map<Vertex, std::unordered_set<Vertex>>& adj, std::uint32_t h) {
  std::vector<Vertex> verts;
  for (const auto& [v, nb] : adj) verts.push_back(v);
  std::sort(verts.begin(), verts.end());
  std::vector<Vertex> pick;
  std::function<bool(std::size_t)> grow = [&](std::size_t from) {
    if (pick.size() == h) return true;
    for (std::size_t i = from; i < verts.size(); ++i) {
      const Vertex v = verts[i];
      bool ok = true;
      for (auto u : pick) ok = ok && adj.at(u).contains(v);
      if (!ok) continue;
      pick.push_back(v);
      if (grow(i + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  if (grow(0)) return pick;
  return std::nullopt;
}

}  // namespace detail

// Finds star centers through degree-1 samples, keeps the centers whose degree
// is certified, lists their leaves and looks for the clique among leaves of
// degree > 1. Sampling stops early once every certified degree has a center.
// If those centers hold no clique the certificate is wrong; from then on every
// center found is swept.
template <GraphOracle O>
SearchOutcome cert_star_search(O& oracle, const StarDegrees& cert, const StarSearchParams& params = {},
                               const SearchOptions& opt = {}) {
  if (params.clique < 3) throw ParameterError("clique size must be >= 3");
  Metered<O> m(oracle, opt.budget);
  Rng rng(opt.seed);
  const double n = m.n();
  const auto rounds = static_cast<std::uint64_t>(std::max(1.0, std::ceil(params.rounds * std::sqrt(n) * std::log2(n))));
  std::unordered_set<std::uint32_t> wanted(cert.degrees.begin(), cert.degrees.end());
  std::uint64_t sampled = 0;
  std::unordered_set<Vertex> swept;
  auto out = guarded(m, [&](SearchOutcome& res) {
    if (wanted.empty()) return;
    std::unordered_map<Vertex, std::uint32_t> centers;
    std::unordered_set<std::uint32_t> good_degrees;
    std::unordered_map<Vertex, std::unordered_set<Vertex>> flagged;
    bool trusted = true;
    for (;;) {
      ++res.attempts;
      for (std::uint64_t r = 0; r < rounds && (!trusted || good_degrees.size() < wanted.size()); ++r) {
        ++sampled;
        const Vertex v = static_cast<Vertex>(rng.below(m.n()));
        if (m.degree(v) != 1) continue;
        const Vertex c = m.neighbor(v, 0);
        if (centers.contains(c)) continue;
        const std::uint32_t d = m.degree(c);
        centers.emplace(c, d);
        if (wanted.contains(d)) good_degrees.insert(d);
      }
      for (const auto& [c, d] : centers) {
        if ((trusted && !wanted.contains(d)) || !swept.insert(c).second) continue;
        for (std::uint32_t i = 0; i < d; ++i) {
          const Vertex leaf = m.neighbor(c, i);
          const std::uint32_t dl = m.degree(leaf);
          if (dl < 2 || flagged.contains(leaf)) continue;
          auto& nb = flagged[leaf];
          for (std::uint32_t j = 0; j < dl; ++j) nb.insert(m.neighbor(leaf, j));
        }
      }
      if (auto q = detail::clique_among(flagged, params.clique)) {
        res.status = Status::Found;
        res.witness = Witness{WitnessKind::Clique, *q};
        return;
      }
      if (good_degrees.size() >= wanted.size()) trusted = false;
    }
  });
  out.counters = {{"samples", sampled}, {"good-centers", swept.size()}};
  return out;
}

struct StarPathSearchParams {
  std::uint32_t k = 4;
};

namespace detail {

template <typename M>
class LocalView {
 public:
  explicit LocalView(M& m) : m_(m) {}
  std::uint32_t deg(Vertex v) {
    auto it = deg_.find(v);
    if (it != deg_.end()) return it->second;
    const auto d = m_.degree(v);
    deg_.emplace(v, d);
    return d;
  }
  Vertex nb(Vertex v, std::uint32_t i) {
    const std::uint64_t key = (std::uint64_t{v} << 32) | i;
    auto it = nb_.find(key);
    if (it != nb_.end()) return it->second;
    const auto u = m_.neighbor(v, i);
    nb_.emplace(key, u);
    return u;
  }
  std::vector<Vertex> all(Vertex v) {
    std::vector<Vertex> out;
    for (std::uint32_t i = 0, d = deg(v); i < d; ++i) out.push_back(nb(v, i));
    return out;
  }
  M& raw() { return m_; }

 private:
  M& m_;
  std::unordered_map<Vertex, std::uint32_t> deg_;
  std::unordered_map<std::uint64_t, Vertex> nb_;
};

struct StarFound {
  Vertex center;
};

}  // namespace detail

// Walks to the backbone, enumerates it from the pendant end, then sweeps the
// certified hanging path. Any vertex of degree >= k met on the way is the
// star. A sweep that comes back empty falls back to probing vertices without
// replacement, so the search stays correct under a wrong certificate.
template <GraphOracle O>
SearchOutcome cert_starpath_search(O& oracle, const BackboneIndex& cert, const StarPathSearchParams& params = {},
                                   const SearchOptions& opt = {}) {
  const std::uint32_t k = params.k;
  if (k < 4) throw ParameterError("star-path search needs k >= 4");
  Metered<O> m(oracle, opt.budget);
  Rng rng(opt.seed);
  detail::LocalView view(m);
  bool fell_back = false;
  auto out = guarded(m, [&](SearchOutcome& res) {
    auto check = [&](Vertex v) {
      if (view.deg(v) >= k) throw detail::StarFound{v};
    };
    // Walks along degree-2 vertices from `from` through `cur`; returns the
    // first vertex of degree != 2.
    auto walk = [&](Vertex from, Vertex cur) {
      for (;;) {
        check(cur);
        if (view.deg(cur) != 2) return cur;
        const Vertex a = view.nb(cur, 0);
        const Vertex next = a != from ? a : view.nb(cur, 1);
        from = cur;
        cur = next;
      }
    };
    try {
      ++res.attempts;
      const Vertex v = static_cast<Vertex>(rng.below(m.n()));
      check(v);
      Vertex landmark = v;
      if (view.deg(v) != 3) {
        Vertex end = view.deg(v) == 0 ? v : walk(v, view.nb(v, 0));
        if (view.deg(end) != 3 && view.deg(v) == 2) end = walk(v, view.nb(v, 1));
        landmark = end;
      }
      if (view.deg(landmark) == 3) {
        // Collect the chain of degree-3 vertices through the landmark.
        std::vector<Vertex> chain{landmark};
        std::unordered_set<Vertex> on_chain{landmark};
        auto extend = [&](bool front) {
          for (;;) {
            const Vertex tip = front ? chain.front() : chain.back();
            std::optional<Vertex> next;
            for (auto u : view.all(tip)) {
              check(u);
              if (view.deg(u) == 3 && !on_chain.contains(u)) next = u;
            }
            if (!next) return;
            on_chain.insert(*next);
            front ? (void)chain.insert(chain.begin(), *next) : chain.push_back(*next);
          }
        };
        extend(true);
        extend(false);
        // Orient so chain[0] = v_1, the vertex next to the degree-1 pendant.
        auto has_pendant = [&](Vertex c) {
          for (auto u : view.all(c)) {
            if (view.deg(u) == 1) return true;
          }
          return false;
        };
        if (!has_pendant(chain.front()) && has_pendant(chain.back())) std::reverse(chain.begin(), chain.end());
        const std::uint32_t s = static_cast<std::uint32_t>(chain.size()) + 1;
        const std::uint32_t target = cert.index;
        auto sweep_branches = [&](Vertex c, const std::unordered_set<Vertex>& skip) {
          for (auto u : view.all(c)) {
            if (skip.contains(u)) continue;
            walk(c, u);
          }
        };
        if (target >= 1 && target <= s) {
          const std::uint32_t at = std::min(target, s - 1) - 1;
          std::unordered_set<Vertex> skip(on_chain);
          if (at == 0) {
            for (auto u : view.all(chain[0])) {
              if (view.deg(u) == 1) skip.insert(u);
            }
          }
          sweep_branches(chain[at], skip);
        }
      }
      // Certificate did not lead to the star: probe every vertex.
      fell_back = true;
      SamplerWithoutReplacement sampler(m.n(), rng);
      while (!sampler.empty()) check(sampler.next());
      res.status = Status::Exhausted;
    } catch (const detail::StarFound& f) {
      res.status = Status::Found;
      res.witness = detail::star_witness(m, f.center, k);
    }
  });
  out.counters = {{"fallback", fell_back ? 1u : 0u}};
  return out;
}

}  // namespace qsep
