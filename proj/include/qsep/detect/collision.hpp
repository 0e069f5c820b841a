#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qsep/detect/common.hpp"

namespace qsep {

namespace detail {

// One forward walk of a collision search. The walk remembers its own
// elements so it can tell cycle closure from progress; cross-walk collision
// detection is done by the caller's predecessor table.
struct ForwardWalk {
  Element current = 0;
  Element start = 0;
  std::uint64_t steps = 0;
  std::uint64_t cap = 0;
  std::unordered_set<Element> visited;

  void restart(Element s) {
    start = current = s;
    steps = 0;
    visited.clear();
    visited.insert(s);
  }
};

// Pool of forward walks with caps 2^i for i in [lo, hi], advanced one query at
// a time in strict round robin, lowest scale first.
template <typename M>
SearchOutcome walk_pool(M& m, int lo, int hi, const SearchOptions& opt) {
  Rng rng(opt.seed);
  const std::uint32_t n = m.n();
  return guarded(m, [&](SearchOutcome& out) {
    std::unordered_map<Element, Element> first_pred;
    std::vector<ForwardWalk> walks(static_cast<std::size_t>(hi - lo + 1));
    for (int i = lo; i <= hi; ++i) {
      auto& w = walks[static_cast<std::size_t>(i - lo)];
      w.cap = std::uint64_t{1} << i;
      w.restart(static_cast<Element>(rng.below(n)));
      ++out.attempts;
    }
    for (;;) {
      for (auto& w : walks) {
        const Element x = w.current;
        const Element y = m.query(x);
        auto [it, fresh] = first_pred.emplace(y, x);
        if (!fresh && it->second != x) {
          out.status = Status::Found;
          out.witness = Witness{WitnessKind::Collision, {it->second, x, y}};
          return;
        }
        ++w.steps;
        if (!w.visited.insert(y).second || w.steps >= w.cap) {
          w.restart(static_cast<Element>(rng.below(n)));
          ++out.attempts;
        } else {
          w.current = y;
        }
      }
    }
  });
}

}  // namespace detail

// Walks of length 2^t from uniform starts until a collision is certified.
template <FunctionOracle O>
SearchOutcome cert_collision_search(O& oracle, const CollisionScale& cert, const SearchOptions& opt = {}) {
  if (cert.t < 0 || cert.t >= 32) throw ParameterError("collision scale out of range");
  Metered<O> m(oracle, opt.budget);
  return detail::walk_pool(m, cert.t, cert.t, opt);
}

// Certificate-free: one walk per scale in [i_min, i_max], interleaved.
template <FunctionOracle O>
SearchOutcome multiscale_collision_search(O& oracle, int i_min, int i_max, const SearchOptions& opt = {}) {
  if (i_min < 0 || i_min > i_max || i_max >= 32) throw ParameterError("bad scale range");
  Metered<O> m(oracle, opt.budget);
  return detail::walk_pool(m, i_min, i_max, opt);
}

struct AttemptResult {
  bool success = false;
  std::uint64_t queries = 0;
};

// A single memoryless walk of at most `cap` queries from `start`: stops on
// returning to one of its own elements; success iff that element is not the
// start (two distinct predecessors seen).
template <FunctionOracle O>
AttemptResult collision_attempt(O& oracle, Element start, std::uint64_t cap) {
  std::unordered_set<Element> visited{start};
  Element x = start;
  AttemptResult r;
  while (r.queries < cap) {
    const Element y = oracle.query(x);
    ++r.queries;
    if (!visited.insert(y).second) {
      r.success = y != start;
      return r;
    }
    x = y;
  }
  return r;
}

}  // namespace qsep
