#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "qsep/detect/common.hpp"

namespace qsep {

namespace detail {

// Star witness from the first k neighbors of a vertex already known to have
// degree >= k.
template <typename M>
Witness star_witness(M& m, Vertex c, std::uint32_t k) {
  Witness w{k == 3 ? WitnessKind::Claw : WitnessKind::KStar, {c}};
  for (std::uint32_t i = 0; i < k; ++i) w.vertices.push_back(m.neighbor(c, i));
  return w;
}

// The neighbor of a degree-2 vertex other than `from`.
template <typename M>
Vertex other_neighbor(M& m, Vertex v, Vertex from) {
  const Vertex a = m.neighbor(v, 0);
  return a != from ? a : m.neighbor(v, 1);
}

}  // namespace detail

// Uniform start; walk along degree-2 vertices in a random direction for at
// most 2^t steps; a vertex of degree >= 3 is a claw center.
template <GraphOracle O>
SearchOutcome cert_claw_search(O& oracle, const ClawScale& cert, const SearchOptions& opt = {}) {
  if (cert.t < 0 || cert.t >= 32) throw ParameterError("claw scale out of range");
  Metered<O> m(oracle, opt.budget);
  Rng rng(opt.seed);
  const std::uint64_t cap = std::uint64_t{1} << cert.t;
  return guarded(m, [&](SearchOutcome& out) {
    for (;;) {
      ++out.attempts;
      Vertex v = static_cast<Vertex>(rng.below(m.n()));
      std::uint32_t d = m.degree(v);
      if (d >= 3) {
        out.status = Status::Found;
        out.witness = detail::star_witness(m, v, 3);
        return;
      }
      if (d == 0) continue;
      Vertex prev = v;
      Vertex cur = m.neighbor(v, d == 2 ? static_cast<std::uint32_t>(rng.coin()) : 0);
      std::unordered_set<Vertex> seen{v};
      for (std::uint64_t step = 1;; ++step) {
        if (!seen.insert(cur).second) break;
        d = m.degree(cur);
        if (d >= 3) {
          out.status = Status::Found;
          out.witness = detail::star_witness(m, cur, 3);
          return;
        }
        if (d < 2 || step >= cap) break;
        const Vertex next = detail::other_neighbor(m, cur, prev);
        prev = cur;
        cur = next;
      }
    }
  });
}

}  // namespace qsep
