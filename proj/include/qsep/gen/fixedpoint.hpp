#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsep/gen/hspec.hpp"
#include "qsep/gen/multiscale.hpp"
#include "qsep/primes.hpp"

namespace qsep {

struct FixedPointParams {
  double alpha = 0.125;
  // Number N of prime-tagged cycles. Empty: as many as fit into n with every
  // prime at the window's low end, or alpha*n^{1/4}/log2(n) when
  // alpha_cycle_count is set.
  std::optional<std::uint32_t> cycles;
  bool alpha_cycle_count = false;
  std::optional<std::uint64_t> cycle_len;   // default n^{3/4}
  std::optional<std::uint64_t> feeder_len;  // default n^{1/4}
  std::optional<double> prime_lo;           // default n^{1/4}/4
  std::optional<double> prime_hi;           // default n^{1/4}/2
  bool widen_window = false;                // grow prime_hi by 1.25x until N primes exist
};

struct FixedPointLayout {
  std::uint64_t cycle_len;
  std::uint64_t feeder_len;
  double lo;
  double hi;
  std::uint32_t cycles;
  std::vector<std::uint64_t> window;  // primes in (lo, hi)
  bool widened = false;
};

inline FixedPointLayout plan_fixedpoint(std::uint32_t n, const FixedPointParams& p, const HSpec& h) {
  if (!h.is_function()) throw ParameterError("fixed-point construction needs a function pattern");
  const double root4 = std::pow(static_cast<double>(n), 0.25);
  FixedPointLayout L;
  L.cycle_len = p.cycle_len ? *p.cycle_len : static_cast<std::uint64_t>(std::llround(std::pow(double(n), 0.75)));
  L.feeder_len = p.feeder_len ? *p.feeder_len : static_cast<std::uint64_t>(std::llround(root4));
  L.lo = p.prime_lo ? *p.prime_lo : root4 / 4;
  L.hi = p.prime_hi ? *p.prime_hi : root4 / 2;
  if (L.cycle_len < 2 || L.feeder_len < 1) throw ParameterError("cycle_len must be >= 2 and feeder_len >= 1");
  if (!(L.lo >= 1 && L.lo < L.hi)) throw ParameterError("prime window must satisfy 1 <= lo < hi");

  const std::uint32_t T = h.entries();
  const std::uint64_t fresh = h.kind == HSpec::Kind::KCollision ? 1 : 0;
  if (p.cycles) {
    L.cycles = *p.cycles;
  } else if (p.alpha_cycle_count) {
    L.cycles = static_cast<std::uint32_t>(std::floor(p.alpha * root4 / std::log2(double(n))));
  } else {
    const double worst_p = std::max(2.0, std::floor(L.lo) + 1);
    const double mass = L.cycle_len + std::floor(L.cycle_len / worst_p) * L.feeder_len;
    L.cycles = static_cast<std::uint32_t>(std::max(0.0, std::floor((n - fresh) / mass)));
  }
  if (T > L.cycles) {
    throw ParameterError("pattern needs " + std::to_string(T) + " host cycles but N = " + std::to_string(L.cycles));
  }

  auto window = [&](double hi) {
    return primes_in_range(static_cast<std::uint64_t>(std::floor(L.lo)), static_cast<std::uint64_t>(std::ceil(hi)));
  };
  L.window = window(L.hi);
  if (L.window.size() < L.cycles) {
    if (!p.widen_window) {
      throw ParameterError("prime window (" + std::to_string(L.lo) + ", " + std::to_string(L.hi) + ") holds " +
                           std::to_string(L.window.size()) + " primes, " + std::to_string(L.cycles) +
                           " needed; enable window widening or lower N");
    }
    while (L.window.size() < L.cycles) {
      L.hi *= 1.25;
      L.window = window(L.hi);
    }
    L.widened = true;
  }
  return L;
}

// Prime-spaced fixed-point construction. N cycles, cycle i of length a
// multiple of its prime p_i near cycle_len, with a feeder path entering every
// p_i-th cycle element. T host cycles (distinct) are cut at a uniformly chosen
// element x_k and the pattern is attached to x_1..x_T. Leftover elements form
// plain cycles, so no stray fixed point exists.
inline FunctionBundle gen_fixedpoint_function(std::uint32_t n, const FixedPointParams& params, const HSpec& h,
                                              std::uint64_t seed) {
  const FixedPointLayout L = plan_fixedpoint(n, params, h);
  Rng rng(seed);

  std::vector<std::uint64_t> primes = L.window;
  rng.shuffle(primes);
  primes.resize(L.cycles);

  const std::uint64_t fresh = h.kind == HSpec::Kind::KCollision ? 1 : 0;
  std::vector<std::uint64_t> lens(L.cycles);
  std::uint64_t need = fresh;
  for (std::uint32_t i = 0; i < L.cycles; ++i) {
    lens[i] = std::max(primes[i], L.cycle_len / primes[i] * primes[i]);
    need += lens[i] + lens[i] / primes[i] * L.feeder_len;
  }
  if (need > n) {
    throw CapacityError("capacity: cycles plus feeders need " + std::to_string(need) + " elements, n = " +
                        std::to_string(n));
  }

  detail::ElementPool pool(n, rng);
  std::vector<Element> succ(n);
  StructureMeta meta;
  meta.note("prime-window", "(" + std::to_string(L.lo) + ", " + std::to_string(L.hi) + ")");
  if (L.widened) meta.note("prime-window-widened", "true");
  meta.note("cycles", std::to_string(L.cycles));

  std::vector<std::size_t> cycle_index(L.cycles);
  std::vector<std::size_t> feeder_structs;
  for (std::uint32_t i = 0; i < L.cycles; ++i) {
    auto members = pool.take(lens[i]);
    for (std::uint64_t k = 0; k < lens[i]; ++k) succ[members[k]] = members[(k + 1) % lens[i]];
    cycle_index[i] = meta.structures.size();
    meta.structures.push_back({StructureKind::Cycle, -1, static_cast<std::int64_t>(primes[i]), std::move(members)});
  }
  for (std::uint32_t i = 0; i < L.cycles; ++i) {
    for (std::uint64_t pos = 0; pos < lens[i]; pos += primes[i]) {
      const Element entry = meta.structures[cycle_index[i]].members[pos];
      auto feeder = pool.take(L.feeder_len);
      for (std::uint64_t k = 0; k + 1 < feeder.size(); ++k) succ[feeder[k]] = feeder[k + 1];
      succ[feeder.back()] = entry;
      meta.structures.push_back(
          {StructureKind::Feeder, -1, static_cast<std::int64_t>(cycle_index[i]), std::move(feeder)});
    }
  }

  // Entry points: uniform over cycle elements, conditioned on distinct cycles.
  const std::uint32_t T = h.entries();
  std::uint64_t total = 0;
  for (auto l : lens) total += l;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> entries;
  while (entries.size() < T) {
    entries.clear();
    for (std::uint32_t k = 0; k < T; ++k) {
      std::uint64_t r = rng.below(total);
      std::uint32_t c = 0;
      while (r >= lens[c]) r -= lens[c++];
      entries.emplace_back(c, r);
    }
    std::vector<std::uint32_t> cs;
    for (auto [c, r] : entries) cs.push_back(c);
    std::sort(cs.begin(), cs.end());
    if (std::adjacent_find(cs.begin(), cs.end()) != cs.end()) entries.clear();
    if (T == 0) break;
  }

  std::vector<Element> xs;
  FixedPointPrimes cert;
  for (auto [c, r] : entries) {
    auto& s = meta.structures[cycle_index[c]];
    xs.push_back(s.members[r]);
    cert.primes.push_back(primes[c]);
    // Host cycle becomes a path ending at x; keep cyclic order, rotated.
    std::rotate(s.members.begin(), s.members.begin() + static_cast<std::ptrdiff_t>(r + 1), s.members.end());
    s.kind = StructureKind::Path;
  }

  auto rest = pool.take(pool.left() - fresh);
  std::vector<Element> z;
  if (fresh) z = pool.take(1);

  // Leftovers: cycles of cycle_len, the remainder merged into the last one.
  std::vector<std::size_t> filler;
  if (rest.size() == 1) {
    // A single spare element cannot form a cycle; it becomes a one-element
    // tail into a non-entry element of the first cycle.
    std::optional<std::uint32_t> spare;
    for (std::uint32_t i = 0; i < L.cycles && !spare; ++i) {
      if (meta.structures[cycle_index[i]].kind == StructureKind::Cycle && primes[i] > 1) spare = i;
    }
    if (!spare) throw CapacityError("cannot place a single leftover element");
    succ[rest[0]] = meta.structures[cycle_index[*spare]].members[1];
    meta.structures.push_back({StructureKind::Path, -1, -1, rest});
  } else if (!rest.empty()) {
    const std::uint64_t chunks = std::max<std::uint64_t>(1, rest.size() / L.cycle_len);
    std::size_t k = 0;
    for (std::uint64_t c = 0; c < chunks; ++c) {
      const std::size_t len = c + 1 == chunks ? rest.size() - k : L.cycle_len;
      std::vector<Element> members(rest.begin() + static_cast<std::ptrdiff_t>(k),
                                   rest.begin() + static_cast<std::ptrdiff_t>(k + len));
      for (std::size_t j = 0; j < len; ++j) succ[members[j]] = members[(j + 1) % len];
      filler.push_back(meta.structures.size());
      meta.structures.push_back({StructureKind::Cycle, -1, 0, std::move(members)});
      k += len;
    }
  }

  if (h.kind == HSpec::Kind::FixedPoint) {
    succ[xs[0]] = xs[0];
    meta.witness_locations.push_back(xs);
  } else if (h.kind == HSpec::Kind::KCollision) {
    for (auto x : xs) succ[x] = z[0];
    // z continues into an element with in-degree one: a filler cycle if
    // there is one, else a non-entry element of a non-host cycle.
    std::vector<Element> targets;
    if (!filler.empty()) {
      for (auto idx : filler) {
        const auto& m = meta.structures[idx].members;
        targets.insert(targets.end(), m.begin(), m.end());
      }
    } else {
      for (std::uint32_t i = 0; i < L.cycles; ++i) {
        const auto& s = meta.structures[cycle_index[i]];
        if (s.kind != StructureKind::Cycle) continue;
        for (std::uint64_t pos = 0; pos < s.members.size(); ++pos) {
          if (pos % primes[i] != 0) targets.push_back(s.members[pos]);
        }
      }
    }
    if (targets.empty()) throw CapacityError("no element left for the collision sink to map into");
    succ[z[0]] = targets[rng.below(targets.size())];
    auto w = xs;
    w.push_back(z[0]);
    meta.witness_locations.push_back(std::move(w));
    meta.structures.push_back({StructureKind::WitnessGadget, -1, 0, z});
  }
  meta.note("H", h.str());
  return {FunctionInstance(std::move(succ), std::move(meta)), std::move(cert)};
}

}  // namespace qsep
