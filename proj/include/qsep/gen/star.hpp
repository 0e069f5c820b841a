#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qsep/gen/hspec.hpp"
#include "qsep/gen/multiscale.hpp"

namespace qsep {

inline std::uint32_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return static_cast<std::uint32_t>(r);
}

namespace detail {

// s distinct degrees in [lo, hi] summing to target: a uniform random subset,
// then the largest degrees with room above are raised (or the smallest with
// room below lowered) until the sum matches.
inline std::vector<std::uint32_t> distinct_degrees(std::uint32_t s, std::uint32_t lo, std::uint32_t hi,
                                                   std::uint64_t target, Rng& rng) {
  const std::uint32_t width = hi - lo + 1;
  auto picks = rng.sample_distinct(width, s);
  std::vector<std::uint8_t> used(width, 0);
  std::uint64_t sum = 0;
  for (auto x : picks) {
    used[x] = 1;
    sum += lo + x;
  }
  while (sum < target) {
    // Highest occupied slot with a free slot directly above it.
    std::int64_t x = width - 2;
    while (x >= 0 && !(used[x] && !used[x + 1])) --x;
    std::uint32_t top = static_cast<std::uint32_t>(x) + 1;
    while (top + 1 < width && !used[top + 1]) ++top;
    const std::uint64_t step = std::min<std::uint64_t>(top - x, target - sum);
    used[x] = 0;
    used[x + step] = 1;
    sum += step;
  }
  while (sum > target) {
    std::uint32_t x = 1;
    while (x < width && !(used[x] && !used[x - 1])) ++x;
    std::int64_t bottom = static_cast<std::int64_t>(x) - 1;
    while (bottom > 0 && !used[bottom - 1]) --bottom;
    const std::uint64_t step = std::min<std::uint64_t>(x - bottom, sum - target);
    used[x] = 0;
    used[x - step] = 1;
    sum -= step;
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = 0; x < width; ++x) {
    if (used[x]) out.push_back(lo + x);
  }
  rng.shuffle(out);
  return out;
}

}  // namespace detail

// floor(sqrt n) stars with pairwise distinct degrees in [sqrt(n)/4, 3 sqrt(n)/2]
// covering all vertices; H leaves from distinct stars are joined into a clique.
inline GraphBundle gen_star_graph(std::uint32_t n, const HSpec& h, std::uint64_t seed) {
  if (h.kind != HSpec::Kind::Clique && h.kind != HSpec::Kind::None) {
    throw ParameterError("star construction plants a clique or nothing");
  }
  const std::uint32_t s = isqrt(n);
  const double root = std::sqrt(static_cast<double>(n));
  const auto lo = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::ceil(root / 4)));
  const auto hi = static_cast<std::uint32_t>(std::floor(3 * root / 2));
  const std::uint64_t target = n - s;
  if (s < 2 || hi < lo || hi - lo + 1 < s) throw ParameterError("n too small for distinct star degrees");
  std::uint64_t min_sum = 0, max_sum = 0;
  for (std::uint32_t j = 0; j < s; ++j) {
    min_sum += lo + j;
    max_sum += hi - j;
  }
  if (target < min_sum || target > max_sum) {
    throw ParameterError("no " + std::to_string(s) + " distinct degrees in [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "] sum to " + std::to_string(target));
  }
  if (h.size > s) throw ParameterError("clique larger than the number of stars");

  Rng rng(seed);
  auto degrees = detail::distinct_degrees(s, lo, hi, target, rng);
  detail::ElementPool pool(n, rng);
  auto centers = pool.take(s);

  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(target + std::uint64_t{h.size} * h.size / 2);
  StructureMeta meta;
  std::vector<std::uint32_t> star_of(n, 0);
  for (std::uint32_t j = 0; j < s; ++j) {
    auto leaves = pool.take(degrees[j]);
    std::vector<std::uint32_t> members{centers[j]};
    for (auto l : leaves) {
      edges.emplace_back(centers[j], l);
      star_of[l] = j;
      members.push_back(l);
    }
    meta.structures.push_back({StructureKind::Star, -1, degrees[j], std::move(members)});
  }

  StarDegrees cert;
  if (h.kind == HSpec::Kind::Clique) {
    std::vector<Vertex> clique;
    std::vector<std::uint32_t> hosts;
    while (clique.size() < h.size) {
      clique.clear();
      hosts.clear();
      for (std::uint32_t k = 0; k < h.size; ++k) {
        // Uniform leaf: the leaves are exactly the non-center positions.
        const auto& st = meta.structures;
        std::uint64_t r = rng.below(target);
        std::uint32_t j = 0;
        while (r >= degrees[j]) r -= degrees[j++];
        clique.push_back(st[j].members[r + 1]);
        hosts.push_back(j);
      }
      auto sorted = hosts;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) clique.clear();
    }
    for (std::size_t a = 0; a < clique.size(); ++a) {
      for (std::size_t b = a + 1; b < clique.size(); ++b) edges.emplace_back(clique[a], clique[b]);
    }
    for (auto j : hosts) cert.degrees.push_back(degrees[j]);
    std::sort(cert.degrees.begin(), cert.degrees.end());
    meta.witness_locations.push_back(clique);
  }
  meta.note("H", h.str());
  meta.note("degree-window", "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return {GraphInstance(n, edges, std::move(meta)), std::move(cert)};
}

// Backbone v_1..v_s (s = floor(sqrt n)) with pendant v_0 on v_1; hanging path
// P_i below v_i, lengths split so the total is n; a uniform vertex u (outside
// the k fresh leaves) gains k pendant leaves.
inline GraphBundle gen_starpath_graph(std::uint32_t n, std::uint32_t k, std::uint64_t seed) {
  if (k < 4) throw ParameterError("star-path construction needs k >= 4");
  const std::uint32_t s = isqrt(n);
  if (s < 3 || std::uint64_t{n} < 1 + 2 * std::uint64_t{s} + k) throw ParameterError("n too small for star-path layout");
  const std::uint64_t hanging = n - 1 - s - k;

  Rng rng(seed);
  detail::ElementPool pool(n, rng);
  const Vertex v0 = pool.take(1)[0];
  auto backbone = pool.take(s);
  auto leaves = pool.take(k);

  std::vector<std::uint64_t> sizes(s, hanging / s);
  for (auto j : rng.sample_distinct(s, static_cast<std::uint32_t>(hanging % s))) ++sizes[j];

  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(n + k);
  StructureMeta meta;
  edges.emplace_back(v0, backbone[0]);
  for (std::uint32_t i = 0; i + 1 < s; ++i) edges.emplace_back(backbone[i], backbone[i + 1]);
  std::vector<std::uint32_t> bb{v0};
  bb.insert(bb.end(), backbone.begin(), backbone.end());
  meta.structures.push_back({StructureKind::Backbone, -1, 0, std::move(bb)});

  std::vector<std::uint32_t> hang_of(n, 0);
  for (std::uint32_t i = 0; i < s; ++i) {
    auto path = pool.take(sizes[i]);
    edges.emplace_back(backbone[i], path[0]);
    for (std::size_t j = 0; j + 1 < path.size(); ++j) edges.emplace_back(path[j], path[j + 1]);
    for (auto x : path) hang_of[x] = i + 1;
    meta.structures.push_back({StructureKind::Path, -1, static_cast<std::int64_t>(i + 1), std::move(path)});
  }

  std::vector<std::uint8_t> is_leaf(n, 0);
  for (auto l : leaves) is_leaf[l] = 1;
  Vertex u;
  do {
    u = static_cast<Vertex>(rng.below(n));
  } while (is_leaf[u]);
  std::vector<Vertex> witness{u};
  for (auto l : leaves) {
    edges.emplace_back(u, l);
    witness.push_back(l);
  }
  meta.structures.push_back({StructureKind::WitnessGadget, -1, k, std::move(leaves)});
  meta.witness_locations.push_back(std::move(witness));
  meta.note("k", std::to_string(k));
  return {GraphInstance(n, edges, std::move(meta)), BackboneIndex{hang_of[u]}};
}

}  // namespace qsep
