#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qsep/detect/common.hpp"

namespace qsep {

// Phase sizes: short walks count short_count*sqrt(n), length short_len*n^{1/4};
// long walks count long_count*n^{1/4}, length long_len*sqrt(n). Unset factors
// default to C.
struct FixedPointSearchParams {
  double C = 8.0;
  std::optional<double> short_count;
  std::optional<double> short_len;
  std::optional<double> long_count;
  std::optional<double> long_len;
  Target target = Target::fixed_point();
};

namespace detail {

template <typename M>
class PatternWatch {
 public:
  PatternWatch(M& m, Target target) : m_(m), target_(target) {}

  // f(x), memoized. Sets `found` when the recorded answers complete the target.
  Element ask(Element x) {
    if (auto y = obs_.lookup(x)) return *y;
    const Element y = m_.query(x);
    const std::size_t pre = obs_.record(x, y);
    if (!found) {
      if (target_.kind == WitnessKind::FixedPoint && y == x) {
        found = Witness{WitnessKind::FixedPoint, {x}};
      } else if ((target_.kind == WitnessKind::KCollision || target_.kind == WitnessKind::Collision) &&
                 pre >= target_.size) {
        const auto& xs = obs_.preimages(y);
        Witness w{target_.size == 2 ? WitnessKind::Collision : WitnessKind::KCollision,
                  {xs.begin(), xs.begin() + target_.size}};
        w.vertices.push_back(y);
        found = std::move(w);
      }
    }
    return y;
  }

  std::size_t known() const { return obs_.size(); }

  std::optional<Witness> found;

 private:
  M& m_;
  Target target_;
  ObservedFunction obs_;
};

struct RecordedWalk {
  std::vector<Element> seq;
  std::unordered_map<Element, std::uint32_t> index;
  bool terminated = false;  // closed on itself
};

template <typename W>
RecordedWalk record_walk(W& watch, Element start, std::uint64_t len, bool keep_index) {
  RecordedWalk r;
  std::unordered_set<Element> seen{start};
  r.seq.push_back(start);
  Element x = start;
  for (std::uint64_t s = 0; s < len; ++s) {
    const Element y = watch.ask(x);
    if (watch.found) break;
    if (!seen.insert(y).second) {
      r.terminated = true;
      break;
    }
    r.seq.push_back(y);
    x = y;
  }
  if (keep_index) {
    for (std::uint32_t i = 0; i < r.seq.size(); ++i) r.index.emplace(r.seq[i], i);
  }
  return r;
}

}  // namespace detail

// Short walks, long walks, then follow every long walk that meets three short
// walks at positions congruent modulo a certified prime.
template <FunctionOracle O>
SearchOutcome cert_fixedpoint_search(O& oracle, const FixedPointPrimes& cert, const FixedPointSearchParams& params = {},
                                     const SearchOptions& opt = {}) {
  if (params.target.kind != WitnessKind::FixedPoint && params.target.kind != WitnessKind::KCollision &&
      params.target.kind != WitnessKind::Collision) {
    throw ParameterError("fixed-point search targets fixed points or k-collisions");
  }
  Metered<O> m(oracle, opt.budget);
  Rng rng(opt.seed);
  const double n = m.n();
  auto scaled = [&](std::optional<double> f, double base) {
    return static_cast<std::uint64_t>(std::max(1.0, std::ceil(f.value_or(params.C) * base)));
  };
  const std::uint64_t short_count = scaled(params.short_count, std::sqrt(n));
  const std::uint64_t short_len = scaled(params.short_len, std::pow(n, 0.25));
  const std::uint64_t long_count = scaled(params.long_count, std::pow(n, 0.25));
  const std::uint64_t long_len = scaled(params.long_len, std::sqrt(n));

  detail::PatternWatch watch(m, params.target);
  std::uint64_t follows = 0, follow_queries = 0, false_follows = 0, false_follow_queries = 0;
  auto out = guarded(m, [&](SearchOutcome& res) {
    auto done = [&] {
      if (!watch.found) return false;
      res.status = Status::Found;
      res.witness = watch.found;
      return true;
    };
    if (done()) return;
    for (;;) {
      // Every image is memoized and nothing matched: no further query can help.
      if (watch.known() == m.n()) {
        res.status = Status::Exhausted;
        return;
      }
      ++res.attempts;
      std::vector<detail::RecordedWalk> shorts, longs;
      for (std::uint64_t j = 0; j < short_count; ++j) {
        shorts.push_back(detail::record_walk(watch, static_cast<Element>(rng.below(m.n())), short_len, false));
        if (done()) return;
      }
      for (std::uint64_t j = 0; j < long_count; ++j) {
        longs.push_back(detail::record_walk(watch, static_cast<Element>(rng.below(m.n())), long_len, true));
        if (done()) return;
      }
      for (auto& w : longs) {
        if (w.terminated) continue;
        std::vector<std::uint32_t> hits;
        for (const auto& s : shorts) {
          for (auto e : s.seq) {
            auto it = w.index.find(e);
            if (it != w.index.end()) {
              hits.push_back(it->second);
              break;
            }
          }
        }
        std::sort(hits.begin(), hits.end());
        hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
        if (hits.size() < 3) continue;
        bool follow = false;
        for (auto p : cert.primes) {
          if (p == 0) continue;
          std::unordered_map<std::uint64_t, int> per_class;
          for (auto h : hits) {
            if (++per_class[h % p] >= 3) {
              follow = true;
              break;
            }
          }
          if (follow) break;
        }
        if (!follow) continue;
        ++follows;
        const std::uint64_t before = m.count();
        std::unordered_set<Element> seen(w.seq.begin(), w.seq.end());
        Element x = w.seq.back();
        for (;;) {
          const Element y = watch.ask(x);
          if (watch.found || !seen.insert(y).second) break;
          x = y;
        }
        follow_queries += m.count() - before;
        if (done()) return;
        // Closed a cycle without meeting the pattern.
        ++false_follows;
        false_follow_queries += m.count() - before;
      }
    }
  });
  out.counters = {{"follows", follows},
                  {"follow-queries", follow_queries},
                  {"false-follows", false_follows},
                  {"false-follow-queries", false_follow_queries}};
  return out;
}

}  // namespace qsep
