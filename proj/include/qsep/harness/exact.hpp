#pragma once

#include <boost/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qsep/errors.hpp"
#include "qsep/gen/scales.hpp"
#include "qsep/instance.hpp"

namespace qsep {

using Rational = boost::rational<std::int64_t>;

// Per-attempt quantities of the certificate walk with cap 2^t.
struct AttemptExpectation {
  Rational success;
  Rational queries;
};

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

// Enumerates every start: walk f forward, at most 2^t queries, stopping when
// an element of the walk repeats; success iff the repeat is not the start.
inline AttemptExpectation exact_cert_expectation(const FunctionInstance& f, int t) {
  if (!f.meta) throw ParameterError("exact expectation needs ground-truth meta");
  if (t < 0 || t > 40) throw ParameterError("scale out of range");
  const std::uint64_t cap = std::uint64_t{1} << t;
  std::vector<std::uint32_t> stamp(f.n, 0);
  std::int64_t wins = 0, total = 0;
  for (Element start = 0; start < f.n; ++start) {
    const std::uint32_t epoch = start + 1;
    stamp[start] = epoch;
    Element x = start;
    for (std::uint64_t q = 1; q <= cap; ++q) {
      const Element y = f.succ[x];
      if (stamp[y] == epoch) {
        total += static_cast<std::int64_t>(q);
        wins += y != start;
        goto next;
      }
      stamp[y] = epoch;
      x = y;
    }
    total += static_cast<std::int64_t>(cap);
  next:;
  }
  const auto n = static_cast<std::int64_t>(f.n);
  return {Rational(wins, n), Rational(total, n)};
}

namespace detail {

// sum of min(k, cap) for k in [lo, hi]
inline std::int64_t sum_min(std::int64_t lo, std::int64_t hi, std::int64_t cap) {
  if (lo > hi) return 0;
  const std::int64_t top = std::min(hi, cap);
  std::int64_t s = 0;
  if (top >= lo) s += (lo + top) * (top - lo + 1) / 2;
  const std::int64_t over_lo = std::max(lo, cap + 1);
  if (hi >= over_lo) s += (hi - over_lo + 1) * cap;
  return s;
}

}  // namespace detail

// The same quantities from the declared structure alone: a rho-shaped path of
// length L whose last element maps to position m contributes m starts on the
// tail (walk length L - j from position j) and L - m starts on its cycle; a
// cycle of length l contributes l * min(l, cap); a fixed point costs 1.
inline AttemptExpectation closed_form_expectation(const StructureMeta& meta, std::uint32_t n, int t) {
  const std::int64_t cap = std::int64_t{1} << t;
  std::int64_t wins = 0, total = 0;
  for (const auto& s : meta.structures) {
    const auto len = static_cast<std::int64_t>(s.members.size());
    switch (s.kind) {
      case StructureKind::Path: {
        const std::int64_t m = s.tag;
        if (m < 1 || m > len - 2) throw ParameterError("path structure without a collision target");
        // tail starts j < m: walk length k = L - j in [L - m + 1, L]
        const std::int64_t lo = len - m + 1, hi = len;
        total += detail::sum_min(lo, hi, cap);
        wins += std::max<std::int64_t>(0, std::min(hi, cap) - lo + 1);
        total += (len - m) * std::min(len - m, cap);
        break;
      }
      case StructureKind::Cycle: total += len * std::min(len, cap); break;
      case StructureKind::Isolated: total += len; break;
      default: throw ParameterError("closed form: unexpected structure kind in a collision instance");
    }
  }
  const auto nn = static_cast<std::int64_t>(n);
  return {Rational(wins, nn), Rational(total, nn)};
}

// The same quantities from the plan counts only. With a uniform collision
// target the result is the expectation over that choice.
inline AttemptExpectation analytic_expectation(const ScalePlan& plan, int t, std::uint64_t b_t, Filler filler,
                                               CollisionTarget target = CollisionTarget::Far) {
  const std::int64_t cap = std::int64_t{1} << t;
  Rational total = 0, wins = 0;
  for (int i = plan.i_min; i <= plan.i_max; ++i) {
    const auto len = std::int64_t{1} << i;
    const auto a = static_cast<std::int64_t>(plan.a_at(i));
    const std::int64_t closed = i == t ? a - static_cast<std::int64_t>(b_t) : a;
    total += closed * len * std::min(len, cap);
  }
  const std::int64_t len = cap;
  const std::int64_t first = target == CollisionTarget::Far ? len - 2 : 1, choices = len - 1 - first;
  std::int64_t path_q = 0, path_w = 0;
  for (std::int64_t m = first; m <= len - 2; ++m) {
    path_q += detail::sum_min(len - m + 1, len, cap) + (len - m) * std::min(len - m, cap);
    path_w += m;
  }
  const auto b = static_cast<std::int64_t>(b_t);
  total += Rational(b * path_q, choices);
  wins += Rational(b * path_w, choices);
  const auto rest = static_cast<std::int64_t>(plan.n) - static_cast<std::int64_t>(plan.path_elements());
  if (filler == Filler::FixedPoints || rest == 0) {
    total += rest;
  } else {
    total += rest % 2 ? 9 + (rest - 3) * 2 : rest * 2;
  }
  const auto nn = static_cast<std::int64_t>(plan.n);
  return {wins / nn, total / nn};
}

// Claw walk from every start, both directions at degree 2 weighted 1/2.
inline Rational exact_claw_success(const GraphInstance& g, int t) {
  const std::uint64_t cap = std::uint64_t{1} << t;
  auto reaches = [&](Vertex v, Vertex cur) {
    Vertex prev = v;
    for (std::uint64_t step = 1;; ++step) {
      if (cur == v) return false;
      const auto d = g.degree(cur);
      if (d >= 3) return true;
      if (d < 2 || step >= cap) return false;
      const auto nb = g.neighbors(cur);
      const Vertex next = nb[0] == prev ? nb[1] : nb[0];
      prev = cur;
      cur = next;
    }
  };
  std::int64_t halves = 0;
  for (Vertex v = 0; v < g.n(); ++v) {
    const auto d = g.degree(v);
    if (d >= 3) {
      halves += 2;
    } else if (d == 1) {
      halves += 2 * reaches(v, g.neighbors(v)[0]);
    } else if (d == 2) {
      halves += reaches(v, g.neighbors(v)[0]) + reaches(v, g.neighbors(v)[1]);
    }
  }
  return Rational(halves, 2 * static_cast<std::int64_t>(g.n()));
}

}  // namespace qsep
