#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qsep/errors.hpp"

namespace qsep {

// Primes p with lo < p < hi, ascending. Segmented sieve: base primes up to
// sqrt(hi), then one bit array over the window.
inline std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi <= lo + 1 || hi <= 2) return out;
  const std::uint64_t first = std::max<std::uint64_t>(lo + 1, 2);
  const std::uint64_t last = hi - 1;
  if (first > last) return out;

  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(last)));
  while (root * root > last) --root;
  while ((root + 1) * (root + 1) <= last) ++root;

  std::vector<bool> small(root + 1, true);
  std::vector<std::uint64_t> base;
  for (std::uint64_t p = 2; p <= root; ++p) {
    if (!small[p]) continue;
    base.push_back(p);
    for (std::uint64_t q = p * p; q <= root; q += p) small[q] = false;
  }

  constexpr std::uint64_t kSegment = 1u << 20;
  std::vector<bool> seg;
  for (std::uint64_t start = first; start <= last; start += kSegment) {
    const std::uint64_t end = std::min(last, start + kSegment - 1);
    seg.assign(end - start + 1, true);
    for (auto p : base) {
      std::uint64_t q = std::max(p * p, (start + p - 1) / p * p);
      for (; q <= end; q += p) seg[q - start] = false;
    }
    for (std::uint64_t x = start; x <= end; ++x) {
      if (seg[x - start]) out.push_back(x);
    }
    if (end == last) break;
  }
  return out;
}

}  // namespace qsep
