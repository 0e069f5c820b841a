#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

namespace qsep {

// SplitMix64 finalizer. Used to derive independent stream seeds from a master
// seed and a stream index.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix64(mix64(master) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept {
  return derive_seed(derive_seed(master, a), b);
}

// Portable seeded stream. The engine sequence is fixed by the standard; the
// bounded draws below avoid std::uniform_int_distribution, whose output is
// implementation-defined, so that seeds reproduce across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). Lemire's nearly-divisionless method.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin() { return (next() >> 63) != 0; }

  // True with probability num/den, exactly.
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

  // k distinct values from [0, n) in random order (partial Fisher-Yates for
  // dense draws, rejection for sparse ones).
  std::vector<std::uint32_t> sample_distinct(std::uint32_t n, std::uint32_t k);

 private:
  std::mt19937_64 engine_;
};

// Uniformly random permutation of [0, n).
inline std::vector<std::uint32_t> random_permutation(std::uint32_t n, Rng& rng) {
  std::vector<std::uint32_t> perm(n);
  for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(perm);
  return perm;
}

inline std::vector<std::uint32_t> Rng::sample_distinct(std::uint32_t n, std::uint32_t k) {
  std::vector<std::uint32_t> out;
  if (k == 0) return out;
  if (static_cast<std::uint64_t>(k) * 4 >= n) {
    auto perm = random_permutation(n, *this);
    out.assign(perm.begin(), perm.begin() + k);
    return out;
  }
  out.reserve(k);
  std::unordered_set<std::uint32_t> seen;
  seen.reserve(2 * k);
  while (out.size() < k) {
    auto x = static_cast<std::uint32_t>(below(n));
    if (seen.insert(x).second) out.push_back(x);
  }
  return out;
}

}  // namespace qsep
