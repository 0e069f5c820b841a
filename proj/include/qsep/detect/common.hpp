#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qsep/errors.hpp"
#include "qsep/instance.hpp"
#include "qsep/oracle.hpp"
#include "qsep/rng.hpp"

namespace qsep {

enum class Status { Found, Exhausted, BudgetExceeded };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Found: return "found";
    case Status::Exhausted: return "exhausted";
    case Status::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

inline Status status_from(std::string_view s) {
  for (auto v : {Status::Found, Status::Exhausted, Status::BudgetExceeded}) {
    if (to_string(v) == s) return v;
  }
  throw ParameterError("unknown status: " + std::string(s));
}

struct SearchOutcome {
  Status status = Status::Exhausted;
  std::optional<Witness> witness;
  std::uint64_t queries = 0;
  std::uint64_t attempts = 0;
  std::vector<std::pair<std::string, std::uint64_t>> counters;

  std::uint64_t counter(std::string_view key) const {
    for (const auto& [k, v] : counters) {
      if (k == key) return v;
    }
    return 0;
  }
};

struct SearchOptions {
  std::optional<std::uint64_t> budget;
  std::uint64_t seed = 0;
};

// Forwards the query surface of an oracle and enforces a detector-side budget.
template <typename O>
class Metered {
 public:
  Metered(O& o, std::optional<std::uint64_t> budget) : o_(o), budget_(budget), base_(o.count()) {}

  std::uint32_t n() const { return o_.n(); }
  std::uint64_t count() const { return o_.count() - base_; }

  Element query(Element x)
    requires FunctionOracle<O>
  {
    charge();
    return o_.query(x);
  }
  std::uint32_t degree(Vertex v)
    requires GraphOracle<O>
  {
    charge();
    return o_.degree(v);
  }
  Vertex neighbor(Vertex v, std::uint32_t i)
    requires GraphOracle<O>
  {
    charge();
    return o_.neighbor(v, i);
  }

 private:
  void charge() {
    if (budget_ && count() >= *budget_) throw BudgetExhausted();
  }
  O& o_;
  std::optional<std::uint64_t> budget_;
  std::uint64_t base_;
};

// Runs a search body, turning budget exhaustion into a BudgetExceeded outcome.
// The body fills attempts/counters and returns the final status and witness.
template <typename M, typename Body>
SearchOutcome guarded(M& m, Body&& body) {
  SearchOutcome out;
  try {
    body(out);
  } catch (const BudgetExhausted&) {
    out.status = Status::BudgetExceeded;
    out.witness.reset();
  }
  out.queries = m.count();
  return out;
}

// Uniform sampling without replacement from [0, n); lazy Fisher-Yates with a
// sparse swap table.
class SamplerWithoutReplacement {
 public:
  SamplerWithoutReplacement(std::uint32_t n, Rng& rng) : n_(n), rng_(rng) {}
  bool empty() const { return drawn_ == n_; }
  std::uint32_t drawn() const { return drawn_; }
  std::uint32_t next() {
    const std::uint32_t j = drawn_ + static_cast<std::uint32_t>(rng_.below(n_ - drawn_));
    const std::uint32_t a = at(j);
    swaps_[j] = at(drawn_);
    ++drawn_;
    return a;
  }

 private:
  std::uint32_t at(std::uint32_t i) const {
    auto it = swaps_.find(i);
    return it == swaps_.end() ? i : it->second;
  }
  std::uint32_t n_;
  Rng& rng_;
  std::uint32_t drawn_ = 0;
  std::unordered_map<std::uint32_t, std::uint32_t> swaps_;
};

// What a search looks for. size is K for k-collisions, k for paths and stars,
// h for cliques.
struct Target {
  WitnessKind kind = WitnessKind::Collision;
  std::uint32_t size = 2;

  bool is_function() const {
    return kind == WitnessKind::Collision || kind == WitnessKind::KCollision || kind == WitnessKind::FixedPoint ||
           kind == WitnessKind::Path;
  }

  static Target collision() { return {WitnessKind::Collision, 2}; }
  static Target k_collision(std::uint32_t k) { return {k == 2 ? WitnessKind::Collision : WitnessKind::KCollision, k}; }
  static Target fixed_point() { return {WitnessKind::FixedPoint, 1}; }
  static Target path(std::uint32_t k) { return {WitnessKind::Path, k}; }
  static Target claw() { return {WitnessKind::Claw, 3}; }
  static Target star(std::uint32_t k) { return {k == 3 ? WitnessKind::Claw : WitnessKind::KStar, k}; }
  static Target wedge() { return {WitnessKind::Wedge, 2}; }
  static Target edge() { return {WitnessKind::Edge, 1}; }
  static Target clique(std::uint32_t h) { return {WitnessKind::Clique, h}; }

  std::string str() const {
    switch (kind) {
      case WitnessKind::Collision: return "collision";
      case WitnessKind::KCollision: return "collision:" + std::to_string(size);
      case WitnessKind::FixedPoint: return "fixed-point";
      case WitnessKind::Path: return "path:" + std::to_string(size);
      case WitnessKind::Claw: return "claw";
      case WitnessKind::KStar: return "star:" + std::to_string(size);
      case WitnessKind::Wedge: return "wedge";
      case WitnessKind::Edge: return "edge";
      case WitnessKind::Clique: return size == 3 ? "triangle" : "clique:" + std::to_string(size);
    }
    return "?";
  }

  static Target parse(std::string_view s) {
    auto num = [&](std::size_t off) {
      std::uint32_t v = 0;
      for (char ch : s.substr(off)) {
        if (ch < '0' || ch > '9') throw ParameterError("bad target: " + std::string(s));
        v = v * 10 + static_cast<std::uint32_t>(ch - '0');
      }
      if (s.size() == off) throw ParameterError("bad target: " + std::string(s));
      return v;
    };
    if (s == "collision") return collision();
    if (s == "fixed-point") return fixed_point();
    if (s == "claw") return claw();
    if (s == "wedge") return wedge();
    if (s == "edge") return edge();
    if (s == "triangle") return clique(3);
    if (s.starts_with("collision:")) return k_collision(num(10));
    if (s.starts_with("path:")) return path(num(5));
    if (s.starts_with("star:")) return star(num(5));
    if (s.starts_with("clique:")) return clique(num(7));
    throw ParameterError("bad target: " + std::string(s));
  }

  friend bool operator==(const Target&, const Target&) = default;
};

// Forward knowledge gathered by a function search: x -> f(x) and, per value,
// the distinct preimages seen so far.
class ObservedFunction {
 public:
  std::optional<Element> lookup(Element x) const {
    auto it = succ_.find(x);
    if (it == succ_.end()) return std::nullopt;
    return it->second;
  }

  // Records f(x) = y. Returns the number of distinct known preimages of y.
  std::size_t record(Element x, Element y) {
    if (!succ_.emplace(x, y).second) return preimages_[y].size();
    auto& pre = preimages_[y];
    pre.push_back(x);
    return pre.size();
  }

  const std::vector<Element>& preimages(Element y) const {
    static const std::vector<Element> none;
    auto it = preimages_.find(y);
    return it == preimages_.end() ? none : it->second;
  }

  std::size_t size() const { return succ_.size(); }

 private:
  std::unordered_map<Element, Element> succ_;
  std::unordered_map<Element, std::vector<Element>> preimages_;
};

}  // namespace qsep
