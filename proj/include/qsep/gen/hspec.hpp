#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "qsep/errors.hpp"

namespace qsep {

// Pattern planted by the fixed-point and star generators.
//   none           nothing planted
//   fixed-point    f(x) = x                         (function, T = 1)
//   collision:K    K >= 3 preimages of one value    (function, T = K)
//   triangle       3-clique                         (graph)
//   clique:H       H-clique, H >= 3                 (graph)
struct HSpec {
  enum class Kind { None, FixedPoint, KCollision, Clique } kind = Kind::FixedPoint;
  std::uint32_t size = 1;

  static HSpec none() { return {Kind::None, 0}; }
  static HSpec fixed_point() { return {Kind::FixedPoint, 1}; }
  static HSpec k_collision(std::uint32_t k) { return {Kind::KCollision, k}; }
  static HSpec clique(std::uint32_t h) { return {Kind::Clique, h}; }

  // Number of entry vertices for function patterns.
  std::uint32_t entries() const {
    switch (kind) {
      case Kind::FixedPoint: return 1;
      case Kind::KCollision: return size;
      default: return 0;
    }
  }
  bool is_function() const { return kind == Kind::FixedPoint || kind == Kind::KCollision || kind == Kind::None; }
  bool is_graph() const { return kind == Kind::Clique || kind == Kind::None; }

  std::string str() const {
    switch (kind) {
      case Kind::None: return "none";
      case Kind::FixedPoint: return "fixed-point";
      case Kind::KCollision: return "collision:" + std::to_string(size);
      case Kind::Clique: return size == 3 ? "triangle" : "clique:" + std::to_string(size);
    }
    return "none";
  }

  static HSpec parse(std::string_view s) {
    auto number = [&](std::string_view digits) {
      std::uint32_t v = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc() || p != digits.data() + digits.size()) throw ParameterError("bad H spec: " + std::string(s));
      return v;
    };
    if (s == "none" || s == "0") return none();
    if (s == "fixed-point" || s == "fixedpoint") return fixed_point();
    if (s == "triangle") return clique(3);
    if (s.starts_with("collision:")) {
      auto k = number(s.substr(10));
      if (k < 3) throw ParameterError("collision:K needs K >= 3");
      return k_collision(k);
    }
    if (s.starts_with("clique:")) {
      auto h = number(s.substr(7));
      if (h == 0) return none();
      if (h < 3) throw ParameterError("clique:H needs H >= 3");
      return clique(h);
    }
    throw ParameterError("bad H spec: " + std::string(s));
  }

  friend bool operator==(const HSpec&, const HSpec&) = default;
};

}  // namespace qsep
