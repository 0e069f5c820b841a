#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "qsep/detect/brute_force.hpp"
#include "qsep/detect/claw.hpp"
#include "qsep/detect/collision.hpp"
#include "qsep/detect/fixedpoint.hpp"
#include "qsep/detect/simple.hpp"
#include "qsep/detect/star.hpp"
#include "qsep/gen/fixedpoint.hpp"
#include "qsep/gen/multiscale.hpp"
#include "qsep/gen/star.hpp"
#include "qsep/io/json_io.hpp"
#include "qsep/primes.hpp"

namespace qsep {

using AnyBundle = std::variant<FunctionBundle, GraphBundle>;

inline const Certificate& certificate_of(const AnyBundle& b) {
  return std::visit([](const auto& x) -> const Certificate& { return x.certificate; }, b);
}
inline const StructureMeta& meta_of(const AnyBundle& b) {
  return std::visit([](const auto& x) -> const StructureMeta& { return x.meta(); }, b);
}
inline std::uint32_t size_of(const AnyBundle& b) {
  if (auto f = std::get_if<FunctionBundle>(&b)) return f->instance.n;
  return std::get<GraphBundle>(b).instance.n();
}

struct GenSpec {
  std::string id;
  std::uint32_t n = 0;
  Json params = Json::object();
};

struct DetSpec {
  std::string id;
  Json params = Json::object();
};

namespace detail {

template <typename T>
std::optional<T> opt_param(const Json& p, const char* key) {
  if (!p.contains(key) || p.at(key).is_null()) return std::nullopt;
  try {
    return p.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ParameterError(std::string("parameter '") + key + "' has the wrong type");
  }
}

template <typename T>
T param(const Json& p, const char* key, T fallback) {
  return opt_param<T>(p, key).value_or(fallback);
}

inline void check_keys(const Json& p, std::initializer_list<std::string_view> allowed, std::string_view who) {
  if (!p.is_object() && !p.is_null()) throw ParameterError(std::string(who) + ": parameters must be an object");
  for (const auto& [k, v] : p.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ParameterError(std::string(who) + ": unknown parameter '" + k + "'");
    }
  }
}

}  // namespace detail

inline ScaleParams scale_params_from(const Json& p) {
  ScaleParams s;
  s.i_min = detail::param(p, "i_min", s.i_min);
  s.i_max = detail::param(p, "i_max", s.i_max);
  s.beta = detail::param(p, "beta", s.beta);
  s.gamma = detail::param(p, "gamma", s.gamma);
  s.c = detail::param(p, "c", s.c);
  s.rho = detail::opt_param<double>(p, "rho");
  const auto filler = detail::param<std::string>(p, "filler", "fixed-points");
  if (filler == "fixed-points") {
    s.filler = Filler::FixedPoints;
  } else if (filler == "small-cycles") {
    s.filler = Filler::SmallCycles;
  } else {
    throw ParameterError("filler must be fixed-points or small-cycles");
  }
  const auto target = detail::param<std::string>(p, "target", "far");
  if (target == "far") {
    s.target = CollisionTarget::Far;
  } else if (target == "uniform") {
    s.target = CollisionTarget::Uniform;
  } else {
    throw ParameterError("target must be far or uniform");
  }
  s.forced_t = detail::opt_param<int>(p, "t");
  s.forced_b = detail::opt_param<std::uint64_t>(p, "b");
  return s;
}

inline FixedPointParams fixedpoint_params_from(const Json& p) {
  FixedPointParams f;
  f.alpha = detail::param(p, "alpha", f.alpha);
  f.cycles = detail::opt_param<std::uint32_t>(p, "cycles");
  f.alpha_cycle_count = detail::param(p, "alpha_cycle_count", f.alpha_cycle_count);
  f.cycle_len = detail::opt_param<std::uint64_t>(p, "cycle_len");
  f.feeder_len = detail::opt_param<std::uint64_t>(p, "feeder_len");
  f.prime_lo = detail::opt_param<double>(p, "prime_lo");
  f.prime_hi = detail::opt_param<double>(p, "prime_hi");
  f.widen_window = detail::param(p, "widen_window", f.widen_window);
  return f;
}

inline const std::vector<std::string>& generator_ids() {
  static const std::vector<std::string> ids{"collision-fn", "claw", "fixedpoint", "star", "starpath", "identity"};
  return ids;
}

inline AnyBundle generate(const GenSpec& spec, std::uint64_t seed) {
  const auto& p = spec.params;
  if (spec.id == "collision-fn" || spec.id == "claw") {
    detail::check_keys(p, {"i_min", "i_max", "beta", "gamma", "c", "rho", "filler", "target", "t", "b"}, spec.id);
    const auto sp = scale_params_from(p);
    if (spec.id == "claw") return gen_claw_graph(spec.n, sp, seed);
    return gen_collision_function(spec.n, sp, seed);
  }
  if (spec.id == "fixedpoint") {
    detail::check_keys(p, {"alpha", "cycles", "alpha_cycle_count", "cycle_len", "feeder_len", "prime_lo", "prime_hi",
                           "widen_window", "H"},
                       spec.id);
    return gen_fixedpoint_function(spec.n, fixedpoint_params_from(p),
                                   HSpec::parse(detail::param<std::string>(p, "H", "fixed-point")), seed);
  }
  if (spec.id == "star") {
    detail::check_keys(p, {"H"}, spec.id);
    return gen_star_graph(spec.n, HSpec::parse(detail::param<std::string>(p, "H", "triangle")), seed);
  }
  if (spec.id == "starpath") {
    detail::check_keys(p, {"k"}, spec.id);
    return gen_starpath_graph(spec.n, detail::param<std::uint32_t>(p, "k", 4), seed);
  }
  if (spec.id == "identity") {
    detail::check_keys(p, {}, spec.id);
    auto f = identity_function(spec.n);
    StructureMeta meta;
    meta.structures.push_back({StructureKind::Isolated, -1, 0, {}});
    for (Element x = 0; x < spec.n; ++x) meta.structures.back().members.push_back(x);
    f.meta = std::move(meta);
    return FunctionBundle{std::move(f), PathLength{1}};
  }
  throw ParameterError("unknown generator '" + spec.id + "'");
}

// ---- certificate corruption ------------------------------------------------

// A wrong hint of the same kind, drawn from the plausible range of the
// instance (never equal to the true one when an alternative exists).
inline Certificate corrupt_certificate(const Certificate& c, std::uint32_t n, const Json& gen_params, Rng& rng) {
  auto other_scale = [&](int t) {
    const int lo = detail::param(gen_params, "i_min", 1), hi = detail::param(gen_params, "i_max", 5);
    if (hi <= lo) return t + 1;
    int u;
    do {
      u = static_cast<int>(rng.between(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi)));
    } while (u == t);
    return u;
  };
  return std::visit(
      [&](const auto& v) -> Certificate {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CollisionScale>) {
          return CollisionScale{other_scale(v.t)};
        } else if constexpr (std::is_same_v<T, ClawScale>) {
          return ClawScale{other_scale(v.t)};
        } else if constexpr (std::is_same_v<T, FixedPointPrimes>) {
          const std::uint64_t top = std::max<std::uint64_t>(64, 4 * (v.primes.empty() ? 16 : *std::max_element(v.primes.begin(), v.primes.end())));
          auto pool = primes_in_range(2, top);
          std::erase_if(pool, [&](auto q) { return std::find(v.primes.begin(), v.primes.end(), q) != v.primes.end(); });
          rng.shuffle(pool);
          pool.resize(std::min(pool.size(), std::max<std::size_t>(1, v.primes.size())));
          return FixedPointPrimes{pool};
        } else if constexpr (std::is_same_v<T, StarDegrees>) {
          const std::uint32_t s = isqrt(n);
          const std::uint32_t lo = (s + 3) / 4, hi = 3 * s / 2;
          std::vector<std::uint32_t> out;
          while (out.size() < std::max<std::size_t>(1, v.degrees.size()) && hi > lo) {
            const auto d = static_cast<std::uint32_t>(rng.between(lo, hi));
            if (std::find(v.degrees.begin(), v.degrees.end(), d) == v.degrees.end() &&
                std::find(out.begin(), out.end(), d) == out.end()) {
              out.push_back(d);
            }
          }
          return StarDegrees{out};
        } else if constexpr (std::is_same_v<T, BackboneIndex>) {
          const std::uint32_t s = isqrt(n);
          std::uint32_t u;
          do {
            u = static_cast<std::uint32_t>(rng.between(1, s));
          } while (u == v.index);
          return BackboneIndex{u};
        } else {
          return PathLength{v.k + 1};
        }
      },
      c);
}

// ---- detectors -------------------------------------------------------------

enum class Model { Function, Graph, Any };

struct DetectorInfo {
  std::string id;
  Model model;
  bool needs_certificate;
};

inline const std::vector<DetectorInfo>& detector_infos() {
  static const std::vector<DetectorInfo> infos{
      {"cert-collision", Model::Function, true}, {"multiscale-collision", Model::Function, false},
      {"cert-claw", Model::Graph, true},         {"cert-fixedpoint", Model::Function, true},
      {"cert-star", Model::Graph, true},         {"cert-starpath", Model::Graph, true},
      {"path-k", Model::Function, false},        {"edge-wedge", Model::Graph, false},
      {"probe-baseline", Model::Any, false},
  };
  return infos;
}

inline const DetectorInfo& detector_info(const std::string& id) {
  for (const auto& d : detector_infos()) {
    if (d.id == id) return d;
  }
  throw ParameterError("unknown detector '" + id + "'");
}

template <typename C>
const C& expect_cert(const Certificate& c, const std::string& id) {
  if (auto p = std::get_if<C>(&c)) return *p;
  throw ModelMismatch(id + " cannot use a " + std::string(certificate_kind(c)) + " certificate");
}

// Runs one detector on an oracle. The oracle type decides the model.
template <typename O>
SearchOutcome run_detector(const DetSpec& spec, O& oracle, const Certificate& cert, const Json& gen_params,
                           const SearchOptions& opt) {
  const auto& info = detector_info(spec.id);
  const auto& p = spec.params;
  constexpr bool is_fn = FunctionOracle<O>;
  if (info.model != Model::Any && (info.model == Model::Function) != is_fn) {
    throw ModelMismatch(spec.id + " needs a " + (info.model == Model::Function ? "function" : "graph") + " instance");
  }
  if constexpr (is_fn) {
    if (spec.id == "cert-collision") {
      detail::check_keys(p, {}, spec.id);
      return cert_collision_search(oracle, expect_cert<CollisionScale>(cert, spec.id), opt);
    }
    if (spec.id == "multiscale-collision") {
      detail::check_keys(p, {"i_min", "i_max"}, spec.id);
      const int lo = detail::param(p, "i_min", detail::param(gen_params, "i_min", ScaleParams{}.i_min));
      const int hi = detail::param(p, "i_max", detail::param(gen_params, "i_max", ScaleParams{}.i_max));
      return multiscale_collision_search(oracle, lo, hi, opt);
    }
    if (spec.id == "cert-fixedpoint") {
      detail::check_keys(p, {"C", "short_count", "short_len", "long_count", "long_len", "target"}, spec.id);
      FixedPointSearchParams sp;
      sp.C = detail::param(p, "C", sp.C);
      sp.short_count = detail::opt_param<double>(p, "short_count");
      sp.short_len = detail::opt_param<double>(p, "short_len");
      sp.long_count = detail::opt_param<double>(p, "long_count");
      sp.long_len = detail::opt_param<double>(p, "long_len");
      if (auto t = detail::opt_param<std::string>(p, "target")) {
        sp.target = Target::parse(*t);
      } else if (auto h = detail::opt_param<std::string>(gen_params, "H")) {
        const auto hs = HSpec::parse(*h);
        if (hs.kind == HSpec::Kind::KCollision) sp.target = Target::k_collision(hs.size);
      }
      return cert_fixedpoint_search(oracle, expect_cert<FixedPointPrimes>(cert, spec.id), sp, opt);
    }
    if (spec.id == "path-k") {
      detail::check_keys(p, {"k"}, spec.id);
      return path_k_search(oracle, detail::param<std::uint32_t>(p, "k", 1), opt);
    }
  } else {
    if (spec.id == "cert-claw") {
      detail::check_keys(p, {}, spec.id);
      return cert_claw_search(oracle, expect_cert<ClawScale>(cert, spec.id), opt);
    }
    if (spec.id == "cert-star") {
      detail::check_keys(p, {"clique", "rounds"}, spec.id);
      StarSearchParams sp;
      sp.clique = detail::param(p, "clique", sp.clique);
      sp.rounds = detail::param(p, "rounds", sp.rounds);
      return cert_star_search(oracle, expect_cert<StarDegrees>(cert, spec.id), sp, opt);
    }
    if (spec.id == "cert-starpath") {
      detail::check_keys(p, {"k"}, spec.id);
      StarPathSearchParams sp;
      sp.k = detail::param(p, "k", detail::param(gen_params, "k", sp.k));
      return cert_starpath_search(oracle, expect_cert<BackboneIndex>(cert, spec.id), sp, opt);
    }
    if (spec.id == "edge-wedge") {
      detail::check_keys(p, {"target"}, spec.id);
      return edge_wedge_search(oracle, Target::parse(detail::param<std::string>(p, "target", "wedge")), opt);
    }
  }
  if (spec.id == "probe-baseline") {
    detail::check_keys(p, {"target", "local_degree_cap"}, spec.id);
    ProbeParams pp;
    pp.local_degree_cap = detail::param(p, "local_degree_cap", pp.local_degree_cap);
    const auto fallback = is_fn ? "fixed-point" : "star:4";
    return uniform_probe_baseline(oracle, Target::parse(detail::param<std::string>(p, "target", fallback)), opt, pp);
  }
  throw ParameterError("detector '" + spec.id + "' not wired for this model");
}

inline Model model_of(const AnyBundle& b) { return std::holds_alternative<FunctionBundle>(b) ? Model::Function : Model::Graph; }

}  // namespace qsep
