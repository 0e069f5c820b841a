#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include "qsep/errors.hpp"
#include "qsep/instance.hpp"

namespace qsep {

using Json = nlohmann::json;

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << x;
  return os.str();
}

// Hash of the canonical (key-sorted, compact) serialization.
inline std::string config_hash(const Json& config) { return hex64(fnv1a(config.dump())); }

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw IoError("malformed JSON in " + path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

inline void write_json_file(const std::string& path, const Json& j) { write_text_file(path, j.dump(1) + "\n"); }

// ---- certificate -----------------------------------------------------------

inline Json to_json(const Certificate& c) {
  Json j{{"kind", certificate_kind(c)}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CollisionScale> || std::is_same_v<T, ClawScale>) j["t"] = v.t;
        if constexpr (std::is_same_v<T, FixedPointPrimes>) j["primes"] = v.primes;
        if constexpr (std::is_same_v<T, StarDegrees>) j["degrees"] = v.degrees;
        if constexpr (std::is_same_v<T, BackboneIndex>) j["index"] = v.index;
        if constexpr (std::is_same_v<T, PathLength>) j["k"] = v.k;
      },
      c);
  return j;
}

inline Certificate certificate_from_json(const Json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "collision-scale") return CollisionScale{j.at("t").get<int>()};
    if (kind == "claw-scale") return ClawScale{j.at("t").get<int>()};
    if (kind == "fixed-point-primes") return FixedPointPrimes{j.at("primes").get<std::vector<std::uint64_t>>()};
    if (kind == "star-degrees") return StarDegrees{j.at("degrees").get<std::vector<std::uint32_t>>()};
    if (kind == "backbone-index") return BackboneIndex{j.at("index").get<std::uint32_t>()};
    if (kind == "path-length") return PathLength{j.at("k").get<std::uint32_t>()};
    throw IoError("unknown certificate kind " + kind);
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed certificate: ") + e.what());
  }
}

// ---- meta ------------------------------------------------------------------

inline Json to_json(const StructureMeta& m) {
  Json structures = Json::array();
  for (const auto& s : m.structures) {
    structures.push_back({{"kind", to_string(s.kind)}, {"scale", s.scale}, {"tag", s.tag}, {"members", s.members}});
  }
  Json notes = Json::array();
  for (const auto& [k, v] : m.notes) notes.push_back({k, v});
  Json j{{"ground_truth", true},
         {"structures", structures},
         {"witness_locations", m.witness_locations},
         {"notes", notes}};
  j["good_index"] = m.good_index ? Json(*m.good_index) : Json(nullptr);
  return j;
}

inline StructureMeta meta_from_json(const Json& j) {
  try {
    StructureMeta m;
    for (const auto& s : j.at("structures")) {
      m.structures.push_back({structure_kind_from(s.at("kind").get<std::string>()), s.at("scale").get<int>(),
                              s.at("tag").get<std::int64_t>(), s.at("members").get<std::vector<std::uint32_t>>()});
    }
    if (!j.at("good_index").is_null()) m.good_index = j.at("good_index").get<int>();
    m.witness_locations = j.at("witness_locations").get<std::vector<std::vector<std::uint32_t>>>();
    for (const auto& kv : j.at("notes")) m.note(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
    return m;
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed meta: ") + e.what());
  }
}

// ---- instances -------------------------------------------------------------
// Meta travels in its own sidecar file, never inside the instance.

inline Json to_json(const FunctionInstance& f) { return {{"model", "function"}, {"n", f.n}, {"succ", f.succ}}; }

inline Json to_json(const GraphInstance& g) {
  return {{"model", "graph"}, {"n", g.n()}, {"offsets", g.offsets()}, {"adjacency", g.adjacency()}};
}

using AnyInstance = std::variant<FunctionInstance, GraphInstance>;

inline AnyInstance instance_from_json(const Json& j, std::optional<StructureMeta> meta = std::nullopt) {
  try {
    const auto model = j.at("model").get<std::string>();
    const auto n = j.at("n").get<std::uint32_t>();
    if (model == "function") {
      auto succ = j.at("succ").get<std::vector<Element>>();
      if (succ.size() != n) throw IoError("succ length does not match n");
      return FunctionInstance(std::move(succ), std::move(meta));
    }
    if (model == "graph") {
      return GraphInstance::from_csr(n, j.at("offsets").get<std::vector<std::uint64_t>>(),
                                     j.at("adjacency").get<std::vector<Vertex>>(), std::move(meta));
    }
    throw IoError("unknown model " + model);
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed instance: ") + e.what());
  }
}

inline Json to_json(const Witness& w) { return {{"kind", to_string(w.kind)}, {"vertices", w.vertices}}; }

}  // namespace qsep
