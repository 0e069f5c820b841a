#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qsep/detect/brute_force.hpp"
#include "qsep/harness/registry.hpp"
#include "qsep/primes.hpp"

namespace qsep {

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  const Check* first_failure() const {
    for (const auto& c : checks) {
      if (!c.pass) return &c;
    }
    return nullptr;
  }
};

// The witness kind each construction plants.
inline Target planted_target(const GenSpec& spec) {
  const auto& p = spec.params;
  if (spec.id == "collision-fn") return Target::collision();
  if (spec.id == "claw") return Target::claw();
  if (spec.id == "starpath") return Target::star(detail::param<std::uint32_t>(p, "k", 4));
  if (spec.id == "identity") return Target::fixed_point();
  if (spec.id == "fixedpoint" || spec.id == "star") {
    const auto h = HSpec::parse(detail::param<std::string>(p, "H", spec.id == "star" ? "triangle" : "fixed-point"));
    switch (h.kind) {
      case HSpec::Kind::FixedPoint: return Target::fixed_point();
      case HSpec::Kind::KCollision: return Target::k_collision(h.size);
      case HSpec::Kind::Clique: return Target::clique(h.size);
      case HSpec::Kind::None: return spec.id == "star" ? Target::clique(3) : Target::fixed_point();
    }
  }
  throw ParameterError("unknown generator '" + spec.id + "'");
}

namespace detail {

inline std::uint64_t declared_witnesses(const GenSpec& spec, const StructureMeta& meta) {
  return spec.id == "identity" ? spec.n : meta.witness_locations.size();
}

inline bool prime_slow(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

// Feeder entries on each host cycle are equally spaced by a prime.
inline Check prime_spacing(const FunctionInstance& f, const StructureMeta& meta) {
  std::map<std::int64_t, std::vector<Element>> entries;
  for (const auto& s : meta.structures) {
    if (s.kind == StructureKind::Feeder) entries[s.tag].push_back(f.succ[s.members.back()]);
  }
  for (const auto& [idx, xs] : entries) {
    const auto& cyc = meta.structures.at(static_cast<std::size_t>(idx));
    std::map<Element, std::size_t> pos;
    for (std::size_t k = 0; k < cyc.members.size(); ++k) pos[cyc.members[k]] = k;
    std::vector<std::size_t> ps;
    for (auto x : xs) {
      auto it = pos.find(x);
      if (it == pos.end()) return {"prime-spacing", false, "feeder enters outside its host cycle"};
      ps.push_back(it->second);
    }
    std::sort(ps.begin(), ps.end());
    if (ps.size() < 2) continue;
    const auto p = ps[1] - ps[0];
    if (!prime_slow(p)) return {"prime-spacing", false, "spacing " + std::to_string(p) + " is not prime"};
    for (std::size_t k = 1; k < ps.size(); ++k) {
      if (ps[k] - ps[k - 1] != p) return {"prime-spacing", false, "unequal entry spacing on cycle " + std::to_string(idx)};
    }
    if (cyc.kind == StructureKind::Cycle && (cyc.members.size() % p != 0 || static_cast<std::uint64_t>(cyc.tag) != p)) {
      return {"prime-spacing", false, "cycle " + std::to_string(idx) + " length or tag disagrees with spacing"};
    }
  }
  return {"prime-spacing", true, std::to_string(entries.size()) + " host cycles"};
}

// Paths, cycles and feeders must follow succ in member order.
inline Check structure_edges(const FunctionInstance& f, const StructureMeta& meta) {
  for (std::size_t i = 0; i < meta.structures.size(); ++i) {
    const auto& s = meta.structures[i];
    if (s.kind != StructureKind::Path && s.kind != StructureKind::Cycle && s.kind != StructureKind::Feeder) continue;
    const auto& m = s.members;
    for (std::size_t j = 0; j + 1 < m.size(); ++j) {
      if (f.succ[m[j]] != m[j + 1]) {
        return {"partition", false, std::string(to_string(s.kind)) + " " + std::to_string(i) + " broken at element " +
                                        std::to_string(m[j])};
      }
    }
    if (s.kind == StructureKind::Cycle && !m.empty() && f.succ[m.back()] != m.front()) {
      return {"partition", false, "cycle " + std::to_string(i) + " does not close"};
    }
  }
  return {"structure-edges", true, "succ follows every path, cycle and feeder"};
}

inline Check degree_uniqueness(const GraphInstance& g, const StructureMeta& meta, const Certificate& cert) {
  std::set<std::uint32_t> degs;
  std::uint64_t centers = 0;
  for (const auto& s : meta.structures) {
    if (s.kind != StructureKind::Star) continue;
    ++centers;
    const auto d = g.degree(s.members.front());
    if (d != static_cast<std::uint32_t>(s.tag)) {
      return {"degree-uniqueness", false, "center " + std::to_string(s.members.front()) + " has degree " +
                                              std::to_string(d) + ", meta says " + std::to_string(s.tag)};
    }
    degs.insert(d);
  }
  if (degs.size() != centers) return {"degree-uniqueness", false, "two star centers share a degree"};
  if (const auto* sd = std::get_if<StarDegrees>(&cert)) {
    for (auto d : sd->degrees) {
      if (!degs.contains(d)) return {"degree-uniqueness", false, "certified degree " + std::to_string(d) + " has no star"};
    }
  }
  return {"degree-uniqueness", true, std::to_string(centers) + " centers, all degrees distinct"};
}

}  // namespace detail

// Structural checks against ground truth. Brute force runs only when n is
// within its guard.
inline VerifyReport verify_bundle(const AnyBundle& bundle, const GenSpec& spec) {
  VerifyReport r;
  const auto& meta = meta_of(bundle);
  const auto n = size_of(bundle);
  try {
    check_partition(meta, n);
    r.checks.push_back({"partition", true, std::to_string(meta.structures.size()) + " structures cover " + std::to_string(n)});
  } catch (const DomainError& e) {
    r.checks.push_back({"partition", false, e.what()});
    return r;
  }

  if (const auto* fb = std::get_if<FunctionBundle>(&bundle)) {
    r.checks.push_back(detail::structure_edges(fb->instance, meta));
    if (!r.checks.back().pass) return r;
  }

  const auto target = planted_target(spec);
  const auto declared = detail::declared_witnesses(spec, meta);
  std::visit(
      [&](const auto& b) {
        const auto& inst = b.instance;
        bool all_valid = true;
        for (const auto& w : meta.witness_locations) {
          all_valid = all_valid && validate(inst, Witness{target.kind, w});
        }
        r.checks.push_back({"declared-witnesses-valid", all_valid, std::to_string(meta.witness_locations.size()) + " declared"});
        if (n <= kBruteForceLimit) {
          const auto found = brute_force_find(inst, target).size();
          r.checks.push_back({"witness-count", found == declared,
                              target.str() + ": " + std::to_string(declared) + " expected / " + std::to_string(found) + " found"});
        } else {
          r.checks.push_back({"witness-count", true, "skipped: n above brute-force guard"});
        }
      },
      bundle);

  const auto& cert = certificate_of(bundle);
  if (const auto* c = std::get_if<CollisionScale>(&cert)) {
    r.checks.push_back({"certificate", meta.good_index == c->t, "t = " + std::to_string(c->t)});
  } else if (const auto* c = std::get_if<ClawScale>(&cert)) {
    r.checks.push_back({"certificate", meta.good_index == c->t, "t = " + std::to_string(c->t)});
  }
  if (spec.id == "fixedpoint") r.checks.push_back(detail::prime_spacing(std::get<FunctionBundle>(bundle).instance, meta));
  if (spec.id == "star") r.checks.push_back(detail::degree_uniqueness(std::get<GraphBundle>(bundle).instance, meta, cert));
  return r;
}

}  // namespace qsep
