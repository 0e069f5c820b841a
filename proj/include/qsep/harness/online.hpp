#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qsep/adversary.hpp"
#include "qsep/harness/trials.hpp"

namespace qsep {

// Fixed probe strategy: sample a vertex, read its degree, step to one random
// neighbor and read that degree too. Returns a label-free summary of the
// transcript: counts of degree answers 0, 1, 2 and >= 3.
template <GraphOracle O>
std::string probe_signature(O& oracle, std::uint64_t probes, Rng& rng) {
  std::array<std::uint64_t, 4> seen{};
  auto deg = [&](Vertex v) {
    const auto d = oracle.degree(v);
    ++seen[std::min<std::uint32_t>(d, 3)];
    return d;
  };
  while (oracle.count() < probes) {
    const auto v = static_cast<Vertex>(rng.below(oracle.n()));
    const auto d = deg(v);
    if (d == 0 || oracle.count() + 2 > probes) continue;
    const auto w = oracle.neighbor(v, static_cast<std::uint32_t>(rng.below(d)));
    deg(w);
  }
  return std::to_string(seen[0]) + "/" + std::to_string(seen[1]) + "/" + std::to_string(seen[2]) + "/" +
         std::to_string(seen[3]);
}

struct ChiSquare {
  double statistic = 0;
  double dof = 0;
  double p_value = 1;
  std::size_t bins = 0;
};

// Two-sample test on categorical counts. Categories whose pooled count is
// below min_pooled are merged into one bin.
inline ChiSquare chi_square_two_sample(const std::map<std::string, std::uint64_t>& a,
                                       const std::map<std::string, std::uint64_t>& b, std::uint64_t min_pooled = 10) {
  std::map<std::string, std::pair<double, double>> all;
  for (const auto& [k, v] : a) all[k].first += static_cast<double>(v);
  for (const auto& [k, v] : b) all[k].second += static_cast<double>(v);
  std::vector<std::pair<double, double>> bins;
  std::pair<double, double> rest{0, 0};
  for (const auto& [k, v] : all) {
    if (v.first + v.second >= static_cast<double>(min_pooled)) {
      bins.push_back(v);
    } else {
      rest.first += v.first;
      rest.second += v.second;
    }
  }
  if (rest.first + rest.second > 0) bins.push_back(rest);
  ChiSquare r;
  r.bins = bins.size();
  if (bins.size() < 2) return r;
  double na = 0, nb = 0;
  for (auto [x, y] : bins) {
    na += x;
    nb += y;
  }
  const double total = na + nb;
  for (auto [x, y] : bins) {
    const double pooled = x + y;
    const double ea = pooled * na / total, eb = pooled * nb / total;
    r.statistic += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
  }
  r.dof = static_cast<double>(bins.size() - 1);
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

inline ChiSquare chi_square_uniform(const std::vector<std::uint64_t>& counts) {
  ChiSquare r;
  r.bins = counts.size();
  if (counts.size() < 2) return r;
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  const double e = total / static_cast<double>(counts.size());
  for (auto c : counts) r.statistic += (static_cast<double>(c) - e) * (static_cast<double>(c) - e) / e;
  r.dof = static_cast<double>(counts.size() - 1);
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

struct OnlineOfflineConfig {
  std::uint32_t n = 1u << 12;
  ScaleParams params;
  std::uint64_t sessions = 10000;
  std::uint64_t probes = 200;
  std::uint64_t seed = 0;
};

inline Json to_json(const OnlineOfflineConfig& c) {
  return {{"kind", "online-offline"}, {"n", c.n},           {"i_min", c.params.i_min},  {"i_max", c.params.i_max},
          {"beta", c.params.beta},    {"gamma", c.params.gamma}, {"c", c.params.c},     {"sessions", c.sessions},
          {"probes", c.probes},       {"seed", c.seed}};
}

struct OnlineOfflineReport {
  std::string config_hash;
  std::map<std::string, std::uint64_t> online, offline;
  std::vector<std::uint64_t> good_online, good_offline;  // per scale, i_min first
  ChiSquare transcripts, good_index;
  bool finals_valid = true;
};

// Runs the same probe strategy against lazily resolved adversary sessions and
// against fully generated instances, then compares the two distributions.
inline OnlineOfflineReport online_offline_experiment(const OnlineOfflineConfig& c, unsigned threads = 0) {
  OnlineOfflineReport r;
  r.config_hash = config_hash(to_json(c));
  const int scales = c.params.i_max - c.params.i_min + 1;
  std::vector<std::string> sig_on(c.sessions), sig_off(c.sessions);
  std::vector<int> good_on(c.sessions), good_off(c.sessions);
  std::vector<std::uint8_t> valid(c.sessions, 1);
  parallel_for(c.sessions, threads, [&](std::uint64_t i) {
    const auto s = derive_seed(c.seed, i);
    {
      AdversarySession session(c.n, c.params, derive_seed(s, 1), derive_seed(s, 2));
      Rng probe(derive_seed(s, 3));
      sig_on[i] = probe_signature(session, c.probes, probe);
      const auto& g = session.finalize();
      good_on[i] = *session.good_index();
      valid[i] = g.meta && !brute_force_find(g, Target::claw()).empty();
    }
    {
      auto bundle = gen_claw_graph(c.n, c.params, derive_seed(s, 4));
      CountedGraphOracle oracle(bundle.instance, Relabeling::random(derive_seed(s, 5)), std::nullopt, derive_seed(s, 6));
      Rng probe(derive_seed(s, 7));
      sig_off[i] = probe_signature(oracle, c.probes, probe);
      good_off[i] = std::get<ClawScale>(bundle.certificate).t;
    }
  });
  r.good_online.assign(scales, 0);
  r.good_offline.assign(scales, 0);
  for (std::uint64_t i = 0; i < c.sessions; ++i) {
    ++r.online[sig_on[i]];
    ++r.offline[sig_off[i]];
    ++r.good_online[good_on[i] - c.params.i_min];
    ++r.good_offline[good_off[i] - c.params.i_min];
    r.finals_valid = r.finals_valid && valid[i];
  }
  r.transcripts = chi_square_two_sample(r.online, r.offline);
  r.good_index = chi_square_uniform(r.good_online);
  return r;
}

}  // namespace qsep
