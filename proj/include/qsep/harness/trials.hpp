#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "qsep/harness/registry.hpp"
#include "qsep/harness/stats.hpp"

namespace qsep {

struct TrialConfig {
  GenSpec generator;
  DetSpec detector;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
  bool fresh_instance_per_trial = true;
  bool corrupt_certificate = false;
};

inline Json to_json(const TrialConfig& c) {
  Json j{{"generator", {{"id", c.generator.id}, {"n", c.generator.n}, {"params", c.generator.params}}},
         {"detector", {{"id", c.detector.id}, {"params", c.detector.params}}},
         {"trials", c.trials},
         {"seed", c.seed},
         {"fresh_instance_per_trial", c.fresh_instance_per_trial},
         {"corrupt_certificate", c.corrupt_certificate}};
  j["budget"] = c.budget ? Json(*c.budget) : Json(nullptr);
  return j;
}

inline Model generator_model(const std::string& id) {
  if (id == "collision-fn" || id == "fixedpoint" || id == "identity") return Model::Function;
  if (id == "claw" || id == "star" || id == "starpath") return Model::Graph;
  throw ParameterError("unknown generator '" + id + "'");
}

inline void check_compatible(const TrialConfig& c) {
  const auto dm = detector_info(c.detector.id).model;
  const auto gm = generator_model(c.generator.id);
  if (dm != Model::Any && dm != gm) {
    throw ModelMismatch("detector " + c.detector.id + " cannot run on " + c.generator.id + " instances");
  }
}

// Seed streams of one trial.
struct TrialSeeds {
  std::uint64_t trial, instance, relabel, detector, ordering, corrupt;
};

inline TrialSeeds trial_seeds(const TrialConfig& c, std::uint64_t i) {
  const std::uint64_t ts = derive_seed(c.seed, i);
  return {ts,
          c.fresh_instance_per_trial ? derive_seed(ts, 1) : derive_seed(c.seed, ~std::uint64_t{0}),
          derive_seed(ts, 2),
          derive_seed(ts, 3),
          derive_seed(ts, 4),
          derive_seed(ts, 5)};
}

struct DetectorRun {
  SearchOutcome outcome;
  bool witness_valid = true;
  std::optional<Witness> witness;  // in ground-truth labels
};

// One detector run on a freshly relabeled copy of the bundle.
inline DetectorRun run_on_bundle(const AnyBundle& bundle, const DetSpec& det, const Json& gen_params,
                                 const Certificate& cert, std::optional<std::uint64_t> budget, std::uint64_t relabel_seed,
                                 std::uint64_t ordering_seed, std::uint64_t detector_seed) {
  DetectorRun r;
  const SearchOptions opt{budget, detector_seed};
  auto finish = [&](const auto& instance, auto& oracle) {
    if (r.outcome.witness) {
      r.witness = OracleInspector::unrelabel(oracle, *r.outcome.witness);
      r.witness_valid = validate(instance, *r.witness);
    }
  };
  if (auto f = std::get_if<FunctionBundle>(&bundle)) {
    CountedFunctionOracle o(f->instance, Relabeling::random(relabel_seed));
    r.outcome = run_detector(det, o, cert, gen_params, opt);
    finish(f->instance, o);
  } else {
    const auto& g = std::get<GraphBundle>(bundle);
    CountedGraphOracle o(g.instance, Relabeling::random(relabel_seed), std::nullopt, ordering_seed);
    r.outcome = run_detector(det, o, cert, gen_params, opt);
    finish(g.instance, o);
  }
  return r;
}

inline TrialRecord run_trial(const TrialConfig& c, std::uint64_t i, const AnyBundle* shared) {
  const auto s = trial_seeds(c, i);
  std::optional<AnyBundle> own;
  if (!shared) own = generate(c.generator, s.instance);
  const AnyBundle& bundle = shared ? *shared : *own;
  Certificate cert = certificate_of(bundle);
  if (c.corrupt_certificate) {
    Rng rng(s.corrupt);
    cert = corrupt_certificate(cert, size_of(bundle), c.generator.params, rng);
  }
  const auto run = run_on_bundle(bundle, c.detector, c.generator.params, cert, c.budget, s.relabel, s.ordering, s.detector);
  return {i, s.trial, run.outcome.status, run.outcome.queries, run.witness_valid};
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// Calls body(i) for i in [0, count) on a pool; rethrows the first failure.
template <typename Body>
void parallel_for(std::uint64_t count, unsigned threads, Body&& body) {
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, count)));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

struct TrialBatch {
  TrialConfig config;
  std::string config_hash;
  std::vector<TrialRecord> records;
  TrialStats stats;
};

inline TrialBatch run_trials(const TrialConfig& c, unsigned threads = 0) {
  check_compatible(c);
  TrialBatch b{c, config_hash(to_json(c)), std::vector<TrialRecord>(c.trials), {}};
  std::optional<AnyBundle> shared;
  if (!c.fresh_instance_per_trial && c.trials > 0) shared = generate(c.generator, trial_seeds(c, 0).instance);
  parallel_for(c.trials, threads, [&](std::uint64_t i) { b.records[i] = run_trial(c, i, shared ? &*shared : nullptr); });
  b.stats = summarize(b.records);
  return b;
}

// Budget for certificate-free runs: a fixed multiple of the certificate mean.
inline std::uint64_t censoring_budget(double cert_mean, double factor = 50.0) {
  return static_cast<std::uint64_t>(std::ceil(std::max(1.0, cert_mean) * factor));
}

// ---- separation ------------------------------------------------------------

struct SeparationConfig {
  std::uint32_t n = 1u << 20;
  Json scale_params = Json::object();  // everything but i_max
  std::vector<int> scale_counts{2, 4, 8, 16};
  std::uint64_t trials = 200;
  std::uint64_t seed = 0;
  double budget_factor = 50.0;
};

inline Json to_json(const SeparationConfig& c) {
  return {{"kind", "separation"},   {"n", c.n},          {"scale_params", c.scale_params}, {"scale_counts", c.scale_counts},
          {"trials", c.trials},      {"seed", c.seed},    {"budget_factor", c.budget_factor}};
}

struct SeparationRow {
  int s = 0;
  TrialBatch cert;
  TrialBatch nocert;
  double ratio = 0;
};

struct SeparationReport {
  std::string config_hash;
  std::vector<SeparationRow> rows;
  std::optional<LinearFit> fit;  // ratio against s
  std::vector<std::string> warnings;
};

inline SeparationReport separation_experiment(const SeparationConfig& c, unsigned threads = 0) {
  SeparationReport rep;
  rep.config_hash = config_hash(to_json(c));
  for (int s : c.scale_counts) {
    Json params = c.scale_params;
    const int lo = detail::param(params, "i_min", ScaleParams{}.i_min);
    params["i_min"] = lo;
    params["i_max"] = lo + s - 1;
    try {
      plan_scales(c.n, scale_params_from(params), LayoutModel::Function);
    } catch (const ParameterError& e) {
      rep.warnings.push_back("s = " + std::to_string(s) + " skipped: " + e.what());
      continue;
    }
    TrialConfig tc;
    tc.generator = {"collision-fn", c.n, params};
    tc.trials = c.trials;
    tc.seed = derive_seed(c.seed, static_cast<std::uint64_t>(s));
    tc.detector = {"cert-collision", Json::object()};
    SeparationRow row;
    row.s = s;
    row.cert = run_trials(tc, threads);
    tc.detector = {"multiscale-collision", Json::object()};
    tc.budget = censoring_budget(row.cert.stats.mean, c.budget_factor);
    row.nocert = run_trials(tc, threads);
    if (row.cert.stats.found == 0 || row.nocert.stats.found == 0) {
      rep.warnings.push_back("s = " + std::to_string(s) + ": no successful trials on one side");
      continue;
    }
    row.ratio = row.nocert.stats.mean / row.cert.stats.mean;
    rep.rows.push_back(std::move(row));
  }
  if (rep.rows.size() >= 2) {
    std::vector<double> xs, ys;
    for (const auto& r : rep.rows) {
      xs.push_back(r.s);
      ys.push_back(r.ratio);
    }
    rep.fit = least_squares(xs, ys);
  }
  return rep;
}

// ---- slope -----------------------------------------------------------------

struct SlopeConfig {
  GenSpec generator;  // n is overwritten per point
  DetSpec detector;
  std::vector<std::uint32_t> ns;
  std::uint64_t trials = 50;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
};

inline Json to_json(const SlopeConfig& c) {
  Json j{{"kind", "slope"},
         {"generator", {{"id", c.generator.id}, {"params", c.generator.params}}},
         {"detector", {{"id", c.detector.id}, {"params", c.detector.params}}},
         {"ns", c.ns},
         {"trials", c.trials},
         {"seed", c.seed}};
  j["budget"] = c.budget ? Json(*c.budget) : Json(nullptr);
  return j;
}

struct SlopeReport {
  std::string config_hash;
  std::vector<std::pair<std::uint32_t, TrialBatch>> rows;
  std::optional<SlopeFit> fit;
  std::vector<std::string> warnings;
};

inline SlopeReport slope_experiment(const SlopeConfig& c, unsigned threads = 0) {
  SlopeReport rep;
  rep.config_hash = config_hash(to_json(c));
  std::vector<std::pair<double, double>> pts;
  for (auto n : c.ns) {
    TrialConfig tc;
    tc.generator = c.generator;
    tc.generator.n = n;
    tc.detector = c.detector;
    tc.trials = c.trials;
    tc.seed = derive_seed(c.seed, n);
    tc.budget = c.budget;
    auto batch = run_trials(tc, threads);
    if (batch.stats.found == 0) {
      rep.warnings.push_back("n = " + std::to_string(n) + ": no successful trials");
    } else {
      pts.emplace_back(n, batch.stats.mean);
    }
    rep.rows.emplace_back(n, std::move(batch));
  }
  if (pts.size() >= 3) {
    try {
      rep.fit = slope_fit(pts);
    } catch (const ParameterError& e) {
      rep.warnings.push_back(e.what());
    }
  }
  return rep;
}

}  // namespace qsep
