#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "qsep/harness/online.hpp"
#include "qsep/harness/verify.hpp"
#include "qsep/io/report.hpp"
#include "qsep/qsep.hpp"

using namespace qsep;
namespace fs = std::filesystem;

namespace {

// Tolerances and sizes.
constexpr std::uint32_t kExactN = 1u << 16;
constexpr int kExactInstances = 20;
constexpr std::uint64_t kMonteCarloAttempts = 100000;
constexpr double kBinomialConfidence = 0.99;
constexpr double kScaleSumRelTol = 0.05;

constexpr std::uint32_t kAdversaryN = 1u << 12;
constexpr std::uint64_t kAdversarySessions = 10000;
constexpr std::uint64_t kAdversaryProbes = 200;
constexpr double kMinPValue = 0.01;

constexpr std::uint32_t kSeparationN = 1u << 20;
constexpr double kSeparationC = 0.3;
constexpr double kSeparationBeta = 1.75;
constexpr double kSeparationGamma = 1.1;
constexpr int kSeparationIMin = 2;
constexpr std::uint64_t kSeparationTrials = 300;
constexpr int kReplicates = 3;
constexpr double kMinR2 = 0.8;

const std::vector<std::uint32_t> kSlopeNs{1u << 12, 1u << 14, 1u << 16, 1u << 18};
constexpr std::uint64_t kCertSlopeTrials = 200;
constexpr std::uint64_t kBaselineSlopeTrials = 40;
constexpr double kMinRatioAtTop = 10.0;
constexpr double kFixedPointC = 1.0;

constexpr std::uint32_t kBruteN = 1u << 10;
constexpr std::uint64_t kBruteInstances = 1000;
constexpr std::uint64_t kCorruptRuns = 500;
constexpr std::uint32_t kCorruptN = 1u << 12;

constexpr std::uint64_t kMaster = 20240601;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

ScaleParams exact_params() {
  ScaleParams p;
  p.i_min = 2;
  p.i_max = 6;
  p.c = 0.3;
  return p;
}

// Lightweight oracle for Monte Carlo attempts: counts, does not record.
struct PlainOracle {
  const FunctionInstance* f;
  std::uint64_t queries = 0;
  std::uint32_t n() const { return f->n; }
  Element query(Element x) {
    ++queries;
    return f->succ[x];
  }
  std::uint64_t count() const { return queries; }
};

// ---- 1 and 2 ---------------------------------------------------------------

Outcome exact_success() {
  int inside = 0, exact_eq = 0;
  std::ostringstream worst;
  double worst_margin = 1e9;
  for (int k = 0; k < kExactInstances; ++k) {
    const auto b = gen_collision_function(kExactN, exact_params(), derive_seed(kMaster, 100 + k));
    const int t = std::get<CollisionScale>(b.certificate).t;
    const auto enumerated = exact_cert_expectation(b.instance, t);
    const auto closed = closed_form_expectation(b.meta(), kExactN, t);
    exact_eq += enumerated.success == closed.success;

    Rng rng(derive_seed(kMaster, 200 + k));
    PlainOracle o{&b.instance};
    std::uint64_t wins = 0;
    for (std::uint64_t a = 0; a < kMonteCarloAttempts; ++a) {
      wins += collision_attempt(o, static_cast<Element>(rng.below(kExactN)), std::uint64_t{1} << t).success;
    }
    const auto ci = binomial_interval(wins, kMonteCarloAttempts, kBinomialConfidence);
    const double p = to_double(enumerated.success);
    const bool in = ci.lo <= p && p <= ci.hi;
    inside += in;
    const double margin = std::min(p - ci.lo, ci.hi - p) / (ci.hi - ci.lo);
    if (margin < worst_margin) {
      worst_margin = margin;
      worst.str("");
      worst << "instance " << k << ": exact " << fmt(p) << " vs [" << fmt(ci.lo) << ", " << fmt(ci.hi) << "]";
    }
  }
  return {inside == kExactInstances && exact_eq == kExactInstances,
          std::to_string(exact_eq) + "/" + std::to_string(kExactInstances) + " enumerations equal usable-starts/n; " +
              std::to_string(inside) + "/" + std::to_string(kExactInstances) + " Monte Carlo inside 99% CI; tightest " +
              worst.str()};
}

Outcome scale_sum_agreement() {
  int exact_eq = 0, within = 0;
  double worst = 0;
  for (int k = 0; k < kExactInstances; ++k) {
    const auto params = exact_params();
    const auto b = gen_collision_function(kExactN, params, derive_seed(kMaster, 100 + k));
    const int t = std::get<CollisionScale>(b.certificate).t;
    const auto enumerated = exact_cert_expectation(b.instance, t);
    const auto closed = closed_form_expectation(b.meta(), kExactN, t);
    exact_eq += enumerated.queries == closed.queries;
    const auto plan = plan_scales(kExactN, params, LayoutModel::Function);
    const auto analytic = analytic_expectation(plan, t, plan.b_at(t), params.filler, params.target);
    const double rel = std::abs(to_double(analytic.queries) - to_double(enumerated.queries)) / to_double(enumerated.queries);
    worst = std::max(worst, rel);
    within += rel <= kScaleSumRelTol;
  }
  return {exact_eq == kExactInstances && within == kExactInstances,
          std::to_string(within) + "/" + std::to_string(kExactInstances) + " scale sums within 5% (worst " + fmt(100 * worst, 3) +
              "%); " + std::to_string(exact_eq) + "/" + std::to_string(kExactInstances) + " exact rational equalities"};
}

// ---- 3 ---------------------------------------------------------------------

Outcome online_offline(unsigned threads) {
  OnlineOfflineConfig c;
  c.n = kAdversaryN;
  c.params.i_min = 3;
  c.params.i_max = 5;
  c.params.c = 0.2;
  c.sessions = kAdversarySessions;
  c.probes = kAdversaryProbes;
  c.seed = kMaster;
  const auto r = online_offline_experiment(c, threads);
  const bool pass = r.transcripts.p_value > kMinPValue && r.good_index.p_value > kMinPValue && r.finals_valid;
  return {pass, "transcripts chi2 p = " + fmt(r.transcripts.p_value) + " (" + std::to_string(r.transcripts.bins) +
                    " bins); good index p = " + fmt(r.good_index.p_value) + "; finals valid: " + (r.finals_valid ? "yes" : "no")};
}

// ---- 4 ---------------------------------------------------------------------

Outcome separation(unsigned threads) {
  bool pass = true;
  std::ostringstream os;
  for (int rep = 0; rep < kReplicates; ++rep) {
    SeparationConfig c;
    c.n = kSeparationN;
    c.scale_params = {{"c", kSeparationC}, {"beta", kSeparationBeta}, {"gamma", kSeparationGamma}, {"i_min", kSeparationIMin}};
    c.scale_counts = {2, 4, 8, 16};
    c.trials = kSeparationTrials;
    c.seed = derive_seed(kMaster, 400 + rep);
    const auto r = separation_experiment(c, threads);
    bool increasing = r.rows.size() == c.scale_counts.size();
    os << (rep ? "; " : "") << "rep " << rep + 1 << " ratios";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      os << " " << fmt(r.rows[i].ratio, 3);
      if (i > 0 && !(r.rows[i].ratio > r.rows[i - 1].ratio)) increasing = false;
    }
    const bool fit_ok = r.fit && r.fit->slope > 0 && r.fit->r2 >= kMinR2;
    if (r.fit) os << " slope " << fmt(r.fit->slope, 3) << " R2 " << fmt(r.fit->r2, 3);
    for (const auto& w : r.warnings) os << " [" << w << "]";
    pass = pass && increasing && fit_ok;
  }
  return {pass, os.str()};
}

// ---- 5 and 6 ---------------------------------------------------------------

struct SlopeRun {
  SlopeReport report;
  double top_mean = 0;
};

SlopeRun run_slope(const GenSpec& gen, const DetSpec& det, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  SlopeConfig c{gen, det, kSlopeNs, trials, seed, std::nullopt};
  SlopeRun r{slope_experiment(c, threads), 0};
  r.top_mean = r.report.rows.back().second.stats.mean;
  return r;
}

Outcome polynomial_separation(const GenSpec& gen, const DetSpec& cert_det, const DetSpec& base_det, double cert_lo,
                              double cert_hi, std::uint64_t seed, unsigned threads) {
  const auto cert = run_slope(gen, cert_det, kCertSlopeTrials, seed, threads);
  const auto base = run_slope(gen, base_det, kBaselineSlopeTrials, seed + 1, threads);
  const bool fits = cert.report.fit && base.report.fit;
  const double cs = fits ? cert.report.fit->exponent : 0, bs = fits ? base.report.fit->exponent : 0;
  const double ratio = base.top_mean / cert.top_mean;
  const bool pass = fits && cs >= cert_lo && cs <= cert_hi && bs >= 0.85 && bs <= 1.15 && ratio >= kMinRatioAtTop;
  std::ostringstream os;
  os << "cert slope " << fmt(cs, 3) << " in [" << cert_lo << ", " << cert_hi << "]? " << (cs >= cert_lo && cs <= cert_hi ? "yes" : "no")
     << "; baseline slope " << fmt(bs, 3) << " in [0.85, 1.15]? " << (bs >= 0.85 && bs <= 1.15 ? "yes" : "no")
     << "; ratio at 2^18 " << fmt(ratio, 3) << " >= 10? " << (ratio >= kMinRatioAtTop ? "yes" : "no");
  for (const auto& w : cert.report.warnings) os << " [cert: " << w << "]";
  for (const auto& w : base.report.warnings) os << " [baseline: " << w << "]";
  return {pass, os.str()};
}

Outcome fixedpoint_separation(unsigned threads) {
  return polynomial_separation({"fixedpoint", 0, {{"widen_window", true}, {"cycles", 2}}},
                               {"cert-fixedpoint", {{"C", kFixedPointC}}},
                               {"probe-baseline", {{"target", "fixed-point"}}}, 0.6, 0.9, derive_seed(kMaster, 500), threads);
}

Outcome starpath_separation(unsigned threads) {
  return polynomial_separation({"starpath", 0, {{"k", 4}}}, {"cert-starpath", Json::object()},
                               {"probe-baseline", {{"target", "star:4"}}}, 0.35, 0.65, derive_seed(kMaster, 600), threads);
}

// ---- 7 ---------------------------------------------------------------------

struct Construction {
  GenSpec gen;
  std::vector<DetSpec> detectors;
};

std::vector<Construction> small_constructions() {
  const Json scales{{"i_min", 2}, {"i_max", 4}, {"c", 0.3}};
  return {
      {{"collision-fn", kBruteN, scales},
       {{"cert-collision", {}}, {"multiscale-collision", {}}, {"path-k", {{"k", 3}}}, {"probe-baseline", {{"target", "collision"}}}}},
      {{"claw", kBruteN, scales}, {{"cert-claw", {}}, {"edge-wedge", {{"target", "wedge"}}}, {"probe-baseline", {{"target", "claw"}}}}},
      {{"fixedpoint", kBruteN, {{"widen_window", true}}},
       {{"cert-fixedpoint", {{"C", 2}}}, {"path-k", {{"k", 1}}}, {"probe-baseline", {{"target", "fixed-point"}}}}},
      {{"fixedpoint", kBruteN, {{"widen_window", true}, {"H", "collision:3"}, {"cycles", 3}, {"cycle_len", 96}, {"feeder_len", 4}}},
       {{"cert-fixedpoint", {{"C", 2}}}, {"probe-baseline", {{"target", "collision"}}}}},
      {{"star", kBruteN, {{"H", "triangle"}}}, {{"cert-star", {}}, {"edge-wedge", {{"target", "edge"}}}}},
      {{"starpath", kBruteN, {{"k", 4}}}, {{"cert-starpath", {}}, {"probe-baseline", {{"target", "star:4"}}}}},
      {{"identity", kBruteN, Json::object()}, {{"path-k", {{"k", 1}}}, {"probe-baseline", {{"target", "fixed-point"}}}}},
  };
}

Outcome brute_force_equivalence(unsigned threads) {
  std::uint64_t instances = 0, count_mismatch = 0, found = 0, invalid = 0;
  std::string first_problem;
  std::mutex mu;
  for (const auto& c : small_constructions()) {
    parallel_for(kBruteInstances, threads, [&](std::uint64_t i) {
      const auto seed = derive_seed(derive_seed(kMaster, 700), i);
      const auto bundle = generate(c.gen, seed);
      const auto v = verify_bundle(bundle, c.gen);
      std::uint64_t f = 0, bad = 0;
      for (std::size_t d = 0; d < c.detectors.size(); ++d) {
        const auto s = derive_seed(seed, 10 + d);
        const auto run = run_on_bundle(bundle, c.detectors[d], c.gen.params, certificate_of(bundle), 20ull * kBruteN,
                                       derive_seed(s, 2), derive_seed(s, 4), derive_seed(s, 3));
        f += run.outcome.status == Status::Found;
        bad += run.outcome.status == Status::Found && !run.witness_valid;
      }
      std::lock_guard lock(mu);
      ++instances;
      found += f;
      invalid += bad;
      if (!v.ok()) {
        ++count_mismatch;
        if (first_problem.empty()) first_problem = c.gen.id + ": " + v.first_failure()->name + " " + v.first_failure()->detail;
      }
    });
  }
  return {count_mismatch == 0 && invalid == 0,
          std::to_string(instances) + " instances, " + std::to_string(count_mismatch) + " count mismatches, " +
              std::to_string(found) + " detector witnesses, " + std::to_string(invalid) + " invalid" +
              (first_problem.empty() ? "" : " (" + first_problem + ")")};
}

// ---- 8 ---------------------------------------------------------------------

Outcome certificate_robustness(unsigned threads) {
  const Json scales{{"i_min", 2}, {"i_max", 6}, {"c", 0.3}};
  const std::vector<std::pair<GenSpec, DetSpec>> pairs{
      {{"collision-fn", kCorruptN, scales}, {"cert-collision", {}}},
      {{"claw", kCorruptN, scales}, {"cert-claw", {}}},
      {{"fixedpoint", kCorruptN, {{"widen_window", true}}}, {"cert-fixedpoint", {{"C", 2}}}},
      {{"star", kCorruptN, {{"H", "triangle"}}}, {"cert-star", {}}},
      {{"starpath", kCorruptN, {{"k", 4}}}, {"cert-starpath", {}}},
  };
  bool pass = true;
  std::ostringstream os;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    TrialConfig c;
    c.generator = pairs[i].first;
    c.detector = pairs[i].second;
    c.trials = kCorruptRuns;
    c.seed = derive_seed(kMaster, 800 + i);
    c.budget = 20ull * kCorruptN;
    c.corrupt_certificate = true;
    const auto b = run_trials(c, threads);
    pass = pass && b.stats.invalid_witnesses == 0;
    os << (i ? "; " : "") << c.detector.id << " " << b.stats.found << " found, " << b.stats.invalid_witnesses << " invalid";
  }
  return {pass, os.str()};
}

// ---- 9 ---------------------------------------------------------------------

std::map<std::string, std::string> slurp_dir(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return out;
}

Outcome determinism(const std::string& cli, const fs::path& work) {
  if (cli.empty() || !fs::exists(cli)) return {false, "CLI binary not found: '" + cli + "'"};
  const std::vector<std::string> commands{
      "gen --construction collision-fn --n 4096 --scales 2..5 --c 0.3 --seed 7",
      "gen --construction claw --n 4096 --scales 2..5 --seed 8",
      "gen --construction fixedpoint --n 16384 --param widen_window=true --seed 9",
      "gen --construction star --n 4096 --H triangle --seed 10",
      "gen --construction starpath --n 4096 --k 4 --seed 11",
      "verify --instance collision-fn.instance.json --cert collision-fn.cert.json --meta collision-fn.meta.json",
      "verify --instance star.instance.json --cert star.cert.json --meta star.meta.json",
      "run --instance collision-fn.instance.json --cert collision-fn.cert.json --detector cert-collision --seed 1",
      "run --instance collision-fn.instance.json --cert collision-fn.cert.json --detector cert-collision --corrupt-cert "
      "--budget 100000 --seed 2 --out corrupt.run.json",
      "run --instance claw.instance.json --cert claw.cert.json --detector cert-claw --seed 3",
      "run --instance fixedpoint.instance.json --cert fixedpoint.cert.json --detector cert-fixedpoint --seed 4",
      "run --instance star.instance.json --cert star.cert.json --detector cert-star --seed 5",
      "run --instance starpath.instance.json --cert starpath.cert.json --detector cert-starpath --seed 6",
      "bench --config sep.json --plot --seed 3",
      "bench --config slope.json --plot --seed 4",
      "bench --config trials.json --plot --seed 5",
      "adversary-test --sessions 300 --seed 6",
      "report --in sep.report.json --name sep-replot",
  };
  const std::string sep = R"({"kind":"separation","n":16384,"scale_params":{"c":0.3,"beta":1.75,"gamma":1.1,"i_min":2},"scale_counts":[2,4],"trials":20})";
  const std::string slope = R"({"kind":"slope","generator":{"id":"starpath","params":{"k":4}},"detector":{"id":"cert-starpath"},"ns":[1024,4096,16384],"trials":10})";
  const std::string trials = R"({"kind":"trials","generator":{"id":"claw","n":4096,"params":{"i_min":2,"i_max":5}},"detector":{"id":"cert-claw"},"trials":30})";

  std::vector<std::map<std::string, std::string>> runs;
  for (const char* threads : {"1", "2"}) {
    const auto dir = work / (std::string("run-threads-") + threads);
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_text_file((dir / "sep.json").string(), sep);
    write_text_file((dir / "slope.json").string(), slope);
    write_text_file((dir / "trials.json").string(), trials);
    for (std::size_t i = 0; i < commands.size(); ++i) {
      const std::string cmd = "cd '" + dir.string() + "' && '" + cli + "' --out-dir . --threads " + threads + " " +
                              commands[i] + " > stdout-" + std::to_string(i) + ".txt 2>&1";
      const int rc = std::system(cmd.c_str());
      if (rc != 0) return {false, "command failed (" + std::to_string(rc) + "): " + commands[i]};
    }
    runs.push_back(slurp_dir(dir));
  }
  std::vector<std::string> differing;
  for (const auto& [name, body] : runs[0]) {
    auto it = runs[1].find(name);
    if (it == runs[1].end() || it->second != body) differing.push_back(name);
  }
  if (runs[0].size() != runs[1].size()) differing.push_back("(file sets differ)");
  std::string detail = std::to_string(commands.size()) + " commands, " + std::to_string(runs[0].size()) +
                       " files and stdout captures compared across two runs (1 and 2 threads)";
  if (!differing.empty()) detail += "; differing: " + differing.front();
  return {differing.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance battery"};
  std::string cli;
  std::string work = "acceptance_work";
  std::vector<int> only;
  unsigned threads = 0;
  app.add_option("--cli", cli, "path to the qsep binary");
  app.add_option("--work-dir", work);
  app.add_option("--only", only, "criteria to run (default: all)");
  app.add_option("--threads", threads);
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact success probability", exact_success},
      {"scale-sum agreement", scale_sum_agreement},
      {"online adversary matches offline distribution", [&] { return online_offline(threads); }},
      {"separation grows with the number of scales", [&] { return separation(threads); }},
      {"polynomial separation, fixed points", [&] { return fixedpoint_separation(threads); }},
      {"polynomial separation, star paths", [&] { return starpath_separation(threads); }},
      {"brute-force equivalence", [&] { return brute_force_equivalence(threads); }},
      {"certificate robustness", [&] { return certificate_robustness(threads); }},
      {"determinism", [&] { return determinism(fs::absolute(cli).string(), fs::absolute(work)); }},
  };

  int passed = 0, ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ++ran;
    passed += o.pass;
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << " [" << criteria[i].first << "] " << o.detail
              << " (" << fmt(secs, 3) << " s)" << std::endl;
  }
  std::cout << "acceptance: " << passed << "/" << ran << " criteria pass" << std::endl;
  return 0;
}
