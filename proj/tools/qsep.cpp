#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qsep/harness/online.hpp"
#include "qsep/harness/verify.hpp"
#include "qsep/io/report.hpp"
#include "qsep/qsep.hpp"

using namespace qsep;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInfeasible = 2, kMismatch = 3, kIo = 4 };

struct Globals {
  std::string out_dir = ".";
  unsigned threads = 0;
  std::uint64_t seed = 0;
};

std::string out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return (fs::path(g.out_dir) / name).string();
}

std::string inst_name(const std::string& path) { return fs::path(path).filename().string(); }

std::string in_path(const Globals& g, const std::string& name) {
  const fs::path p(name);
  return p.is_absolute() ? name : (fs::path(g.out_dir) / p).string();
}

// "key=value" pairs; values parse as JSON when they can, else as strings.
Json parse_params(const std::vector<std::string>& kvs) {
  Json p = Json::object();
  for (const auto& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ParameterError("expected key=value, got '" + kv + "'");
    const auto key = kv.substr(0, eq), value = kv.substr(eq + 1);
    p[key] = Json::accept(value) ? Json::parse(value) : Json(value);
  }
  return p;
}

std::string status_line(const SearchOutcome& o) {
  std::ostringstream os;
  os << "status: " << to_string(o.status) << "\nqueries: " << o.queries << "\nattempts: " << o.attempts << "\n";
  return os.str();
}

// ---- gen -------------------------------------------------------------------

struct GenFlags {
  std::string construction;
  std::uint32_t n = 0;
  std::string scales;
  std::optional<double> c, beta, gamma, rho;
  std::optional<std::string> filler, target, H;
  std::optional<std::uint32_t> k;
  std::vector<std::string> params;
  std::string name;
};

GenSpec gen_spec(const GenFlags& f) {
  GenSpec s{f.construction, f.n, parse_params(f.params)};
  if (!f.scales.empty()) {
    const auto dots = f.scales.find("..");
    if (dots == std::string::npos) throw ParameterError("--scales expects lo..hi");
    s.params["i_min"] = std::stoi(f.scales.substr(0, dots));
    s.params["i_max"] = std::stoi(f.scales.substr(dots + 2));
  }
  if (f.c) s.params["c"] = *f.c;
  if (f.beta) s.params["beta"] = *f.beta;
  if (f.gamma) s.params["gamma"] = *f.gamma;
  if (f.rho) s.params["rho"] = *f.rho;
  if (f.filler) s.params["filler"] = *f.filler;
  if (f.target) s.params["target"] = *f.target;
  if (f.H) s.params["H"] = *f.H;
  if (f.k) s.params["k"] = *f.k;
  return s;
}

Json gen_header(const GenSpec& s, std::uint64_t seed) {
  Json cfg{{"generator", {{"id", s.id}, {"n", s.n}, {"params", s.params}}}, {"seed", seed}};
  return {{"config_hash", config_hash(cfg)}, {"config", cfg}};
}

int cmd_gen(const Globals& g, const GenFlags& f) {
  const auto spec = gen_spec(f);
  const auto bundle = generate(spec, g.seed);
  const auto header = gen_header(spec, g.seed);
  const auto name = f.name.empty() ? spec.id : f.name;

  Json inst = header;
  std::visit([&](const auto& b) { inst["instance"] = to_json(b.instance); }, bundle);
  Json cert = header;
  cert["certificate"] = to_json(certificate_of(bundle));
  Json meta = header;
  meta["meta"] = to_json(meta_of(bundle));
  const auto pi = out_path(g, name + ".instance.json"), pc = out_path(g, name + ".cert.json"),
             pm = out_path(g, name + ".meta.json");
  write_json_file(pi, inst);
  write_json_file(pc, cert);
  write_json_file(pm, meta);

  std::cout << "config_hash: " << header["config_hash"].get<std::string>() << "\n";
  if (spec.id == "collision-fn" || spec.id == "claw") {
    const auto plan = plan_scales(spec.n, scale_params_from(spec.params),
                                  spec.id == "claw" ? LayoutModel::Claw : LayoutModel::Function);
    std::cout << "capacity: sum a_i*2^i = " << plan.path_elements() << " of n = " << plan.n << "\n";
    std::cout << "rho: " << fmt_double(plan.rho) << "\n";
    for (const auto& w : plan.warnings) std::cout << "warning: " << w << "\n";
  }
  for (const auto& [k, v] : meta_of(bundle).notes) {
    if (k != "warning") std::cout << "note: " << k << " = " << v << "\n";
  }
  std::cout << "certificate: " << to_json(certificate_of(bundle)).dump() << "\n";
  std::cout << "witnesses: " << meta_of(bundle).witness_locations.size() << "\n";
  std::cout << "wrote: " << pi << "\nwrote: " << pc << "\nwrote: " << pm << "\n";
  return kOk;
}

// ---- loading ---------------------------------------------------------------

struct Loaded {
  AnyBundle bundle;
  GenSpec spec;
};

Loaded load(const Globals& g, const std::string& instance_file, const std::string& cert_file,
            const std::string& meta_file) {
  const auto inst = read_json_file(in_path(g, instance_file));
  std::optional<StructureMeta> meta;
  if (!meta_file.empty()) meta = meta_from_json(read_json_file(in_path(g, meta_file)).at("meta"));
  Certificate cert = PathLength{1};
  if (!cert_file.empty()) cert = certificate_from_json(read_json_file(in_path(g, cert_file)).at("certificate"));
  GenSpec spec;
  try {
    const auto& gen = inst.at("config").at("generator");
    spec = {gen.at("id").get<std::string>(), gen.at("n").get<std::uint32_t>(), gen.at("params")};
  } catch (const Json::exception& e) {
    throw IoError(std::string("instance file lacks its generator header: ") + e.what());
  }
  auto any = instance_from_json(inst.at("instance"), std::move(meta));
  if (auto* f = std::get_if<FunctionInstance>(&any)) return {FunctionBundle{std::move(*f), cert}, spec};
  return {GraphBundle{std::move(std::get<GraphInstance>(any)), cert}, spec};
}

// ---- run -------------------------------------------------------------------

struct RunFlags {
  std::string instance, cert, meta, detector, out;
  std::vector<std::string> params;
  std::optional<std::uint64_t> budget;
  bool corrupt = false;
};

int cmd_run(const Globals& g, const RunFlags& f) {
  const auto info = detector_info(f.detector);
  auto [bundle, spec] = load(g, f.instance, f.cert, f.meta);
  if (info.model != Model::Any && info.model != model_of(bundle)) {
    throw ModelMismatch(f.detector + " cannot run on a " + (model_of(bundle) == Model::Function ? "function" : "graph") +
                        " instance");
  }
  if (info.needs_certificate && f.cert.empty()) throw ParameterError(f.detector + " needs --cert");
  const DetSpec det{f.detector, parse_params(f.params)};
  Certificate cert = certificate_of(bundle);
  if (f.corrupt) {
    Rng rng(derive_seed(g.seed, 5));
    cert = corrupt_certificate(cert, size_of(bundle), spec.params, rng);
  }
  const auto run = run_on_bundle(bundle, det, spec.params, cert, f.budget, derive_seed(g.seed, 2), derive_seed(g.seed, 4),
                                 derive_seed(g.seed, 3));

  Json cfg{{"instance", inst_name(f.instance)}, {"detector", {{"id", det.id}, {"params", det.params}}}, {"seed", g.seed},
           {"corrupt_certificate", f.corrupt}, {"certificate", to_json(cert)}};
  cfg["budget"] = f.budget ? Json(*f.budget) : Json(nullptr);
  Json rec{{"config_hash", config_hash(cfg)},
           {"config", cfg},
           {"status", to_string(run.outcome.status)},
           {"queries", run.outcome.queries},
           {"attempts", run.outcome.attempts},
           {"witness_valid", run.witness_valid}};
  rec["witness"] = run.witness ? to_json(*run.witness) : Json(nullptr);
  Json counters = Json::object();
  for (const auto& [k, v] : run.outcome.counters) counters[k] = v;
  rec["counters"] = counters;
  const auto path = out_path(g, f.out.empty() ? f.detector + ".run.json" : f.out);
  write_json_file(path, rec);

  std::cout << "config_hash: " << rec["config_hash"].get<std::string>() << "\n" << status_line(run.outcome);
  if (run.witness) std::cout << "witness: " << to_json(*run.witness).dump() << "\n";
  std::cout << "witness_valid: " << (run.witness_valid ? "true" : "false") << "\nwrote: " << path << "\n";
  return run.witness_valid ? kOk : kVerifyFailed;
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const Globals& g, const std::string& instance, const std::string& cert, const std::string& meta) {
  if (meta.empty()) throw ParameterError("verify needs --meta");
  auto [bundle, spec] = load(g, instance, cert, meta);
  const auto report = verify_bundle(bundle, spec);
  for (const auto& c : report.checks) std::cout << (c.pass ? "pass " : "FAIL ") << c.name << ": " << c.detail << "\n";
  if (const auto* bad = report.first_failure()) {
    std::cout << "result: fail (" << bad->name << ")\n";
    return kVerifyFailed;
  }
  std::cout << "result: pass\n";
  return kOk;
}

// ---- bench -----------------------------------------------------------------

std::vector<Series> separation_series(const SeparationReport& r) {
  Series cert{"cert mean", {}}, nocert{"multiscale mean", {}}, ratio{"ratio", {}};
  for (const auto& row : r.rows) {
    cert.points.emplace_back(row.s, row.cert.stats.mean);
    nocert.points.emplace_back(row.s, row.nocert.stats.mean);
    ratio.points.emplace_back(row.s, row.ratio);
  }
  return {cert, nocert, ratio};
}

int cmd_bench(const Globals& g, const std::string& config_file, const std::string& name_flag, bool plot, bool strict) {
  Json cfg = read_json_file(in_path(g, config_file));
  const auto name = name_flag.empty() ? fs::path(config_file).stem().stem().string() : name_flag;
  const auto kind = cfg.value("kind", std::string("trials"));
  const std::uint64_t seed = cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : g.seed;
  std::ostringstream csv;
  Json report;
  std::vector<std::string> warnings;
  std::string svg;
  std::string hash;

  try {
    if (kind == "separation") {
      SeparationConfig c;
      c.seed = seed;
      c.n = cfg.value("n", c.n);
      c.scale_params = cfg.value("scale_params", c.scale_params);
      c.scale_counts = cfg.value("scale_counts", c.scale_counts);
      c.trials = cfg.value("trials", c.trials);
      c.budget_factor = cfg.value("budget_factor", c.budget_factor);
      const auto r = separation_experiment(c, g.threads);
      hash = r.config_hash;
      csv << "# config_hash: " << hash << "\n" << kCsvHeader << "\n";
      for (const auto& row : r.rows) {
        append_csv(csv, row.cert, row.s);
        append_csv(csv, row.nocert, row.s);
      }
      report = report_json(r, to_json(c));
      warnings = r.warnings;
      if (plot) svg = svg_chart("Separation at n = " + std::to_string(c.n), "scales s", "queries / ratio", separation_series(r), true);
      for (const auto& row : r.rows) {
        std::cout << "row: s=" << row.s << " cert_mean=" << fmt_double(row.cert.stats.mean)
                  << " nocert_mean=" << fmt_double(row.nocert.stats.mean) << " ratio=" << fmt_double(row.ratio) << "\n";
      }
      if (r.fit) std::cout << "fit: slope=" << fmt_double(r.fit->slope) << " r2=" << fmt_double(r.fit->r2) << "\n";
    } else if (kind == "slope") {
      SlopeConfig c;
      c.seed = seed;
      const auto& gen = cfg.at("generator");
      c.generator = {gen.at("id").get<std::string>(), 0, gen.value("params", Json::object())};
      const auto& det = cfg.at("detector");
      c.detector = {det.at("id").get<std::string>(), det.value("params", Json::object())};
      c.ns = cfg.at("ns").get<std::vector<std::uint32_t>>();
      c.trials = cfg.value("trials", c.trials);
      if (cfg.contains("budget") && !cfg["budget"].is_null()) c.budget = cfg["budget"].get<std::uint64_t>();
      TrialConfig probe{c.generator, c.detector};
      check_compatible(probe);
      const auto r = slope_experiment(c, g.threads);
      hash = r.config_hash;
      csv << "# config_hash: " << hash << "\n" << kCsvHeader << "\n";
      Series s{c.detector.id, {}};
      for (const auto& [n, b] : r.rows) {
        append_csv(csv, b, std::nullopt);
        if (b.stats.found > 0) s.points.emplace_back(n, b.stats.mean);
        std::cout << "row: n=" << n << " mean=" << fmt_double(b.stats.mean) << " found=" << b.stats.found << "\n";
      }
      report = report_json(r, to_json(c));
      warnings = r.warnings;
      if (plot) svg = svg_chart("Mean queries against n", "n", "mean queries", {s}, true);
      if (r.fit) std::cout << "fit: exponent=" << fmt_double(r.fit->exponent) << " r2=" << fmt_double(r.fit->r2) << "\n";
    } else if (kind == "trials") {
      TrialConfig c;
      c.seed = seed;
      const auto& gen = cfg.at("generator");
      c.generator = {gen.at("id").get<std::string>(), gen.at("n").get<std::uint32_t>(), gen.value("params", Json::object())};
      const auto& det = cfg.at("detector");
      c.detector = {det.at("id").get<std::string>(), det.value("params", Json::object())};
      c.trials = cfg.value("trials", std::uint64_t{100});
      if (cfg.contains("budget") && !cfg["budget"].is_null()) c.budget = cfg["budget"].get<std::uint64_t>();
      c.fresh_instance_per_trial = cfg.value("fresh_instance_per_trial", true);
      c.corrupt_certificate = cfg.value("corrupt_certificate", false);
      const auto b = run_trials(c, g.threads);
      hash = b.config_hash;
      csv << "# config_hash: " << hash << "\n" << kCsvHeader << "\n";
      append_csv(csv, b, std::nullopt);
      report = batch_json(b);
      report["kind"] = "trials";
      if (c.trials == 0) warnings.push_back("trials = 0: success rate undefined");
      if (b.stats.invalid_witnesses > 0) warnings.push_back("invalid witnesses reported");
      report["warnings"] = warnings;
      std::cout << "found: " << b.stats.found << " of " << b.stats.trials << "\nmean: " << fmt_double(b.stats.mean) << "\n";
      if (plot) {
        Series s{"queries", {}};
        for (const auto& r : b.records) s.points.emplace_back(static_cast<double>(r.trial), static_cast<double>(r.queries));
        svg = svg_chart("Queries per trial", "trial", "queries", {s}, false);
      }
    } else {
      throw ParameterError("unknown bench kind '" + kind + "' (separation, slope, trials)");
    }
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed bench config: ") + e.what());
  }

  const auto pcsv = out_path(g, name + ".csv"), pjson = out_path(g, name + ".report.json");
  write_text_file(pcsv, csv.str());
  write_json_file(pjson, report);
  std::cout << "config_hash: " << hash << "\nwrote: " << pcsv << "\nwrote: " << pjson << "\n";
  if (plot) {
    const auto psvg = out_path(g, name + ".svg");
    write_text_file(psvg, svg);
    std::cout << "wrote: " << psvg << "\n";
  }
  for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
  return strict && !warnings.empty() ? kVerifyFailed : kOk;
}

// ---- adversary-test --------------------------------------------------------

int cmd_adversary(const Globals& g, OnlineOfflineConfig c, const std::string& scales, const std::string& name) {
  if (!scales.empty()) {
    const auto dots = scales.find("..");
    if (dots == std::string::npos) throw ParameterError("--scales expects lo..hi");
    c.params.i_min = std::stoi(scales.substr(0, dots));
    c.params.i_max = std::stoi(scales.substr(dots + 2));
  }
  c.seed = g.seed;
  check_scale_params(c.n, c.params, LayoutModel::Claw);
  const auto r = online_offline_experiment(c, g.threads);
  Json hist_on = r.online, hist_off = r.offline;
  Json rep{{"config_hash", r.config_hash},
           {"config", to_json(c)},
           {"transcripts", {{"online", hist_on}, {"offline", hist_off}}},
           {"transcript_test", {{"statistic", r.transcripts.statistic}, {"dof", r.transcripts.dof}, {"p", r.transcripts.p_value}}},
           {"good_index", {{"online", r.good_online}, {"offline", r.good_offline}}},
           {"good_index_test", {{"statistic", r.good_index.statistic}, {"dof", r.good_index.dof}, {"p", r.good_index.p_value}}},
           {"finals_valid", r.finals_valid}};
  const auto path = out_path(g, name + ".json");
  write_json_file(path, rep);
  std::cout << "config_hash: " << r.config_hash << "\n";
  std::cout << "transcripts: chi2=" << fmt_double(r.transcripts.statistic) << " dof=" << r.transcripts.dof
            << " p=" << fmt_double(r.transcripts.p_value) << "\n";
  std::cout << "good_index: chi2=" << fmt_double(r.good_index.statistic) << " dof=" << r.good_index.dof
            << " p=" << fmt_double(r.good_index.p_value) << "\n";
  std::cout << "finals_valid: " << (r.finals_valid ? "true" : "false") << "\nwrote: " << path << "\n";
  return r.transcripts.p_value > 0.01 && r.good_index.p_value > 0.01 && r.finals_valid ? kOk : kVerifyFailed;
}

// ---- report ----------------------------------------------------------------

int cmd_report(const Globals& g, const std::string& in, const std::string& name_flag) {
  const auto rep = read_json_file(in_path(g, in));
  const auto name = name_flag.empty() ? fs::path(in).stem().stem().string() : name_flag;
  std::vector<Series> series;
  std::string title, xlabel;
  try {
    const auto kind = rep.at("kind").get<std::string>();
    std::cout << "config_hash: " << rep.at("config_hash").get<std::string>() << "\nkind: " << kind << "\n";
    if (kind == "separation") {
      Series cert{"cert mean", {}}, nocert{"multiscale mean", {}}, ratio{"ratio", {}};
      for (const auto& row : rep.at("rows")) {
        const double s = row.at("s").get<double>();
        cert.points.emplace_back(s, row.at("cert_mean").get<double>());
        nocert.points.emplace_back(s, row.at("nocert_mean").get<double>());
        ratio.points.emplace_back(s, row.at("ratio").get<double>());
        std::cout << "row: s=" << s << " ratio=" << fmt_double(row.at("ratio").get<double>()) << "\n";
      }
      series = {cert, nocert, ratio};
      title = "Separation at n = " + std::to_string(rep.at("config").at("n").get<std::uint64_t>());
      xlabel = "scales s";
    } else if (kind == "slope") {
      Series s{"mean", {}};
      for (const auto& row : rep.at("rows")) {
        if (row.at("batch").at("stats").at("found").get<std::uint64_t>() == 0) continue;
        s.points.emplace_back(row.at("n").get<double>(), row.at("mean").get<double>());
        std::cout << "row: n=" << row.at("n").get<std::uint64_t>() << " mean=" << fmt_double(row.at("mean").get<double>()) << "\n";
      }
      series = {s};
      title = "Mean queries against n";
      xlabel = "n";
    } else {
      throw ParameterError("report supports separation and slope reports, got '" + kind + "'");
    }
    if (!rep.at("fit").is_null()) std::cout << "fit: " << rep.at("fit").dump() << "\n";
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed report: ") + e.what());
  }
  const auto path = out_path(g, name + ".svg");
  write_text_file(path, svg_chart(title, xlabel, "queries", series, true));
  std::cout << "wrote: " << path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-complexity separation experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out-dir", g.out_dir, "directory for all inputs and outputs")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (0: logical cores)");
  app.add_option("--seed", g.seed, "master seed")->envname("QSEP_SEED");

  GenFlags gf;
  auto* gen = app.add_subcommand("gen", "generate an instance, certificate and meta sidecar");
  gen->add_option("--construction", gf.construction)->required()->check(CLI::IsMember(generator_ids()));
  gen->add_option("--n", gf.n)->required();
  gen->add_option("--scales", gf.scales, "scale window lo..hi");
  gen->add_option("--c", gf.c);
  gen->add_option("--beta", gf.beta);
  gen->add_option("--gamma", gf.gamma);
  gen->add_option("--rho", gf.rho);
  gen->add_option("--filler", gf.filler);
  gen->add_option("--target", gf.target);
  gen->add_option("--H", gf.H);
  gen->add_option("--k", gf.k);
  gen->add_option("--param", gf.params, "extra generator parameter key=value");
  gen->add_option("--name", gf.name, "output file prefix");

  RunFlags rf;
  auto* run = app.add_subcommand("run", "run one detector once");
  run->add_option("--instance", rf.instance)->required();
  run->add_option("--cert", rf.cert);
  run->add_option("--meta", rf.meta);
  run->add_option("--detector", rf.detector)->required();
  run->add_option("--param", rf.params, "detector parameter key=value");
  run->add_option("--budget", rf.budget);
  run->add_flag("--corrupt-cert", rf.corrupt);
  run->add_option("--out", rf.out);

  std::string bench_config, bench_name;
  bool plot = false, strict = false;
  auto* bench = app.add_subcommand("bench", "run a separation, slope or trial battery");
  bench->add_option("--config", bench_config)->required();
  bench->add_option("--name", bench_name);
  bench->add_flag("--plot", plot);
  bench->add_flag("--strict", strict);

  std::string v_inst, v_cert, v_meta;
  auto* verify = app.add_subcommand("verify", "check an instance against its meta");
  verify->add_option("--instance", v_inst)->required();
  verify->add_option("--cert", v_cert);
  verify->add_option("--meta", v_meta)->required();

  OnlineOfflineConfig ac;
  ac.params.i_min = 3;
  ac.params.i_max = 5;
  ac.params.c = 0.2;
  std::string a_scales, a_name = "adversary";
  auto* adv = app.add_subcommand("adversary-test", "compare lazy adversary sessions with generated instances");
  adv->add_option("--n", ac.n)->capture_default_str();
  adv->add_option("--scales", a_scales, "scale window lo..hi (default 3..5)");
  adv->add_option("--c", ac.params.c)->capture_default_str();
  adv->add_option("--sessions", ac.sessions)->capture_default_str();
  adv->add_option("--probes", ac.probes)->capture_default_str();
  adv->add_option("--name", a_name)->capture_default_str();

  std::string r_in, r_name;
  auto* report = app.add_subcommand("report", "render a report JSON as SVG");
  report->add_option("--in", r_in)->required();
  report->add_option("--name", r_name);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_gen(g, gf);
    if (*run) return cmd_run(g, rf);
    if (*bench) return cmd_bench(g, bench_config, bench_name, plot, strict);
    if (*verify) return cmd_verify(g, v_inst, v_cert, v_meta);
    if (*adv) return cmd_adversary(g, ac, a_scales, a_name);
    if (*report) return cmd_report(g, r_in, r_name);
  } catch (const ModelMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMismatch;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}
