#pragma once

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "qsep/harness/trials.hpp"
#include "qsep/io/json_io.hpp"

namespace qsep {

inline constexpr const char* kCsvHeader = "config_hash,generator,detector,n,s,trial,seed,status,queries";

inline std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

// One CSV row per trial; `s` is the scale count or empty.
inline void append_csv(std::ostringstream& os, const TrialBatch& b, std::optional<int> s) {
  for (const auto& r : b.records) {
    os << b.config_hash << ',' << b.config.generator.id << ',' << b.config.detector.id << ',' << b.config.generator.n
       << ',' << (s ? std::to_string(*s) : "") << ',' << r.trial << ',' << r.seed << ',' << to_string(r.status) << ','
       << r.queries << '\n';
  }
}

inline Json to_json(const TrialStats& s) {
  Json j{{"trials", s.trials},
         {"found", s.found},
         {"exhausted", s.exhausted},
         {"budget_exceeded", s.budget_exceeded},
         {"invalid_witnesses", s.invalid_witnesses},
         {"mean", s.mean},
         {"stderr", s.std_error},
         {"ci95", {s.ci95.lo, s.ci95.hi}},
         {"ci_method", to_string(s.ci_method)},
         {"success_ci95", {s.success_ci.lo, s.success_ci.hi}}};
  j["success_rate"] = s.success_rate ? Json(*s.success_rate) : Json("undefined");
  return j;
}

inline Json batch_json(const TrialBatch& b) {
  return {{"config_hash", b.config_hash}, {"config", to_json(b.config)}, {"stats", to_json(b.stats)}};
}

inline Json to_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"slope_stderr", f.slope_stderr}, {"r2", f.r2}};
}

inline Json to_json(const SlopeFit& f) { return {{"exponent", f.exponent}, {"stderr", f.std_error}, {"r2", f.r2}}; }

inline const char* kReportAssumptions =
    "relabelings are drawn uniformly per trial; every detector is label-symmetric, so the worst case over "
    "relabelings equals the average";

inline Json report_json(const SeparationReport& r, const Json& config) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"s", row.s},
                    {"cert_mean", row.cert.stats.mean},
                    {"nocert_mean", row.nocert.stats.mean},
                    {"ratio", row.ratio},
                    {"cert", batch_json(row.cert)},
                    {"nocert", batch_json(row.nocert)}});
  }
  Json j{{"kind", "separation"},
         {"config_hash", r.config_hash},
         {"config", config},
         {"assumptions", kReportAssumptions},
         {"columns", {{"cert_mean", "cert-alg cost (>= RACC)"}, {"nocert_mean", "certificate-free cost"}}},
         {"rows", rows},
         {"warnings", r.warnings}};
  j["fit"] = r.fit ? to_json(*r.fit) : Json(nullptr);
  return j;
}

inline Json report_json(const SlopeReport& r, const Json& config) {
  Json rows = Json::array();
  for (const auto& [n, b] : r.rows) rows.push_back({{"n", n}, {"mean", b.stats.mean}, {"batch", batch_json(b)}});
  Json j{{"kind", "slope"},        {"config_hash", r.config_hash}, {"config", config},
         {"assumptions", kReportAssumptions}, {"rows", rows},         {"warnings", r.warnings}};
  j["fit"] = r.fit ? to_json(*r.fit) : Json(nullptr);
  return j;
}

// ---- SVG -------------------------------------------------------------------

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Static line chart. Points are also written as data attributes so the chart
// can be checked against the CSV.
inline std::string svg_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                             const std::vector<Series>& series, bool log_axes) {
  const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 60;
  auto tx = [&](double v) { return log_axes ? std::log2(v) : v; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, tx(y));
      y1 = std::max(y1, tx(y));
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  if (!log_axes) y0 = std::min(0.0, y0);
  auto px = [&](double x) { return L + (tx(x) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (tx(y) - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << xlabel
     << (log_axes ? " (log2)" : "") << "</text>\n";
  os << "<text x=\"15\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << (T + H - B) / 2
     << ")\">" << ylabel << (log_axes ? " (log2)" : "") << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4, fy = y0 + (y1 - y0) * k / 4;
    const double sx = L + (W - L - R) * k / 4, sy = H - B - (H - T - B) * k / 4;
    os << "<text x=\"" << sx << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << fmt_double(std::round(fx * 100) / 100)
       << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">" << fmt_double(std::round(fy * 100) / 100)
       << "</text>\n";
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* c = colors[i % 5];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
    for (auto [x, y] : s.points) os << px(x) << ',' << py(y) << ' ';
    os << "\"/>\n";
    for (auto [x, y] : s.points) {
      os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << c << "\" data-series=\"" << s.label
         << "\" data-x=\"" << fmt_double(x) << "\" data-y=\"" << fmt_double(y) << "\"/>\n";
    }
    os << "<text x=\"" << W - R - 150 << "\" y=\"" << T + 16 * (i + 1) << "\" fill=\"" << c << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace qsep
