#pragma once

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsep/detect/common.hpp"
#include "qsep/errors.hpp"

namespace qsep {

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  Status status = Status::Exhausted;
  std::uint64_t queries = 0;
  bool witness_valid = true;  // vacuous unless Found
};

struct Interval {
  double lo = 0;
  double hi = 0;
};

enum class CiMethod { Normal, StudentT, None };

inline std::string_view to_string(CiMethod m) {
  switch (m) {
    case CiMethod::Normal: return "normal";
    case CiMethod::StudentT: return "student-t";
    case CiMethod::None: return "none";
  }
  return "?";
}

struct TrialStats {
  std::uint64_t trials = 0;
  std::uint64_t found = 0;
  std::uint64_t exhausted = 0;
  std::uint64_t budget_exceeded = 0;
  std::uint64_t invalid_witnesses = 0;
  std::vector<std::uint64_t> samples;  // queries of Found trials, in trial order
  std::optional<double> success_rate;  // empty when trials == 0
  Interval success_ci;                 // Wilson, 95%
  double mean = 0;                     // over samples
  double std_error = 0;
  Interval ci95;
  CiMethod ci_method = CiMethod::None;
};

inline constexpr std::uint64_t kNormalCiMinSuccesses = 200;

inline Interval wilson_interval(std::uint64_t k, std::uint64_t n, double confidence = 0.95) {
  if (n == 0) return {0, 1};
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2);
  const double p = static_cast<double>(k) / static_cast<double>(n), nn = static_cast<double>(n);
  const double denom = 1 + z * z / nn;
  const double centre = (p + z * z / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

// Exact (Clopper-Pearson) interval for k successes in n trials.
inline Interval binomial_interval(std::uint64_t k, std::uint64_t n, double confidence = 0.99) {
  if (n == 0) return {0, 1};
  using B = boost::math::binomial_distribution<double>;
  const double alpha = (1 - confidence) / 2, nn = static_cast<double>(n), kk = static_cast<double>(k);
  return {B::find_lower_bound_on_p(nn, kk, alpha), B::find_upper_bound_on_p(nn, kk, alpha)};
}

// Mean and 95% interval of a sample; normal quantile once there are enough
// successes, Student-t below that.
inline void describe(TrialStats& s) {
  const auto k = s.samples.size();
  s.ci_method = CiMethod::None;
  if (k == 0) return;
  const double sum = std::accumulate(s.samples.begin(), s.samples.end(), 0.0);
  s.mean = sum / static_cast<double>(k);
  s.ci95 = {s.mean, s.mean};
  if (k < 2) return;
  double ss = 0;
  for (auto x : s.samples) ss += (static_cast<double>(x) - s.mean) * (static_cast<double>(x) - s.mean);
  s.std_error = std::sqrt(ss / static_cast<double>(k - 1) / static_cast<double>(k));
  double q;
  if (k >= kNormalCiMinSuccesses) {
    q = boost::math::quantile(boost::math::normal(), 0.975);
    s.ci_method = CiMethod::Normal;
  } else {
    q = boost::math::quantile(boost::math::students_t(static_cast<double>(k - 1)), 0.975);
    s.ci_method = CiMethod::StudentT;
  }
  s.ci95 = {s.mean - q * s.std_error, s.mean + q * s.std_error};
}

inline TrialStats summarize(const std::vector<TrialRecord>& records) {
  TrialStats s;
  s.trials = records.size();
  for (const auto& r : records) {
    switch (r.status) {
      case Status::Found:
        ++s.found;
        s.samples.push_back(r.queries);
        if (!r.witness_valid) ++s.invalid_witnesses;
        break;
      case Status::Exhausted: ++s.exhausted; break;
      case Status::BudgetExceeded: ++s.budget_exceeded; break;
    }
  }
  if (s.trials > 0) {
    s.success_rate = static_cast<double>(s.found) / static_cast<double>(s.trials);
    s.success_ci = wilson_interval(s.found, s.trials);
  }
  describe(s);
  return s;
}

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  double r2 = 0;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("least squares needs at least 2 paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0) throw ParameterError("least squares: x values have no spread");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    sse += e * e;
  }
  f.r2 = syy > 0 ? 1 - sse / syy : 1.0;
  f.slope_stderr = x.size() > 2 ? std::sqrt(std::max(0.0, sse / (n - 2)) / sxx) : 0.0;
  return f;
}

struct SlopeFit {
  double exponent = 0;
  double std_error = 0;
  double r2 = 0;
};

// Log-log exponent of mean cost against n.
inline SlopeFit slope_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw ParameterError("slope fit needs at least 3 points");
  std::vector<double> lx, ly;
  double lo = points.front().first, hi = lo;
  for (auto [n, q] : points) {
    if (n <= 0 || q <= 0) throw ParameterError("slope fit needs positive n and cost");
    lx.push_back(std::log2(n));
    ly.push_back(std::log2(q));
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  if (hi < 4 * lo) throw ParameterError("slope fit needs n spanning at least 2 octaves");
  const auto f = least_squares(lx, ly);
  return {f.slope, f.slope_stderr, f.r2};
}

}  // namespace qsep
