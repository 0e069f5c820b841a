#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qsep/errors.hpp"

namespace qsep {

enum class Filler { FixedPoints, SmallCycles };

// Where the last element of a collision path points: the interior element
// next to it (every other element of the path then leads into the
// collision) or a uniform interior element.
enum class CollisionTarget { Far, Uniform };

struct ScaleParams {
  int i_min = 2;
  int i_max = 5;
  double beta = 2.2;
  double gamma = 1.1;
  double c = 0.1;
  std::optional<double> rho;  // empty: largest feasible value in (0, 1]
  Filler filler = Filler::FixedPoints;
  CollisionTarget target = CollisionTarget::Far;
  std::optional<int> forced_t;              // pin the good index
  std::optional<std::uint64_t> forced_b;    // pin b_t, 0 allowed
};

enum class LayoutModel { Function, Claw };

// Per-scale counts at a fixed rho. a[j], b[j] belong to scale i_min + j.
struct ScalePlan {
  std::uint32_t n = 0;
  int i_min = 0;
  int i_max = 0;
  double rho = 1.0;
  std::vector<std::uint64_t> a;
  std::vector<std::uint64_t> b;
  std::vector<std::string> warnings;

  int scales() const { return i_max - i_min + 1; }
  std::uint64_t a_at(int i) const { return a[i - i_min]; }
  std::uint64_t b_at(int i) const { return b[i - i_min]; }
  std::uint64_t path_elements() const {
    std::uint64_t s = 0;
    for (int i = i_min; i <= i_max; ++i) s += a_at(i) << i;
    return s;
  }
  // Largest number of claw leaves any good index can need (the blue pool).
  std::uint64_t blue_pool() const { return 4 * *std::max_element(b.begin(), b.end()); }
};

namespace detail {

inline std::uint64_t floor_count(double x) { return x <= 0 ? 0 : static_cast<std::uint64_t>(std::floor(x)); }

inline ScalePlan counts_at(std::uint32_t n, const ScaleParams& p, double rho) {
  ScalePlan plan;
  plan.n = n;
  plan.i_min = p.i_min;
  plan.i_max = p.i_max;
  plan.rho = rho;
  const double witness_mass = std::pow(static_cast<double>(n), 1.0 - p.c);
  for (int i = p.i_min; i <= p.i_max; ++i) {
    plan.a.push_back(floor_count(rho * n / std::pow(p.beta, i)));
    plan.b.push_back(floor_count(rho * witness_mass / std::pow(p.gamma, i)));
  }
  return plan;
}

inline bool fits(const ScalePlan& plan, LayoutModel model) {
  for (auto a : plan.a) {
    if (a == 0) return false;
  }
  std::uint64_t need = plan.path_elements();
  if (model == LayoutModel::Claw) {
    std::uint64_t worst = 0;
    for (std::size_t j = 0; j < plan.a.size(); ++j) worst = std::max(worst, 4 * std::clamp<std::uint64_t>(plan.b[j], 1, plan.a[j]));
    need += worst;
  }
  return need <= plan.n;
}

inline std::string capacity_message(const ScalePlan& plan, LayoutModel model) {
  std::ostringstream os;
  os << "capacity: sum a_i*2^i = " << plan.path_elements();
  if (model == LayoutModel::Claw) os << " plus claw leaves";
  os << " vs n = " << plan.n << " at rho = " << plan.rho;
  for (int i = plan.i_min; i <= plan.i_max; ++i) {
    if (plan.a_at(i) == 0) {
      os << "; a_" << i << " = 0";
      break;
    }
  }
  return os.str();
}

}  // namespace detail

inline void check_scale_params(std::uint32_t n, const ScaleParams& p, LayoutModel model) {
  const int floor_i = model == LayoutModel::Function ? 2 : 1;
  if (p.i_min < floor_i) throw ParameterError("i_min must be at least " + std::to_string(floor_i));
  if (p.i_min > p.i_max) throw ParameterError("i_min > i_max");
  if (p.i_max >= 32 || (std::uint64_t{1} << p.i_max) > n) throw ParameterError("2^i_max exceeds n");
  if (!(p.gamma > 1.0 && p.gamma < p.beta)) throw ParameterError("need 1 < gamma < beta");
  if (!(p.c > 0.0 && p.c < 0.5)) throw ParameterError("need 0 < c < 1/2");
  if (p.rho && !(*p.rho > 0.0 && *p.rho <= 1.0)) throw ParameterError("rho must lie in (0, 1]");
  if (p.forced_t && (*p.forced_t < p.i_min || *p.forced_t > p.i_max)) throw ParameterError("forced t outside scales");
}

// Counts a_i, b_i for every scale. b_i is clamped into [1, a_i]; clamping is
// reported in warnings. With rho unset the largest feasible rho <= 1 is used.
inline ScalePlan plan_scales(std::uint32_t n, const ScaleParams& p, LayoutModel model) {
  check_scale_params(n, p, model);
  double rho = 1.0;
  if (p.rho) {
    rho = *p.rho;
    auto plan = detail::counts_at(n, p, rho);
    if (!detail::fits(plan, model)) throw CapacityError(detail::capacity_message(plan, model));
  } else if (!detail::fits(detail::counts_at(n, p, 1.0), model)) {
    // Feasible rho values form an interval; find its upper end.
    auto over = [&](double r) {
      auto plan = detail::counts_at(n, p, r);
      for (auto& b : plan.b) b = std::max<std::uint64_t>(b, 1);
      for (auto& a : plan.a) a = std::max<std::uint64_t>(a, 1);
      return !detail::fits(plan, model);
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 64; ++it) {
      const double mid = 0.5 * (lo + hi);
      (over(mid) ? hi : lo) = mid;
    }
    rho = lo;
    auto plan = detail::counts_at(n, p, rho);
    if (rho <= 0.0 || !detail::fits(plan, model)) throw CapacityError(detail::capacity_message(plan, model));
  }
  auto plan = detail::counts_at(n, p, rho);
  for (int i = p.i_min; i <= p.i_max; ++i) {
    auto& b = plan.b[i - p.i_min];
    const auto a = plan.a_at(i);
    if (b < 1 || b > a) {
      plan.warnings.push_back("b_" + std::to_string(i) + " = " + std::to_string(b) + " clamped into [1, " +
                              std::to_string(a) + "]");
      b = std::clamp<std::uint64_t>(b, 1, a);
    }
  }
  return plan;
}

}  // namespace qsep
