#include "submodstab/noise_stability.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace submodstab {
namespace {

std::vector<double> rho_powers(int n, double rho) {
  std::vector<double> pw(static_cast<std::size_t>(n) + 1, 1.0);
  for (int k = 1; k <= n; ++k) pw[static_cast<std::size_t>(k)] = pw[static_cast<std::size_t>(k) - 1] * rho;
  return pw;
}

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("rho=" + std::to_string(rho) + " must lie in [0,1]");
}

void require_same_dim(const CubeFunction& f, const ProductDistribution& dist) {
  if (f.n() != dist.n()) throw std::invalid_argument("function and distribution dimensions differ");
}

// Tracks the minimum of a slack over the cube.
struct SlackMin {
  double value = std::numeric_limits<double>::infinity();
  Mask at = 0;
  void update(double s, Mask x) {
    if (s < value) {
      value = s;
      at = x;
    }
  }
};

}  // namespace

NoiseParams::NoiseParams(double rho, ProductDistribution dist) : rho_(rho), dist_(std::move(dist)) {
  check_rho(rho);
}

double min_probability(const ProductDistribution& dist, PminConvention convention) {
  return convention == PminConvention::kLiteral ? dist.min_probability()
                                                : dist.min_probability_symmetric();
}

double stability_bound_coefficient(double rho, double p_min) {
  return 2.0 * rho - 1.0 + 2.0 * p_min * (1.0 - rho);
}

std::vector<double> default_rho_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(k / 20.0);
  return grid;
}

std::vector<double> apply_noise_operator(const FourierExpansion& e, double rho) {
  check_rho(rho);
  const auto pw = rho_powers(e.n, rho);
  FourierExpansion damped = e;
  for (std::size_t s = 0; s < damped.coeffs.size(); ++s)
    damped.coeffs[s] *= pw[static_cast<std::size_t>(popcount(static_cast<Mask>(s)))];
  return inverse_table(damped);
}

CubeFunction apply_noise_operator(const CubeFunction& f, const NoiseParams& params) {
  require_same_dim(f, params.dist());
  const double rho = params.rho();
  // Exact at the endpoints: no round trip through the transform.
  if (rho == 1.0) return f.to_dense();
  const FourierExpansion e = transform(f, params.dist());
  if (rho == 0.0)
    return CubeFunction::dense(f.n(), std::vector<double>(e.coeffs.size(), e.coeffs[0]));
  return CubeFunction::dense(f.n(), apply_noise_operator(e, rho));
}

CubeFunction apply_noise_operator_direct(const CubeFunction& f, const NoiseParams& params) {
  require_same_dim(f, params.dist());
  const int n = f.n();
  if (n > 12) throw std::invalid_argument("direct noise operator is limited to n <= 12");
  const double rho = params.rho();
  const std::vector<double> table = f.table();
  // Pr[y_i = x_i] and Pr[y_i = -x_i] for each coordinate and each value of x_i.
  std::vector<double> stay_plus(static_cast<std::size_t>(n)), stay_minus(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double p = params.dist().p(i);
    stay_plus[i] = rho + (1.0 - rho) * p;
    stay_minus[i] = rho + (1.0 - rho) * (1.0 - p);
  }
  std::vector<double> out(table.size(), 0.0);
  for (Mask x = 0; x < table.size(); ++x) {
    double total = 0.0;
    for (Mask y = 0; y < table.size(); ++y) {
      double prob = 1.0;
      for (int i = 0; i < n; ++i) {
        const bool xi = has_element(x, i);
        const double stay = xi ? stay_plus[i] : stay_minus[i];
        prob *= (xi == has_element(y, i)) ? stay : 1.0 - stay;
      }
      total += prob * table[y];
    }
    out[x] = total;
  }
  return CubeFunction::dense(n, std::move(out));
}

double stability(const FourierExpansion& e, double rho) {
  check_rho(rho);
  const auto pw = rho_powers(e.n, rho);
  double total = 0.0;
  for (std::size_t s = 0; s < e.coeffs.size(); ++s)
    total += pw[static_cast<std::size_t>(popcount(static_cast<Mask>(s)))] * e.coeffs[s] * e.coeffs[s];
  return total;
}

double stability(const CubeFunction& f, const NoiseParams& params) {
  require_same_dim(f, params.dist());
  return stability(transform(f, params.dist()), params.rho());
}

double stability_definitional(const CubeFunction& f, const NoiseParams& params) {
  require_same_dim(f, params.dist());
  // T_rho is the tensor product of per-coordinate 2x2 transition kernels; apply them
  // one coordinate at a time in value space, never touching the transform.
  const double rho = params.rho();
  const std::vector<double> table = f.table();
  std::vector<double> noisy = table;
  for (int i = 0; i < f.n(); ++i) {
    const double p = params.dist().p(i);
    const double plus_stays = rho + (1.0 - rho) * p;
    const double minus_stays = rho + (1.0 - rho) * (1.0 - p);
    const Mask bit = Mask{1} << i;
    for (Mask x = 0; x < noisy.size(); ++x) {
      if (x & bit) continue;
      const double a = noisy[x];        // x_i = -1
      const double b = noisy[x | bit];  // x_i = +1
      noisy[x] = minus_stays * a + (1.0 - minus_stays) * b;
      noisy[x | bit] = plus_stays * b + (1.0 - plus_stays) * a;
    }
  }
  return inner_product(table, noisy, params.dist());
}

PointwiseReport check_pointwise_uniform(const CubeFunction& f, double rho) {
  const auto uniform = ProductDistribution::uniform(f.n());
  const NoiseParams params(rho, uniform);
  const std::vector<double> table = f.table();
  const std::vector<double> noisy = apply_noise_operator(f, params).table();
  const double ends = 0.5 * (1.0 - rho) * (table.front() + table.back());

  PointwiseReport report;
  SlackMin strong;
  for (Mask x = 0; x < table.size(); ++x) strong.update(noisy[x] - (rho * table[x] + ends), x);
  report.min_slack = strong.value;
  report.argmin = strong.at;
  report.holds = strong.value >= -kSlackTolerance;

  if (is_nonnegative(f).holds) {
    SlackMin weak;
    for (Mask x = 0; x < table.size(); ++x) weak.update(noisy[x] - rho * table[x], x);
    report.weak_checked = true;
    report.weak_min_slack = weak.value;
    report.weak_argmin = weak.at;
    report.weak_holds = weak.value >= -kSlackTolerance;
  }
  return report;
}

PointwiseReport check_pointwise_product(const std::vector<double>& table,
                                        const FourierExpansion& e, double rho,
                                        PminConvention convention) {
  const double c = stability_bound_coefficient(rho, min_probability(e.dist, convention));
  const std::vector<double> noisy = apply_noise_operator(e, rho);
  SlackMin slack;
  for (Mask x = 0; x < table.size(); ++x) slack.update(noisy[x] - c * table[x], x);
  PointwiseReport report;
  report.min_slack = slack.value;
  report.argmin = slack.at;
  report.holds = slack.value >= -kSlackTolerance;
  return report;
}

PointwiseReport check_pointwise_product(const CubeFunction& f, const NoiseParams& params,
                                        PminConvention convention) {
  require_same_dim(f, params.dist());
  const std::vector<double> table = f.table();
  const double rho = params.rho();
  if (rho == 1.0) {
    // T_1 f = f exactly; avoid transform round-off.
    PointwiseReport report;
    report.min_slack = std::numeric_limits<double>::infinity();
    const double c = stability_bound_coefficient(rho, min_probability(params.dist(), convention));
    for (Mask x = 0; x < table.size(); ++x) {
      const double s = table[x] - c * table[x];
      if (s < report.min_slack) {
        report.min_slack = s;
        report.argmin = x;
      }
    }
    report.holds = report.min_slack >= -kSlackTolerance;
    return report;
  }
  return check_pointwise_product(table, transform(table, params.dist()), rho, convention);
}

StabilityReport check_stability_bound(const FourierExpansion& e, double rho,
                                      PminConvention convention) {
  StabilityReport r;
  r.rho = rho;
  r.p_min = min_probability(e.dist, convention);
  r.stab = stability(e, rho);
  r.norm2sq = stability(e, 1.0);
  r.coefficient = stability_bound_coefficient(rho, r.p_min);
  r.bound = r.coefficient * r.norm2sq;
  r.slack = r.stab - r.bound;
  r.holds = r.slack >= -kSlackTolerance;
  return r;
}

StabilityReport check_stability_bound(const CubeFunction& f, const NoiseParams& params,
                                      PminConvention convention) {
  require_same_dim(f, params.dist());
  return check_stability_bound(transform(f, params.dist()), params.rho(), convention);
}

}  // namespace submodstab
