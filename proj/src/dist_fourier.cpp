#include "submodstab/dist_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace submodstab {
namespace {

void check_dense_n(int n) {
  if (n < 1 || n > kMaxDenseN)
    throw std::invalid_argument("n=" + std::to_string(n) + " outside the dense range [1, 25]");
}

// phi_{i}(x_i) for x_i = -1 and x_i = +1.
struct CoordinateBasis {
  double at_minus;
  double at_plus;
};

CoordinateBasis coordinate_basis(const ProductDistribution& dist, int i) {
  const double mu = dist.mean(i);
  const double sigma = dist.stddev(i);
  return {(-1.0 - mu) / sigma, (1.0 - mu) / sigma};
}

}  // namespace

ProductDistribution::ProductDistribution(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty() || p_.size() > static_cast<std::size_t>(kMaxN))
    throw std::invalid_argument("product distribution needs 1..30 coordinates");
  for (double pi : p_) {
    if (!(pi > 0.0 && pi < 1.0))
      throw std::invalid_argument("coordinate probability " + std::to_string(pi) +
                                  " must lie strictly inside (0,1)");
  }
  p_min_ = *std::min_element(p_.begin(), p_.end());
}

ProductDistribution ProductDistribution::uniform(int n) {
  if (n < 1) throw std::invalid_argument("uniform distribution needs n >= 1");
  return ProductDistribution(std::vector<double>(static_cast<std::size_t>(n), 0.5));
}

double ProductDistribution::min_probability_symmetric() const {
  double m = 1.0;
  for (double pi : p_) m = std::min({m, pi, 1.0 - pi});
  return m;
}

bool ProductDistribution::is_uniform() const {
  return std::all_of(p_.begin(), p_.end(), [](double pi) { return pi == 0.5; });
}

double ProductDistribution::stddev(int i) const { return 2.0 * std::sqrt(p(i) * (1.0 - p(i))); }

double ProductDistribution::weight(Mask x) const {
  double w = 1.0;
  for (int i = 0; i < n(); ++i) w *= has_element(x, i) ? p(i) : 1.0 - p(i);
  return w;
}

std::vector<double> ProductDistribution::weights() const {
  check_dense_n(n());
  std::vector<double> w(std::size_t{1} << n(), 1.0);
  for (int i = 0; i < n(); ++i) {
    const Mask bit = Mask{1} << i;
    for (Mask k = 0; k < w.size(); ++k) w[k] *= (k & bit) ? p(i) : 1.0 - p(i);
  }
  return w;
}

double basis_value(const ProductDistribution& dist, Mask s, Mask x) {
  double v = 1.0;
  for (int i = 0; i < dist.n(); ++i) {
    if (!has_element(s, i)) continue;
    const double xi = has_element(x, i) ? 1.0 : -1.0;
    v *= (xi - dist.mean(i)) / dist.stddev(i);
  }
  return v;
}

std::vector<double> basis_row(const ProductDistribution& dist, Mask x) {
  check_dense_n(dist.n());
  std::vector<double> row(std::size_t{1} << dist.n());
  row[0] = 1.0;
  for (int i = 0; i < dist.n(); ++i) {
    const auto cb = coordinate_basis(dist, i);
    const double factor = has_element(x, i) ? cb.at_plus : cb.at_minus;
    const std::size_t half = std::size_t{1} << i;
    for (std::size_t k = 0; k < half; ++k) row[k | half] = row[k] * factor;
  }
  return row;
}

FourierExpansion transform(std::vector<double> table, const ProductDistribution& dist) {
  const int n = dist.n();
  check_dense_n(n);
  if (table.size() != (std::size_t{1} << n))
    throw std::invalid_argument("table size does not match distribution dimension");
  // Stage i replaces the pair (f|x_i=-1, f|x_i=+1) by
  // (E_i[f], E_i[f * phi_i]) = ((1-p) a + p b, sqrt(p(1-p)) (b - a)).
  for (int i = 0; i < n; ++i) {
    const double pi = dist.p(i);
    const double scale = std::sqrt(pi * (1.0 - pi));
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t k = 0; k < table.size(); ++k) {
      if (k & bit) continue;
      const double a = table[k];
      const double b = table[k | bit];
      table[k] = (1.0 - pi) * a + pi * b;
      table[k | bit] = scale * (b - a);
    }
  }
  return FourierExpansion{n, dist, std::move(table)};
}

FourierExpansion transform(const CubeFunction& f, const ProductDistribution& dist) {
  if (f.n() != dist.n()) throw std::invalid_argument("function and distribution dimensions differ");
  check_dense_n(f.n());
  return transform(f.table(), dist);
}

double inverse(const FourierExpansion& e, Mask x) {
  const std::vector<double> row = basis_row(e.dist, x);
  double total = 0.0;
  for (std::size_t s = 0; s < e.coeffs.size(); ++s)
    if (e.coeffs[s] != 0.0) total += e.coeffs[s] * row[s];
  return total;
}

std::vector<double> inverse_table(const FourierExpansion& e) {
  check_dense_n(e.n);
  std::vector<double> table = e.coeffs;
  if (table.size() != (std::size_t{1} << e.n))
    throw std::invalid_argument("expansion has the wrong number of coefficients");
  for (int i = 0; i < e.n; ++i) {
    const auto cb = coordinate_basis(e.dist, i);
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t k = 0; k < table.size(); ++k) {
      if (k & bit) continue;
      const double c0 = table[k];
      const double c1 = table[k | bit];
      table[k] = c0 + c1 * cb.at_minus;
      table[k | bit] = c0 + c1 * cb.at_plus;
    }
  }
  return table;
}

double inner_product(const std::vector<double>& f, const std::vector<double>& g,
                     const ProductDistribution& dist) {
  if (f.size() != g.size() || f.size() != (std::size_t{1} << dist.n()))
    throw std::invalid_argument("inner product dimension mismatch");
  const std::vector<double> w = dist.weights();
  double total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) total += w[k] * f[k] * g[k];
  return total;
}

double inner_product(const CubeFunction& f, const CubeFunction& g, const ProductDistribution& dist) {
  if (f.n() != g.n() || f.n() != dist.n())
    throw std::invalid_argument("inner product dimension mismatch");
  return inner_product(f.table(), g.table(), dist);
}

double expectation(const std::vector<double>& f, const ProductDistribution& dist) {
  const std::vector<double> w = dist.weights();
  if (f.size() != w.size()) throw std::invalid_argument("expectation dimension mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) total += w[k] * f[k];
  return total;
}

CoefficientEstimate estimate_coefficient(const Dataset& samples, Mask s,
                                         const ProductDistribution& dist) {
  if (samples.empty()) throw std::invalid_argument("cannot estimate a coefficient from no samples");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& [x, y] : samples) {
    const double v = y * basis_value(dist, s, x);
    sum += v;
    sum_sq += v * v;
  }
  const double m = static_cast<double>(samples.size());
  const double mean = sum / m;
  double se = 0.0;
  if (samples.size() > 1) {
    const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
    se = std::sqrt(var / m);
  }
  return {mean, se};
}

}  // namespace submodstab
