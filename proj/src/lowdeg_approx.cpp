#include "submodstab/lowdeg_approx.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "submodstab/noise_stability.hpp"

namespace submodstab {
namespace {

bool term_order(const TruncatedPolynomial::Term& a, const TruncatedPolynomial::Term& b) {
  const int pa = popcount(a.first);
  const int pb = popcount(b.first);
  return pa != pb ? pa < pb : a.first < b.first;
}

}  // namespace

TruncatedPolynomial::TruncatedPolynomial(int n, int degree, ProductDistribution dist,
                                         std::vector<Term> terms)
    : n_(n), degree_(degree), dist_(std::move(dist)), terms_(std::move(terms)) {
  if (n_ != dist_.n()) throw std::invalid_argument("polynomial and distribution dimensions differ");
  if (degree_ < 0) throw std::invalid_argument("degree must be >= 0");
  for (const auto& [s, c] : terms_) {
    if (n_ < 32 && (s >> n_) != 0) throw std::invalid_argument("term mask out of range");
    if (popcount(s) > degree_) throw std::invalid_argument("term exceeds the polynomial degree");
  }
  std::sort(terms_.begin(), terms_.end(), term_order);
}

double TruncatedPolynomial::coefficient(Mask s) const {
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{s, 0.0}, term_order);
  return it != terms_.end() && it->first == s ? it->second : 0.0;
}

double TruncatedPolynomial::evaluate(Mask x) const {
  double total = 0.0;
  for (const auto& [s, c] : terms_) total += c * basis_value(dist_, s, x);
  return total;
}

std::vector<double> TruncatedPolynomial::table() const {
  FourierExpansion e{n_, dist_, std::vector<double>(std::size_t{1} << n_, 0.0)};
  for (const auto& [s, c] : terms_) e.coeffs[s] = c;
  return inverse_table(e);
}

std::vector<Mask> low_degree_masks(int n, int d) {
  if (n < 1 || n > kMaxN) throw std::invalid_argument("n out of range");
  std::vector<Mask> masks;
  masks.push_back(0);
  const Mask limit = full_mask(n);
  for (int k = 1; k <= std::min(d, n); ++k) {
    // Gosper's hack: successive k-subsets in increasing order.
    Mask s = (Mask{1} << k) - 1;
    while (true) {
      masks.push_back(s);
      if (s == (limit & ~((Mask{1} << (n - k)) - 1))) break;
      const Mask c = s & (~s + 1);
      const Mask r = s + c;
      s = (((r ^ s) >> 2) / c) | r;
    }
  }
  return masks;
}

std::size_t basis_count(int n, int d) {
  std::size_t total = 0;
  std::size_t binom = 1;
  for (int k = 0; k <= std::min(d, n); ++k) {
    total += binom;
    binom = binom * static_cast<std::size_t>(n - k) / static_cast<std::size_t>(k + 1);
  }
  return total;
}

int ceil_degree(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) < 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::ceil(x));
}

TruncatedPolynomial truncate(const FourierExpansion& e, int d) {
  if (d < 0 || d > e.n) throw std::invalid_argument("truncation degree must be in [0, n]");
  std::vector<TruncatedPolynomial::Term> terms;
  for (std::size_t s = 0; s < e.coeffs.size(); ++s)
    if (popcount(static_cast<Mask>(s)) <= d) terms.emplace_back(static_cast<Mask>(s), e.coeffs[s]);
  return TruncatedPolynomial(e.n, d, e.dist, std::move(terms));
}

double approx_error(const CubeFunction& f, const TruncatedPolynomial& p) {
  if (f.n() != p.n()) throw std::invalid_argument("function and polynomial dimensions differ");
  const std::vector<double> ft = f.table();
  const std::vector<double> pt = p.table();
  const std::vector<double> w = p.dist().weights();
  double total = 0.0;
  for (std::size_t k = 0; k < ft.size(); ++k) total += w[k] * (ft[k] - pt[k]) * (ft[k] - pt[k]);
  return total;
}

double tail_mass(const FourierExpansion& e, int d) {
  double total = 0.0;
  for (std::size_t s = 0; s < e.coeffs.size(); ++s)
    if (popcount(static_cast<Mask>(s)) > d) total += e.coeffs[s] * e.coeffs[s];
  return total;
}

FolkloreReport check_folklore_lemma(const CubeFunction& f, double rho,
                                    const ProductDistribution& dist) {
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in [0,1)");
  if (f.n() != dist.n()) throw std::invalid_argument("function and distribution dimensions differ");
  std::vector<double> table = f.table();
  const double norm = std::sqrt(inner_product(table, table, dist));
  if (norm == 0.0) throw std::invalid_argument("cannot scale the zero function to unit norm");
  for (double& v : table) v /= norm;
  const CubeFunction unit = CubeFunction::dense(f.n(), table);
  const FourierExpansion e = transform(table, dist);

  FolkloreReport r;
  r.rho = rho;
  r.scale = norm;
  r.stab = stability(e, rho);
  r.gamma = (1.0 - r.stab) / 2.0;
  r.degree = ceil_degree(2.0 / (1.0 - rho));
  r.error = approx_error(unit, truncate(e, std::min(r.degree, f.n())));
  r.bound = kLowDegreeErrorConstant * r.gamma;
  r.slack = r.bound - r.error;
  r.holds = r.error <= r.bound + kSlackTolerance;
  return r;
}

DegreeChoice degree_for_accuracy(double eps, double p_min) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  if (!(p_min > 0.0 && p_min < 1.0)) throw std::invalid_argument("p_min must lie in (0,1)");
  const double gap = std::min(1.0, eps * eps / (kLowDegreeErrorConstant * (1.0 - p_min)));
  return {1.0 - gap, ceil_degree(2.0 / gap)};
}

}  // namespace submodstab
