#pragma once

// Degree truncation of Fourier expansions and the low-degree approximation
// guarantee for noise-stable functions.

#include <cmath>
#include <utility>
#include <vector>

#include "submodstab/cube_fn.hpp"
#include "submodstab/dist_fourier.hpp"

namespace submodstab {

/// 2 / (1 - e^{-2}) ~ 2.313: squared error of the degree-2/(1-rho) truncation
/// is below this times gamma when Stab_rho(f) >= 1 - 2 gamma at unit norm.
inline const double kLowDegreeErrorConstant = 2.0 / (1.0 - std::exp(-2.0));

/// Multilinear polynomial of degree <= d in the basis phi_S of `dist`.
class TruncatedPolynomial {
 public:
  using Term = std::pair<Mask, double>;

  /// Terms are sorted by (|S|, S); throws if any |S| > degree or S >= 2^n.
  TruncatedPolynomial(int n, int degree, ProductDistribution dist, std::vector<Term> terms);

  int n() const { return n_; }
  int degree() const { return degree_; }
  const ProductDistribution& dist() const { return dist_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// Coefficient of phi_S (0 when absent).
  double coefficient(Mask s) const;
  double evaluate(Mask x) const;
  /// Values at all 2^n points.
  std::vector<double> table() const;

 private:
  int n_;
  int degree_;
  ProductDistribution dist_;
  std::vector<Term> terms_;
};

/// All S with |S| <= d, ordered by (|S|, S).
std::vector<Mask> low_degree_masks(int n, int d);
/// sum_{k <= d} C(n, k).
std::size_t basis_count(int n, int d);

/// ceil(x), treating values within 1e-9 of an integer as that integer.
int ceil_degree(double x);

/// Keeps exactly the coefficients with |S| <= d.
TruncatedPolynomial truncate(const FourierExpansion& e, int d);

/// E_Pi[(f - p)^2] by enumeration.
double approx_error(const CubeFunction& f, const TruncatedPolynomial& p);
/// sum_{|S| > d} f^(S)^2.
double tail_mass(const FourierExpansion& e, int d);

struct FolkloreReport {
  double rho = 0.0;
  double scale = 1.0;  // f was divided by this (its exact L2 norm)
  double stab = 0.0;
  double gamma = 0.0;
  int degree = 0;      // ceil(2/(1-rho)); truncation uses min(degree, n)
  double error = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // bound - error
  bool holds = true;
};

/// Scales f to unit norm, sets gamma = (1 - Stab_rho)/2 and d = ceil(2/(1-rho)),
/// and checks error(truncation at d) <= 2.313 gamma + 1e-9. Requires 0 <= rho < 1
/// and f not identically zero.
FolkloreReport check_folklore_lemma(const CubeFunction& f, double rho,
                                    const ProductDistribution& dist);

struct DegreeChoice {
  double rho = 0.0;
  int degree = 0;
};

/// Noise rate at which the stability bound makes the low-degree error at most
/// eps^2 for unit-norm non-negative submodular f, and the matching degree:
/// 1 - rho = eps^2 (1 - e^{-2}) / (2 (1 - p_min)), d = ceil(2 / (1 - rho)).
DegreeChoice degree_for_accuracy(double eps, double p_min);

}  // namespace submodstab
