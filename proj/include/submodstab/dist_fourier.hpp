#pragma once

// Product distributions on {-1,1}^n and exact Fourier analysis in the
// orthonormal (p-biased) character basis
//
//   phi_S(x) = prod_{i in S} (x_i - mu_i) / sigma_i,
//   mu_i = 2 p_i - 1,  sigma_i = 2 sqrt(p_i (1 - p_i)),
//
// which is what Gram-Schmidt on the parities chi_S produces under a product
// measure. With p_i = 1/2 this is the ordinary Walsh-Hadamard basis.

#include <cstdint>
#include <vector>

#include "submodstab/cube_fn.hpp"

namespace submodstab {

/// Per-coordinate probabilities p_i = Pr[x_i = +1], each strictly inside (0,1).
class ProductDistribution {
 public:
  explicit ProductDistribution(std::vector<double> p);
  static ProductDistribution uniform(int n);

  int n() const { return static_cast<int>(p_.size()); }
  const std::vector<double>& p() const { return p_; }
  double p(int i) const { return p_[static_cast<std::size_t>(i)]; }

  /// min_i p_i (one-sided: the probability of +1 only).
  double min_probability() const { return p_min_; }
  /// min_i min(p_i, 1 - p_i).
  double min_probability_symmetric() const;
  bool is_uniform() const;

  /// Pr[x] under the product measure.
  double weight(Mask x) const;
  /// Pr[x] for every x, indexed by mask.
  std::vector<double> weights() const;

  double mean(int i) const { return 2.0 * p(i) - 1.0; }
  double stddev(int i) const;

  /// Independent draw x ~ Pi.
  template <class Rng>
  Mask sample(Rng& rng) const;

  bool operator==(const ProductDistribution&) const = default;

 private:
  std::vector<double> p_;
  double p_min_ = 0.0;
};

/// f^(S) for all S, as a dense 2^n array indexed by mask.
struct FourierExpansion {
  int n = 0;
  ProductDistribution dist;
  std::vector<double> coeffs;
};

struct LabeledSample {
  Mask x = 0;
  double y = 0.0;
};
using Dataset = std::vector<LabeledSample>;

struct CoefficientEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// phi_S(x); phi_empty = 1.
double basis_value(const ProductDistribution& dist, Mask s, Mask x);

/// phi_S(x) for every S at a fixed x, indexed by S.
std::vector<double> basis_row(const ProductDistribution& dist, Mask x);

/// Exact f^(S) = E_Pi[f phi_S] for every S via an O(n 2^n) butterfly.
FourierExpansion transform(const CubeFunction& f, const ProductDistribution& dist);
FourierExpansion transform(std::vector<double> table, const ProductDistribution& dist);

/// sum_S coeffs[S] phi_S(x).
double inverse(const FourierExpansion& e, Mask x);
/// Inverse butterfly: the dense table of the expansion at every point.
std::vector<double> inverse_table(const FourierExpansion& e);

/// Exact E_Pi[f g] by weighted enumeration.
double inner_product(const CubeFunction& f, const CubeFunction& g, const ProductDistribution& dist);
double inner_product(const std::vector<double>& f, const std::vector<double>& g,
                     const ProductDistribution& dist);
/// E_Pi[f].
double expectation(const std::vector<double>& f, const ProductDistribution& dist);

/// Empirical mean of y * phi_S(x) with its standard error. Throws on empty data.
CoefficientEstimate estimate_coefficient(const Dataset& samples, Mask s,
                                         const ProductDistribution& dist);

// ---- template definitions ----

template <class Rng>
Mask ProductDistribution::sample(Rng& rng) const {
  Mask x = 0;
  for (int i = 0; i < n(); ++i) {
    // 53-bit uniform in [0,1).
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < p(i)) x |= Mask{1} << i;
  }
  return x;
}

}  // namespace submodstab
