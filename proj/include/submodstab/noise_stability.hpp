#pragma once

// The noise operator T_rho, noise stability, and exhaustive checks of the
// pointwise and averaged lower bounds for submodular functions.

#include <vector>

#include "submodstab/cube_fn.hpp"
#include "submodstab/dist_fourier.hpp"

namespace submodstab {

/// Absolute slack allowed in every inequality check.
inline constexpr double kSlackTolerance = 1e-9;

class NoiseParams {
 public:
  /// Throws std::invalid_argument unless 0 <= rho <= 1.
  NoiseParams(double rho, ProductDistribution dist);

  double rho() const { return rho_; }
  const ProductDistribution& dist() const { return dist_; }

 private:
  double rho_;
  ProductDistribution dist_;
};

/// How the minimum probability entering the bound coefficient is read off the
/// distribution. kLiteral is min_i p_i; kSymmetric is min_i min(p_i, 1 - p_i).
enum class PminConvention { kLiteral, kSymmetric };

double min_probability(const ProductDistribution& dist, PminConvention convention);

/// c(rho, p_min) = 2 rho - 1 + 2 p_min (1 - rho).
double stability_bound_coefficient(double rho, double p_min);

/// {0, 0.05, ..., 1}.
std::vector<double> default_rho_grid();

/// y ~ N_rho(x): each coordinate kept with probability rho, otherwise redrawn
/// from Pi_i. Rng must produce 64-bit words.
template <class Rng>
Mask sample_noise(Mask x, const NoiseParams& params, Rng& rng);

/// Dense table of T_rho f computed spectrally: f^(S) -> rho^|S| f^(S).
CubeFunction apply_noise_operator(const CubeFunction& f, const NoiseParams& params);
std::vector<double> apply_noise_operator(const FourierExpansion& e, double rho);

/// T_rho f(x) = sum_y Pr[y | x] f(y) with exact transition probabilities. O(4^n);
/// limited to n <= 12.
CubeFunction apply_noise_operator_direct(const CubeFunction& f, const NoiseParams& params);

/// sum_S rho^|S| f^(S)^2.
double stability(const CubeFunction& f, const NoiseParams& params);
double stability(const FourierExpansion& e, double rho);
/// <f, T_rho f> with T_rho applied in value space (per-coordinate transition
/// kernels), independent of the transform.
double stability_definitional(const CubeFunction& f, const NoiseParams& params);

struct PointwiseReport {
  bool holds = true;
  double min_slack = 0.0;
  Mask argmin = 0;
  // T_rho f(x) >= rho f(x); only checked when f is non-negative.
  bool weak_checked = false;
  bool weak_holds = true;
  double weak_min_slack = 0.0;
  Mask weak_argmin = 0;
};

/// Uniform measure: T_rho f(x) >= rho f(x) + (1-rho)/2 (f(-1^n) + f(1^n)) at every x.
PointwiseReport check_pointwise_uniform(const CubeFunction& f, double rho);

/// T_rho f(x) >= c(rho, p_min) f(x) at every x.
PointwiseReport check_pointwise_product(const CubeFunction& f, const NoiseParams& params,
                                        PminConvention convention = PminConvention::kLiteral);
PointwiseReport check_pointwise_product(const std::vector<double>& table,
                                        const FourierExpansion& e, double rho,
                                        PminConvention convention = PminConvention::kLiteral);

struct StabilityReport {
  double rho = 0.0;
  double p_min = 0.0;
  double stab = 0.0;
  double coefficient = 0.0;
  double norm2sq = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool holds = true;
};

/// Stab_rho(f) - c(rho, p_min) ||f||_2^2, asserted >= -kSlackTolerance.
StabilityReport check_stability_bound(const CubeFunction& f, const NoiseParams& params,
                                      PminConvention convention = PminConvention::kLiteral);
StabilityReport check_stability_bound(const FourierExpansion& e, double rho,
                                      PminConvention convention = PminConvention::kLiteral);

// ---- template definitions ----

template <class Rng>
Mask sample_noise(Mask x, const NoiseParams& params, Rng& rng) {
  const auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  Mask y = 0;
  for (int i = 0; i < params.dist().n(); ++i) {
    const bool plus = unit() < params.rho() ? has_element(x, i) : unit() < params.dist().p(i);
    if (plus) y |= Mask{1} << i;
  }
  return y;
}

}  // namespace submodstab
