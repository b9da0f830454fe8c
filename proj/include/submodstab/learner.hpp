#pragma once

// Agnostic learning of non-negative submodular functions over product
// distributions: L1 polynomial regression, the statistical-query low-degree
// algorithm, and the empirical quantities used to judge them.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "submodstab/cube_fn.hpp"
#include "submodstab/dist_fourier.hpp"
#include "submodstab/lowdeg_approx.hpp"

namespace submodstab {

struct LabelNoise {
  enum class Kind { kNone, kAdditiveBounded, kAdversarialFraction };
  Kind kind = Kind::kNone;
  /// kAdditiveBounded: y = f(x) + U[-magnitude, magnitude].
  double magnitude = 0.0;
  /// kAdversarialFraction: exactly floor(fraction * m) labels set to `replacement`.
  double fraction = 0.0;
  double replacement = 0.0;

  static LabelNoise none() { return {}; }
  static LabelNoise additive(double magnitude) { return {Kind::kAdditiveBounded, magnitude, 0.0, 0.0}; }
  static LabelNoise adversarial(double fraction, double replacement = 0.0) {
    return {Kind::kAdversarialFraction, 0.0, fraction, replacement};
  }
};

/// m i.i.d. draws x ~ dist labelled by target(x), then corrupted per `noise`.
Dataset generate_dataset(const CubeFunction& target, const ProductDistribution& dist,
                         std::size_t m, const LabelNoise& noise, std::uint64_t seed);

/// A polynomial hypothesis, optionally clamped to [lo, hi] on output.
struct Hypothesis {
  TruncatedPolynomial poly;
  std::optional<std::pair<double, double>> clamp;

  double evaluate(Mask x) const;
};

struct L1Fit {
  Hypothesis hypothesis;
  double train_l1 = 0.0;   // (1/m) sum |h(x_j) - y_j| of the unclamped fit
  double lp_optimum = 0.0; // (1/m) times the dual LP optimum
  long pivots = 0;
};

/// Degree-d polynomial in the basis phi_S minimising the empirical L1 error,
/// solved exactly as a linear program (through its dual). Requires
/// m >= basis_count(n, d) and basis_count(n, d) <= 5000.
L1Fit l1_poly_regression(const Dataset& data, int d, const ProductDistribution& dist,
                         std::optional<std::pair<double, double>> clamp = std::nullopt);

/// The joint law of (x, y): x ~ dist, y = target(x) with probability 1 - eta,
/// otherwise y = corruption_value.
struct JointDistribution {
  CubeFunction target;
  ProductDistribution dist;
  double corruption_rate = 0.0;
  double corruption_value = 0.0;
};

/// Statistical-query access to a joint distribution. Every answer is within
/// `tolerance` of the exact expectation. Not safe for concurrent use.
class SQOracle {
 public:
  enum class NoiseMode { kAdversarial, kBoundedRandom };
  using Query = std::function<double(Mask, double)>;

  SQOracle(JointDistribution joint, double tolerance, NoiseMode mode, std::uint64_t seed,
           long budget = std::numeric_limits<long>::max());

  /// E[g(x, y)] perturbed according to the noise mode. Throws std::runtime_error
  /// once the query budget is spent.
  double query(const Query& g);
  /// Exact E[g(x, y)]; does not count as a query.
  double expectation(const Query& g) const;

  long queries() const { return queries_; }
  double tolerance() const { return tolerance_; }
  const JointDistribution& joint() const { return joint_; }

 private:
  JointDistribution joint_;
  double tolerance_;
  NoiseMode mode_;
  std::mt19937_64 rng_;
  long budget_;
  long queries_ = 0;
  std::vector<double> table_;
  std::vector<double> weights_;
};

/// One statistical query per basis function with |S| <= d, g = y phi_S(x)
/// clipped to [-clip, clip].
Hypothesis low_degree_algorithm_sq(SQOracle& oracle, int d, const ProductDistribution& dist,
                                   double clip = std::numeric_limits<double>::infinity());

struct NormEstimate {
  double norm = 0.0;                 // sqrt of the empirical second moment
  double second_moment = 0.0;
  double second_moment_half_width = 0.0;  // Hoeffding, at the requested confidence
  double norm_lo = 0.0;
  double norm_hi = 0.0;
};

/// Estimates ||f||_2 from labels bounded by |y| <= label_bound. When
/// `required_half_width` is given and the Hoeffding half-width on E[y^2] exceeds
/// it, throws std::invalid_argument (too few samples).
NormEstimate normalize_target(const Dataset& data, double label_bound, double confidence = 0.95,
                              std::optional<double> required_half_width = std::nullopt);

/// Mean |h(x) - y|.
double eval_l1_error(const Hypothesis& h, const Dataset& data);
double eval_l1_error(const CubeFunction& f, const Dataset& data);

/// min over the pool of the empirical L1 error. Throws on an empty pool.
double empirical_opt(const Dataset& data, const std::vector<CubeFunction>& pool);

/// f / ||f||_2 (exact, dense). Throws if f is identically zero.
CubeFunction scaled_to_unit_norm(const CubeFunction& f, const ProductDistribution& dist);

/// The target plus `extra` random members of `family`, each scaled to unit norm
/// (zero members are skipped).
std::vector<CubeFunction> make_concept_pool(const CubeFunction& target, Family family, int extra,
                                            const ProductDistribution& dist, std::uint64_t seed);

struct LearningTrialConfig {
  CubeFunction target;  // used as given; callers scale to unit norm when they want that
  Family family = Family::kCoverage;
  ProductDistribution dist = ProductDistribution::uniform(1);
  int degree = 1;
  std::size_t m_train = 1000;
  std::size_t m_test = 1000;
  LabelNoise noise;
  std::uint64_t seed = 0;
  int pool_extra = 50;
  std::optional<std::pair<double, double>> clamp;
};

struct LearningTrialResult {
  double train_l1 = 0.0;
  double test_l1 = 0.0;
  double opt_pool = 0.0;
  int degree = 0;
  std::size_t m = 0;
};

/// Fit by L1 regression on a training draw, evaluate on an independent test draw
/// from the same (corrupted) distribution, and compute the pool opt on it.
LearningTrialResult run_learning_trial(const LearningTrialConfig& config);

}  // namespace submodstab
