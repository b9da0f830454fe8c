#include "submodstab/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "submodstab/lp.hpp"

namespace submodstab {
namespace {

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline constexpr std::size_t kMaxRegressionBasis = 5000;

}  // namespace

Dataset generate_dataset(const CubeFunction& target, const ProductDistribution& dist,
                         std::size_t m, const LabelNoise& noise, std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("dataset size must be >= 1");
  if (target.n() != dist.n()) throw std::invalid_argument("target and distribution dimensions differ");
  std::mt19937_64 rng(seed);
  Dataset data(m);
  for (auto& sample : data) {
    sample.x = dist.sample(rng);
    sample.y = target.evaluate(sample.x);
  }
  switch (noise.kind) {
    case LabelNoise::Kind::kNone: break;
    case LabelNoise::Kind::kAdditiveBounded:
      for (auto& sample : data) sample.y += noise.magnitude * (2.0 * unit_double(rng) - 1.0);
      break;
    case LabelNoise::Kind::kAdversarialFraction: {
      if (!(noise.fraction >= 0.0 && noise.fraction <= 1.0))
        throw std::invalid_argument("corruption fraction must lie in [0,1]");
      const auto corrupt = static_cast<std::size_t>(std::floor(noise.fraction * static_cast<double>(m)));
      std::vector<std::size_t> order(m);
      std::iota(order.begin(), order.end(), std::size_t{0});
      // Partial Fisher-Yates with our own index draws keeps this reproducible across
      // standard libraries.
      for (std::size_t i = 0; i < corrupt; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng() % (m - i));
        std::swap(order[i], order[j]);
        data[order[i]].y = noise.replacement;
      }
      break;
    }
  }
  return data;
}

double Hypothesis::evaluate(Mask x) const {
  const double v = poly.evaluate(x);
  return clamp ? std::clamp(v, clamp->first, clamp->second) : v;
}

L1Fit l1_poly_regression(const Dataset& data, int d, const ProductDistribution& dist,
                         std::optional<std::pair<double, double>> clamp) {
  const int n = dist.n();
  if (d < 0 || d > n) throw std::invalid_argument("degree must be in [0, n]");
  const std::vector<Mask> basis = low_degree_masks(n, d);
  if (basis.size() > kMaxRegressionBasis)
    throw std::invalid_argument("degree too large: " + std::to_string(basis.size()) +
                                " basis functions (limit 5000)");
  if (data.size() < basis.size())
    throw std::invalid_argument("need at least as many samples as basis functions");

  const std::size_t m = data.size();
  const std::size_t k = basis.size();
  // phi_S(x_j), row-major by sample.
  std::vector<double> design(m * k);
  for (std::size_t j = 0; j < m; ++j) {
    const std::vector<double> row = basis_row(dist, data[j].x);
    for (std::size_t c = 0; c < k; ++c) design[j * k + c] = row[basis[c]];
  }

  // Dual of min_c sum_j |y_j - phi(x_j) . c|:
  //   max y.u  s.t.  sum_j u_j phi_S(x_j) = 0 for every S,  -1 <= u_j <= 1.
  // The optimal c is minus the shadow price of the equality rows.
  lp::LinearProgram program;
  program.objective.resize(m);
  for (std::size_t j = 0; j < m; ++j) program.objective[j] = -data[j].y;
  program.lower.assign(m, -1.0);
  program.upper.assign(m, 1.0);
  program.constraints.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    auto& con = program.constraints[c];
    con.relation = lp::Relation::kEqual;
    con.rhs = 0.0;
    con.coeffs.resize(m);
    for (std::size_t j = 0; j < m; ++j) con.coeffs[j] = design[j * k + c];
  }
  const lp::Solution sol = lp::solve(program);
  if (sol.status != lp::Status::kOptimal)
    throw std::logic_error(std::string("L1 regression LP ended ") + lp::status_name(sol.status));

  std::vector<TruncatedPolynomial::Term> terms(k);
  for (std::size_t c = 0; c < k; ++c) terms[c] = {basis[c], -sol.duals[c]};

  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double fit = 0.0;
    for (std::size_t c = 0; c < k; ++c) fit += design[j * k + c] * terms[c].second;
    total += std::abs(fit - data[j].y);
  }
  const double dual_optimum = -sol.objective;
  if (std::abs(total - dual_optimum) > 1e-6 * (1.0 + std::abs(dual_optimum)))
    throw std::logic_error("L1 regression: recovered coefficients do not attain the LP optimum (" +
                           std::to_string(total) + " vs " + std::to_string(dual_optimum) + ")");

  L1Fit fit{Hypothesis{TruncatedPolynomial(n, d, dist, std::move(terms)), clamp},
            total / static_cast<double>(m), dual_optimum / static_cast<double>(m), sol.pivots};
  return fit;
}

SQOracle::SQOracle(JointDistribution joint, double tolerance, NoiseMode mode, std::uint64_t seed,
                   long budget)
    : joint_(std::move(joint)), tolerance_(tolerance), mode_(mode), rng_(seed), budget_(budget) {
  if (!(tolerance_ >= 0.0)) throw std::invalid_argument("SQ tolerance must be >= 0");
  if (joint_.target.n() != joint_.dist.n())
    throw std::invalid_argument("target and distribution dimensions differ");
  if (!(joint_.corruption_rate >= 0.0 && joint_.corruption_rate <= 1.0))
    throw std::invalid_argument("corruption rate must lie in [0,1]");
  table_ = joint_.target.table();
  weights_ = joint_.dist.weights();
}

double SQOracle::expectation(const Query& g) const {
  const double eta = joint_.corruption_rate;
  double total = 0.0;
  for (Mask x = 0; x < table_.size(); ++x) {
    double v = (1.0 - eta) * g(x, table_[x]);
    if (eta > 0.0) v += eta * g(x, joint_.corruption_value);
    total += weights_[x] * v;
  }
  return total;
}

double SQOracle::query(const Query& g) {
  if (queries_ >= budget_) throw std::runtime_error("statistical query budget exceeded");
  ++queries_;
  const double truth = expectation(g);
  if (tolerance_ == 0.0) return truth;
  if (mode_ == NoiseMode::kAdversarial) return truth - tolerance_ * (truth >= 0.0 ? 1.0 : -1.0);
  return truth + tolerance_ * (2.0 * unit_double(rng_) - 1.0);
}

Hypothesis low_degree_algorithm_sq(SQOracle& oracle, int d, const ProductDistribution& dist,
                                   double clip) {
  const int n = dist.n();
  if (d < 0 || d > n) throw std::invalid_argument("degree must be in [0, n]");
  std::vector<TruncatedPolynomial::Term> terms;
  for (Mask s : low_degree_masks(n, d)) {
    const double c = oracle.query([&dist, s, clip](Mask x, double y) {
      return std::clamp(y * basis_value(dist, s, x), -clip, clip);
    });
    terms.emplace_back(s, c);
  }
  return Hypothesis{TruncatedPolynomial(n, d, dist, std::move(terms)), std::nullopt};
}

NormEstimate normalize_target(const Dataset& data, double label_bound, double confidence,
                              std::optional<double> required_half_width) {
  if (data.empty()) throw std::invalid_argument("cannot estimate a norm from no samples");
  if (!(label_bound > 0.0)) throw std::invalid_argument("label bound must be > 0");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0,1)");
  double sum_sq = 0.0;
  for (const auto& s : data) {
    if (std::abs(s.y) > label_bound) throw std::invalid_argument("label exceeds the declared bound");
    sum_sq += s.y * s.y;
  }
  const double m = static_cast<double>(data.size());
  NormEstimate est;
  est.second_moment = sum_sq / m;
  // y^2 ranges over [0, B^2].
  est.second_moment_half_width =
      label_bound * label_bound * std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * m));
  if (required_half_width && est.second_moment_half_width > *required_half_width)
    throw std::invalid_argument("too few samples: Hoeffding half-width " +
                                std::to_string(est.second_moment_half_width) + " exceeds " +
                                std::to_string(*required_half_width));
  est.norm = std::sqrt(est.second_moment);
  est.norm_lo = std::sqrt(std::max(0.0, est.second_moment - est.second_moment_half_width));
  est.norm_hi = std::sqrt(est.second_moment + est.second_moment_half_width);
  return est;
}

double eval_l1_error(const Hypothesis& h, const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("cannot evaluate on an empty dataset");
  double total = 0.0;
  for (const auto& s : data) total += std::abs(h.evaluate(s.x) - s.y);
  return total / static_cast<double>(data.size());
}

double eval_l1_error(const CubeFunction& f, const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("cannot evaluate on an empty dataset");
  double total = 0.0;
  for (const auto& s : data) total += std::abs(f.evaluate(s.x) - s.y);
  return total / static_cast<double>(data.size());
}

double empirical_opt(const Dataset& data, const std::vector<CubeFunction>& pool) {
  if (pool.empty()) throw std::invalid_argument("concept pool is empty");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : pool) best = std::min(best, eval_l1_error(f, data));
  return best;
}

CubeFunction scaled_to_unit_norm(const CubeFunction& f, const ProductDistribution& dist) {
  std::vector<double> t = f.table();
  const double norm = std::sqrt(inner_product(t, t, dist));
  if (norm == 0.0) throw std::invalid_argument("cannot scale the zero function to unit norm");
  for (double& v : t) v /= norm;
  return CubeFunction::dense(f.n(), std::move(t));
}

std::vector<CubeFunction> make_concept_pool(const CubeFunction& target, Family family, int extra,
                                            const ProductDistribution& dist, std::uint64_t seed) {
  std::vector<CubeFunction> pool{target};
  std::mt19937_64 seeds(seed);
  for (int i = 0; i < extra; ++i) {
    const CubeFunction g = random_submodular(target.n(), family, seeds());
    std::vector<double> t = g.table();
    if (std::all_of(t.begin(), t.end(), [](double v) { return v == 0.0; })) continue;
    pool.push_back(scaled_to_unit_norm(g, dist));
  }
  return pool;
}

LearningTrialResult run_learning_trial(const LearningTrialConfig& config) {
  std::mt19937_64 seeds(config.seed);
  const std::uint64_t train_seed = seeds();
  const std::uint64_t test_seed = seeds();
  const std::uint64_t pool_seed = seeds();
  const Dataset train =
      generate_dataset(config.target, config.dist, config.m_train, config.noise, train_seed);
  const Dataset test =
      generate_dataset(config.target, config.dist, config.m_test, config.noise, test_seed);
  const L1Fit fit = l1_poly_regression(train, config.degree, config.dist, config.clamp);
  const auto pool = make_concept_pool(config.target, config.family, config.pool_extra, config.dist,
                                      pool_seed);
  return {fit.train_l1, eval_l1_error(fit.hypothesis, test), empirical_opt(test, pool),
          config.degree, config.m_train};
}

}  // namespace submodstab
