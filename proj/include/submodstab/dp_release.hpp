#pragma once

// Differentially private release of monotone disjunction counting queries.
//
// A query is a variable set T over d binary attributes, encoded as the cube
// point with x_i = +1 iff i in T. The counting query function CQ_D(T) is the
// fraction of database items with at least one attribute of T set; the
// released structure is a low-degree polynomial approximating it under the
// uniform distribution over queries, built from Laplace-noised statistical
// queries against the database.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "submodstab/cube_fn.hpp"
#include "submodstab/lowdeg_approx.hpp"

namespace submodstab {

/// Multiset of attribute vectors r in {0,1}^d (bit i of an item = attribute i).
class Database {
 public:
  Database(int d, std::vector<Mask> items);

  int dimension() const { return d_; }
  std::size_t size() const { return items_.size(); }
  const std::vector<Mask>& items() const { return items_; }

 private:
  int d_;
  std::vector<Mask> items_;
};

struct DisjunctionQuery {
  Mask vars = 0;
  /// c_T(r) = 1 iff r has some attribute in T; the empty disjunction is false.
  bool operator()(Mask item) const { return (item & vars) != 0; }
};

/// Exact CQ_D(c). Non-private: for evaluation and tests only.
double counting_query(const Database& db, DisjunctionQuery c);
/// CQ_D at every query T in {0,1}^d (d <= 25).
std::vector<double> counting_query_table(const Database& db);

/// Fourier coefficient of q_r(T) = c_T(r) on chi_S under the uniform measure:
/// 1 - 2^-|r| for S empty, -(-1)^|S| 2^-|r| for nonempty S within r, else 0.
double item_coefficient(Mask item, Mask s);

/// Laplace(0, scale) draw; scale 0 gives 0.
double sample_laplace(double scale, std::mt19937_64& rng);

struct AccessRecord {
  enum class Kind { kLaplace, kDirect };
  Kind kind = Kind::kLaplace;
  double sensitivity = 0.0;  // bound / n_db
  double scale = 0.0;
  std::string label;
};

/// Sole owner of a database during a release. Every read goes through a
/// logged method; the log is what privacy accounting inspects.
class Curator {
 public:
  explicit Curator(Database db);
  Curator(const Curator&) = delete;
  Curator& operator=(const Curator&) = delete;

  int dimension() const { return db_.dimension(); }
  std::size_t size() const { return db_.size(); }

  /// (1/n) sum_r clamp(g(r), -bound, bound) + Laplace(scale). Sensitivity bound/n.
  double laplace_sq(const std::function<double(Mask)>& g, double bound, double scale,
                    std::mt19937_64& rng, std::string label = {});

  /// Exact counting query with no noise. Logged as a direct read, which fails
  /// privacy accounting.
  double exact_counting_query(DisjunctionQuery c, std::string label = {});

  std::vector<AccessRecord> log() const;

 private:
  Database db_;
  mutable std::mutex mutex_;
  std::vector<AccessRecord> log_;
};

struct ReleaseStructure {
  TruncatedPolynomial polynomial;
  double eps = 0.0;
  double alpha = 0.0;
  int degree = 0;
  std::size_t queries = 0;
  double noise_scale = 0.0;
  /// Whether n_db >= q (log q + log(1/delta)) / (eps * tau) with tau = alpha.
  bool size_condition_met = false;

  double answer(DisjunctionQuery c) const { return polynomial.evaluate(c.vars); }
};

inline constexpr double kReleaseDelta = 1e-6;

/// Degree ceil(log2(1/alpha)) + 1, capped at d.
int release_degree(double alpha, int d);

/// One Laplace query per coefficient with |S| <= degree. Each query declares the
/// bound B_S on |q_r^(S)| (1 for S empty, 2^-|S| otherwise) and all share the
/// scale (sum_S B_S) / (eps n_db), so the composed budget is exactly eps.
/// eps = +inf releases without noise. Requires d <= 16 and 0 < alpha < 1.
ReleaseStructure release(Curator& curator, double alpha, double eps, std::uint64_t seed);

struct PrivacyReport {
  bool ok = true;
  double spent = 0.0;
  std::size_t laplace_queries = 0;
  std::size_t direct_reads = 0;
  std::string message;
};

/// Sums sensitivity/scale over the log and fails on any direct read or an
/// overspent budget.
PrivacyReport verify_privacy_accounting(const std::vector<AccessRecord>& log, double eps);

struct ReleaseEvaluation {
  double beta = 0.0;
  double max_error = 0.0;
  bool sampled = false;  // d > 16: 65536 uniformly sampled queries instead of all
};

/// Fraction of queries T ~ uniform with |CQ_D(T) - H(T)| > alpha.
ReleaseEvaluation evaluate_release(const ReleaseStructure& h, const Database& db, double alpha,
                                   std::uint64_t seed = 0);

}  // namespace submodstab
