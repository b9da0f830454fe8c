#pragma once

// Set functions on the Boolean cube {-1,1}^n.
//
// Index convention, used everywhere in this library: bit i of a mask k is set
// iff element i belongs to the set S iff coordinate x_i = +1. A "point" of the
// cube and a "subset" are therefore the same Mask value.

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace submodstab {

using Mask = std::uint32_t;

/// Largest n for which dense (2^n-sized) operations are permitted.
inline constexpr int kMaxDenseN = 25;
/// Largest n a structured function may have (limited by the Mask width).
inline constexpr int kMaxN = 30;
/// Absolute slack for submodularity checks.
inline constexpr double kSubmodularTolerance = 1e-9;

inline int popcount(Mask m) { return std::popcount(m); }
inline bool has_element(Mask m, int i) { return ((m >> i) & 1u) != 0; }
inline Mask full_mask(int n) { return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1; }

struct DenseTable {
  std::vector<double> values;
};

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

struct GraphCut {
  std::vector<Edge> edges;
};

/// f(S) = total weight of universe elements covered by the union of sets[i], i in S.
struct Coverage {
  std::vector<double> universe_weights;
  std::vector<std::vector<int>> sets;
};

/// f(S) = min(sum_{i in S} weights[i], budget).
struct BudgetAdditive {
  std::vector<double> weights;
  double budget = 0.0;
};

/// f(S) = min(|S|, k).
struct UniformMatroidRank {
  int k = 0;
};

enum class Family { kGraphCut, kCoverage, kBudgetAdditive, kUniformMatroidRank, kRandomTable };

const char* family_name(Family family);
Family parse_family(const std::string& name);

/// A real-valued function on {-1,1}^n. Immutable after construction.
class CubeFunction {
 public:
  using Repr = std::variant<DenseTable, GraphCut, Coverage, BudgetAdditive, UniformMatroidRank>;

  static CubeFunction dense(int n, std::vector<double> values);
  static CubeFunction graph_cut(int n, std::vector<Edge> edges);
  static CubeFunction coverage(int n, std::vector<double> universe_weights,
                               std::vector<std::vector<int>> sets);
  static CubeFunction budget_additive(int n, std::vector<double> weights, double budget);
  static CubeFunction uniform_matroid_rank(int n, int k);

  int n() const { return n_; }
  const Repr& repr() const { return repr_; }
  bool is_dense() const { return std::holds_alternative<DenseTable>(repr_); }

  /// f(S). Throws std::out_of_range when s >= 2^n.
  double evaluate(Mask s) const;
  double operator()(Mask s) const { return evaluate(s); }

  /// Dense copy; entry k equals evaluate(k). Throws when n > kMaxDenseN.
  CubeFunction to_dense() const;
  /// The 2^n values, densifying when needed.
  std::vector<double> table() const;

 private:
  CubeFunction(int n, Repr repr);
  double evaluate_unchecked(Mask s) const;

  int n_ = 0;
  Repr repr_;
  // For Coverage: per universe element, the mask of sets containing it.
  std::vector<Mask> cover_masks_;
};

struct SubmodularityVerdict {
  bool holds = true;
  /// Violating pair (S, T) with f(S|T) + f(S&T) > f(S) + f(T) + tol.
  std::optional<std::pair<Mask, Mask>> witness;
  double violation = 0.0;
};

struct NonnegativityVerdict {
  bool holds = true;
  std::optional<Mask> witness;
};

/// Exhaustive lattice check over all pairs (S,T): O(4^n).
SubmodularityVerdict is_submodular_lattice(const CubeFunction& f,
                                           double tol = kSubmodularTolerance);

/// Local decreasing-marginal check: f(S+i+j) - f(S+j) <= f(S+i) - f(S). O(n^2 2^n).
/// The witness is returned in lattice form (S+i, S+j).
SubmodularityVerdict is_submodular_marginal(const CubeFunction& f,
                                            double tol = kSubmodularTolerance);

NonnegativityVerdict is_nonnegative(const CubeFunction& f);

/// Random member of a structured family. kRandomTable rejection-samples uniform
/// [0,1] tables (n <= 4, at most kRandomTableBudget draws) until non-negative and
/// submodular; throws std::runtime_error when the budget runs out.
CubeFunction random_submodular(int n, Family family, std::uint64_t seed);

inline constexpr long kRandomTableBudget = 1'000'000;

}  // namespace submodstab
