#include "submodstab/cube_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace submodstab {
namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

void check_n(int n) {
  require(n >= 1 && n <= kMaxN, "n must be in [1, " + std::to_string(kMaxN) + "], got " +
                                    std::to_string(n));
}

void check_nonneg_finite(const std::vector<double>& v, const char* what) {
  for (double w : v) require(std::isfinite(w) && w >= 0.0, std::string(what) + " must be finite and >= 0");
}

}  // namespace

const char* family_name(Family family) {
  switch (family) {
    case Family::kGraphCut: return "cut";
    case Family::kCoverage: return "coverage";
    case Family::kBudgetAdditive: return "budget_additive";
    case Family::kUniformMatroidRank: return "uniform_matroid";
    case Family::kRandomTable: return "random_table";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::kGraphCut, Family::kCoverage, Family::kBudgetAdditive,
                   Family::kUniformMatroidRank, Family::kRandomTable}) {
    if (name == family_name(f)) return f;
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

CubeFunction::CubeFunction(int n, Repr repr) : n_(n), repr_(std::move(repr)) {
  if (const auto* cov = std::get_if<Coverage>(&repr_)) {
    cover_masks_.assign(cov->universe_weights.size(), 0);
    for (std::size_t i = 0; i < cov->sets.size(); ++i)
      for (int u : cov->sets[i]) cover_masks_[static_cast<std::size_t>(u)] |= Mask{1} << i;
  }
}

CubeFunction CubeFunction::dense(int n, std::vector<double> values) {
  require(n >= 1 && n <= kMaxDenseN, "dense table needs 1 <= n <= 25");
  require(values.size() == (std::size_t{1} << n), "dense table must have 2^n entries");
  for (double v : values) require(std::isfinite(v), "dense table entries must be finite");
  return CubeFunction(n, DenseTable{std::move(values)});
}

CubeFunction CubeFunction::graph_cut(int n, std::vector<Edge> edges) {
  check_n(n);
  for (const Edge& e : edges) {
    require(e.u >= 0 && e.u < n && e.v >= 0 && e.v < n, "edge endpoint out of range");
    require(std::isfinite(e.weight) && e.weight >= 0.0, "edge weight must be >= 0");
  }
  return CubeFunction(n, GraphCut{std::move(edges)});
}

CubeFunction CubeFunction::coverage(int n, std::vector<double> universe_weights,
                                    std::vector<std::vector<int>> sets) {
  check_n(n);
  require(sets.size() == static_cast<std::size_t>(n), "coverage needs exactly n sets");
  check_nonneg_finite(universe_weights, "universe weights");
  const int m = static_cast<int>(universe_weights.size());
  for (const auto& s : sets)
    for (int u : s) require(u >= 0 && u < m, "coverage set references unknown universe element");
  return CubeFunction(n, Coverage{std::move(universe_weights), std::move(sets)});
}

CubeFunction CubeFunction::budget_additive(int n, std::vector<double> weights, double budget) {
  check_n(n);
  require(weights.size() == static_cast<std::size_t>(n), "budget-additive needs n weights");
  check_nonneg_finite(weights, "weights");
  require(std::isfinite(budget) && budget >= 0.0, "budget must be finite and >= 0");
  return CubeFunction(n, BudgetAdditive{std::move(weights), budget});
}

CubeFunction CubeFunction::uniform_matroid_rank(int n, int k) {
  check_n(n);
  require(k >= 0, "matroid rank threshold must be >= 0");
  return CubeFunction(n, UniformMatroidRank{k});
}

double CubeFunction::evaluate(Mask s) const {
  if (n_ < 32 && (s >> n_) != 0)
    throw std::out_of_range("subset mask " + std::to_string(s) + " out of range for n=" +
                            std::to_string(n_));
  return evaluate_unchecked(s);
}

double CubeFunction::evaluate_unchecked(Mask s) const {
  struct Visitor {
    const CubeFunction& self;
    Mask s;
    double operator()(const DenseTable& t) const { return t.values[s]; }
    double operator()(const GraphCut& g) const {
      double total = 0.0;
      for (const Edge& e : g.edges)
        if (has_element(s, e.u) != has_element(s, e.v)) total += e.weight;
      return total;
    }
    double operator()(const Coverage& c) const {
      double total = 0.0;
      for (std::size_t u = 0; u < c.universe_weights.size(); ++u)
        if ((self.cover_masks_[u] & s) != 0) total += c.universe_weights[u];
      return total;
    }
    double operator()(const BudgetAdditive& b) const {
      double total = 0.0;
      for (std::size_t i = 0; i < b.weights.size(); ++i)
        if (has_element(s, static_cast<int>(i))) total += b.weights[i];
      return std::min(total, b.budget);
    }
    double operator()(const UniformMatroidRank& r) const {
      return static_cast<double>(std::min(popcount(s), r.k));
    }
  };
  return std::visit(Visitor{*this, s}, repr_);
}

std::vector<double> CubeFunction::table() const {
  if (const auto* t = std::get_if<DenseTable>(&repr_)) return t->values;
  if (n_ > kMaxDenseN)
    throw std::invalid_argument("n=" + std::to_string(n_) + " too large to densify");
  std::vector<double> values(std::size_t{1} << n_);
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = evaluate_unchecked(static_cast<Mask>(k));
  return values;
}

CubeFunction CubeFunction::to_dense() const {
  if (is_dense()) return *this;
  return CubeFunction(n_, DenseTable{table()});
}

SubmodularityVerdict is_submodular_lattice(const CubeFunction& f, double tol) {
  const std::vector<double> t = f.table();
  const std::size_t size = t.size();
  SubmodularityVerdict verdict;
  for (std::size_t s = 0; s < size; ++s) {
    for (std::size_t r = s + 1; r < size; ++r) {
      // Comparable pairs satisfy the inequality with equality.
      if ((s & r) == s || (s & r) == r) continue;
      const double gap = t[s | r] + t[s & r] - t[s] - t[r];
      if (gap > tol && gap > verdict.violation) {
        verdict.holds = false;
        verdict.violation = gap;
        verdict.witness = std::pair{static_cast<Mask>(s), static_cast<Mask>(r)};
      }
    }
  }
  return verdict;
}

SubmodularityVerdict is_submodular_marginal(const CubeFunction& f, double tol) {
  const std::vector<double> t = f.table();
  const int n = f.n();
  SubmodularityVerdict verdict;
  for (Mask s = 0; s < t.size(); ++s) {
    for (int i = 0; i < n; ++i) {
      if (has_element(s, i)) continue;
      const Mask si = s | (Mask{1} << i);
      for (int j = i + 1; j < n; ++j) {
        if (has_element(s, j)) continue;
        const Mask sj = s | (Mask{1} << j);
        const double gap = (t[si | sj] - t[sj]) - (t[si] - t[s]);
        if (gap > tol && gap > verdict.violation) {
          verdict.holds = false;
          verdict.violation = gap;
          verdict.witness = std::pair{si, sj};
        }
      }
    }
  }
  return verdict;
}

NonnegativityVerdict is_nonnegative(const CubeFunction& f) {
  const std::vector<double> t = f.table();
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t[k] < 0.0) return {false, static_cast<Mask>(k)};
  return {};
}

CubeFunction random_submodular(int n, Family family, std::uint64_t seed) {
  check_n(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (family) {
    case Family::kGraphCut: {
      std::vector<Edge> edges;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (unit(rng) < 0.5) edges.push_back({u, v, unit(rng)});
      return CubeFunction::graph_cut(n, std::move(edges));
    }
    case Family::kCoverage: {
      const int m = n + static_cast<int>(rng() % static_cast<std::uint64_t>(n + 1));
      std::vector<double> weights(static_cast<std::size_t>(m));
      for (double& w : weights) w = unit(rng);
      std::vector<std::vector<int>> sets(static_cast<std::size_t>(n));
      for (auto& s : sets)
        for (int u = 0; u < m; ++u)
          if (unit(rng) < 0.3) s.push_back(u);
      return CubeFunction::coverage(n, std::move(weights), std::move(sets));
    }
    case Family::kBudgetAdditive: {
      std::vector<double> weights(static_cast<std::size_t>(n));
      for (double& w : weights) w = unit(rng);
      const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
      return CubeFunction::budget_additive(n, std::move(weights), unit(rng) * total);
    }
    case Family::kUniformMatroidRank:
      return CubeFunction::uniform_matroid_rank(
          n, static_cast<int>(rng() % static_cast<std::uint64_t>(n + 1)));
    case Family::kRandomTable: {
      require(n <= 4, "random tables are limited to n <= 4");
      std::vector<double> values(std::size_t{1} << n);
      for (long draw = 0; draw < kRandomTableBudget; ++draw) {
        for (double& v : values) v = unit(rng);
        auto candidate = CubeFunction::dense(n, values);
        if (is_submodular_marginal(candidate).holds && is_submodular_lattice(candidate).holds &&
            is_nonnegative(candidate).holds)
          return candidate;
      }
      throw std::runtime_error("random table rejection budget exhausted");
    }
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace submodstab
