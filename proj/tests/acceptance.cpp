// Acceptance suite: one PASS/FAIL line per criterion.
//
//   submodstab_acceptance [--expect-fail 1,3]
//
// Without --expect-fail the exit status is 0 iff every criterion passes. With it,
// the status is 0 iff exactly the listed criteria fail, so a known, documented
// failure stays visible as FAIL while any other change is still caught.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "submodstab/cube_fn.hpp"
#include "submodstab/dist_fourier.hpp"
#include "submodstab/dp_release.hpp"
#include "submodstab/learner.hpp"
#include "submodstab/lowdeg_approx.hpp"
#include "submodstab/lp.hpp"
#include "submodstab/noise_stability.hpp"

using namespace submodstab;

namespace {

constexpr Family kFamilies[] = {Family::kGraphCut, Family::kCoverage, Family::kBudgetAdditive,
                                Family::kUniformMatroidRank};

struct Instance {
  CubeFunction f;
  std::string family;
  ProductDistribution product;  // p_i drawn across (0,1)
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

bool all_zero(const std::vector<double>& t) {
  return std::all_of(t.begin(), t.end(), [](double v) { return v == 0.0; });
}

/// 520 instances: every family, n = 2..12, each with its own product distribution.
std::vector<Instance> generate_instances() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  std::vector<Instance> out;
  for (int i = 0; i < 520; ++i) {
    const int n = 2 + i % 11;
    const Family fam = kFamilies[(i / 11) % 4];
    std::vector<double> p(static_cast<std::size_t>(n));
    for (double& v : p) v = unit(rng);
    out.push_back({random_submodular(n, fam, rng()), family_name(fam), ProductDistribution(p)});
  }
  // Frozen instance: single-edge cut under Pr[x_i = +1] = 0.9.
  out.push_back({CubeFunction::graph_cut(2, {{0, 1, 1.0}}), "cut", ProductDistribution({0.9, 0.9})});
  return out;
}

// 1. Stability lower bound under product distributions (one-sided p_min).
Outcome criterion_stability_product(const std::vector<Instance>& inst, PminConvention conv) {
  long checks = 0, bad = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::string first;
  std::set<std::string> bad_families;
  for (std::size_t k = 0; k < inst.size(); ++k) {
    const auto e = transform(inst[k].f, inst[k].product);
    for (double rho : default_rho_grid()) {
      const auto r = check_stability_bound(e, rho, conv);
      ++checks;
      worst = std::min(worst, r.slack);
      if (!r.holds) {
        ++bad;
        bad_families.insert(inst[k].family);
        if (first.empty())
          first = fmt("instance %zu (%s, n=%d) rho=%.2f slack=%.4g", k, inst[k].family.c_str(), inst[k].f.n(), rho,
                      r.slack);
      }
    }
  }
  std::string fams;
  for (const auto& f : bad_families) fams += (fams.empty() ? "" : ",") + f;
  Outcome o{bad == 0, fmt("%zu instances, %ld checks, %ld violations, min slack %.4g", inst.size(), checks, bad, worst)};
  if (bad) o.detail += "; violating families {" + fams + "}; first: " + first;
  return o;
}

// 2. Uniform specialisation: Stab >= rho ||f||^2.
Outcome criterion_stability_uniform(const std::vector<Instance>& inst) {
  long checks = 0, bad = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& in : inst) {
    const auto e = transform(in.f, ProductDistribution::uniform(in.f.n()));
    double norm2 = 0.0;
    for (double c : e.coeffs) norm2 += c * c;
    for (double rho : default_rho_grid()) {
      const double slack = stability(e, rho) - rho * norm2;
      ++checks;
      worst = std::min(worst, slack);
      bad += slack < -kSlackTolerance ? 1 : 0;
    }
  }
  return {bad == 0, fmt("%zu instances, %ld checks, %ld violations, min slack %.4g", inst.size(), checks, bad, worst)};
}

// Submodular, signed: cut + signed modular term - constant.
CubeFunction signed_instance(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto t = random_submodular(n, Family::kGraphCut, seed).table();
  std::vector<double> a(static_cast<std::size_t>(n));
  for (double& v : a) v = u(rng);
  for (Mask k = 0; k < t.size(); ++k) {
    t[k] -= 1.5;
    for (int i = 0; i < n; ++i)
      if (has_element(k, i)) t[k] += a[static_cast<std::size_t>(i)];
  }
  return CubeFunction::dense(n, t);
}

// 3. Pointwise lemmas and the supermodular negative control.
Outcome criterion_pointwise(const std::vector<Instance>& inst, PminConvention conv, bool uniform_part) {
  long uni_checks = 0, uni_bad = 0, prod_checks = 0, prod_bad = 0, signed_count = 0;
  double prod_worst = std::numeric_limits<double>::infinity();
  std::string first;
  if (uniform_part) {
    std::vector<CubeFunction> fs;
    for (const auto& in : inst) fs.push_back(in.f);
    for (int i = 0; i < 100; ++i) {
      const auto f = signed_instance(2 + i % 11, 5000 + static_cast<std::uint64_t>(i));
      if (is_nonnegative(f).holds || !is_submodular_marginal(f).holds) continue;
      fs.push_back(f);
      ++signed_count;
    }
    for (const auto& f : fs)
      for (double rho : default_rho_grid()) {
        const auto r = check_pointwise_uniform(f, rho);
        ++uni_checks;
        uni_bad += r.holds ? 0 : 1;
        if (r.weak_checked) {
          ++uni_checks;
          uni_bad += r.weak_holds ? 0 : 1;
        }
      }
  }
  for (std::size_t k = 0; k < inst.size(); ++k) {
    const auto table = inst[k].f.table();
    const auto e = transform(table, inst[k].product);
    for (double rho : default_rho_grid()) {
      const auto r = check_pointwise_product(table, e, rho, conv);
      ++prod_checks;
      prod_worst = std::min(prod_worst, r.min_slack);
      if (!r.holds) {
        ++prod_bad;
        if (first.empty())
          first = fmt("instance %zu (%s, n=%d) rho=%.2f x=%u slack=%.4g", k, inst[k].family.c_str(), inst[k].f.n(),
                      rho, static_cast<unsigned>(r.argmin), r.min_slack);
      }
    }
  }
  bool control = true;
  if (uniform_part) {
    const auto sq = CubeFunction::dense(2, {0, 1, 1, 4});
    control = !check_pointwise_uniform(sq, 0.5).holds;
  }
  Outcome o;
  o.pass = uni_bad == 0 && prod_bad == 0 && control;
  if (uniform_part)
    o.detail = fmt("uniform lemma: %ld checks (incl. %ld signed instances), %ld violations; ", uni_checks,
                   signed_count, uni_bad);
  o.detail += fmt("product lemma: %ld checks, %ld violations, min slack %.4g", prod_checks, prod_bad, prod_worst);
  if (uniform_part) o.detail += control ? "; |S|^2 control detected" : "; |S|^2 control NOT detected";
  if (prod_bad) o.detail += "; first: " + first;
  return o;
}

// 4. Spectral identities.
Outcome criterion_spectral(const std::vector<Instance>& inst) {
  double worst_stab = 0.0, worst_parseval = 0.0, worst_direct = 0.0;
  for (const auto& in : inst) {
    const auto& dist = in.product;
    const auto e = transform(in.f, dist);
    double sum_sq = 0.0;
    for (double c : e.coeffs) sum_sq += c * c;
    const double norm2 = oracle::naive_inner(in.f.table(), in.f.table(), dist.p());
    worst_parseval = std::max(worst_parseval, std::abs(sum_sq - norm2) / std::max(norm2, 1e-300));
    for (double rho : default_rho_grid()) {
      const NoiseParams params(rho, dist);
      const double spectral = stability(e, rho);
      const double defn = stability_definitional(in.f, params);
      if (defn != 0.0 || spectral != 0.0)
        worst_stab = std::max(worst_stab, std::abs(spectral - defn) / std::max(std::abs(defn), 1e-300));
    }
    if (in.f.n() <= 8)
      for (double rho : {0.0, 0.25, 0.5, 0.9, 1.0}) {
        const NoiseParams params(rho, dist);
        const auto a = apply_noise_operator(in.f, params).table();
        const auto b = apply_noise_operator_direct(in.f, params).table();
        for (std::size_t x = 0; x < a.size(); ++x) worst_direct = std::max(worst_direct, std::abs(a[x] - b[x]));
      }
  }
  return {worst_stab <= 1e-10 && worst_parseval <= 1e-10 && worst_direct <= 1e-10,
          fmt("max rel |<f,Tf> - spectral| %.3g; max rel Parseval %.3g; max |T spectral - T direct| (n<=8) %.3g",
              worst_stab, worst_parseval, worst_direct)};
}

// 5. Low-degree approximation lemma.
Outcome criterion_folklore(const std::vector<Instance>& inst) {
  long checks = 0, bad = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& in : inst) {
    if (all_zero(in.f.table())) continue;
    for (const auto& dist : {in.product, ProductDistribution::uniform(in.f.n())})
      for (double rho : {0.5, 0.75, 0.9}) {
        const auto r = check_folklore_lemma(in.f, rho, dist);
        ++checks;
        worst = std::min(worst, r.slack);
        bad += r.holds ? 0 : 1;
      }
  }
  return {bad == 0, fmt("%ld checks, %ld violations, min slack %.4g", checks, bad, worst)};
}

// 6. Learner.
Outcome criterion_learner(const std::vector<Instance>& inst) {
  // (a) Noiseless recovery of degree-representable targets.
  double worst_train = 0.0;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const int n = 3 + i % 5;
    const int d = 1 + i % 3;
    const auto dist = i % 2 ? ProductDistribution::uniform(n) : inst[static_cast<std::size_t>(n - 2)].product;
    std::vector<TruncatedPolynomial::Term> terms;
    for (Mask s : low_degree_masks(n, d)) terms.emplace_back(s, coef(rng));
    const auto target = CubeFunction::dense(n, TruncatedPolynomial(n, d, dist, terms).table());
    const auto data = generate_dataset(target, dist, 4 * basis_count(n, d) + 50, LabelNoise::none(), rng());
    worst_train = std::max(worst_train, l1_poly_regression(data, d, dist).train_l1);
  }
  for (int i = 0; i < 10; ++i) {  // cut functions are exactly degree 2
    const int n = 3 + i % 6;
    const auto dist = ProductDistribution::uniform(n);
    const auto cut = random_submodular(n, Family::kGraphCut, rng());
    const auto data = generate_dataset(cut, dist, 4 * basis_count(n, 2) + 50, LabelNoise::none(), rng());
    worst_train = std::max(worst_train, l1_poly_regression(data, 2, dist).train_l1);
  }

  // (b) 20 agnostic trials: 10% of labels set to 0, m = 5000, eps = 0.1.
  constexpr double kEps = 0.1;
  constexpr int kTrials = 20;
  std::vector<LearningTrialResult> results(kTrials);
  std::vector<std::string> labels(kTrials);
  std::vector<std::thread> workers;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::vector<LearningTrialConfig> configs;
  for (int t = 0; t < kTrials; ++t) {
    const int n = 5 + t % 2;  // 5..6
    const Family fam = kFamilies[t % 4];
    std::vector<double> p(static_cast<std::size_t>(n), 0.5);
    if (t % 2) {
      std::mt19937_64 prng(900 + static_cast<std::uint64_t>(t));
      std::uniform_real_distribution<double> u(0.2, 0.8);
      for (double& v : p) v = u(prng);
    }
    const ProductDistribution dist(p);
    CubeFunction raw = random_submodular(n, fam, 1000 + static_cast<std::uint64_t>(t));
    for (std::uint64_t bump = 1; all_zero(raw.table()); ++bump)
      raw = random_submodular(n, fam, 1000 + static_cast<std::uint64_t>(t) + 100 * bump);
    const int degree = std::min(degree_for_accuracy(kEps, dist.min_probability()).degree, n);
    labels[static_cast<std::size_t>(t)] = fmt("%s n=%d d=%d", family_name(fam), n, degree);
    configs.push_back({.target = scaled_to_unit_norm(raw, dist),
                       .family = fam,
                       .dist = dist,
                       .degree = degree,
                       .m_train = 5000,
                       .m_test = 5000,
                       .noise = LabelNoise::adversarial(0.1, 0.0),
                       .seed = 77 + static_cast<std::uint64_t>(t),
                       .pool_extra = 50,
                       .clamp = std::nullopt});
  }
  std::size_t next = 0;
  std::mutex mu;
  for (unsigned w = 0; w < std::min<unsigned>(hw, kTrials); ++w)
    workers.emplace_back([&] {
      for (;;) {
        std::size_t job;
        {
          std::lock_guard lock(mu);
          if (next >= configs.size()) return;
          job = next++;
        }
        results[job] = run_learning_trial(configs[job]);
      }
    });
  for (auto& w : workers) w.join();
  int successes = 0;
  double worst_gap = -std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    successes += r.test_l1 <= r.opt_pool + kEps ? 1 : 0;
    worst_gap = std::max(worst_gap, r.test_l1 - r.opt_pool);
  }

  // (c) SQ algorithm at tau = 0 reproduces the exact truncation.
  double worst_sq = 0.0;
  for (std::size_t k = 0; k < inst.size(); k += 7) {
    const auto& in = inst[k];
    const int d = std::min(3, in.f.n());
    SQOracle oracle({in.f, in.product}, 0.0, SQOracle::NoiseMode::kAdversarial, k);
    const auto h = low_degree_algorithm_sq(oracle, d, in.product);
    const auto truth = truncate(transform(in.f, in.product), d);
    for (const auto& [s, c] : truth.terms()) worst_sq = std::max(worst_sq, std::abs(h.poly.coefficient(s) - c));
  }

  return {worst_train <= 1e-6 && successes >= 18 && worst_sq <= 1e-12,
          fmt("noiseless max train L1 %.3g; agnostic %d/%d trials within opt+%.1f (max test-opt gap %.4f); "
              "SQ tau=0 max coefficient error %.3g",
              worst_train, successes, kTrials, kEps, worst_gap, worst_sq)};
}

// 7. LP solver vs vertex enumeration.
Outcome criterion_lp() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int agree = 0, optimal = 0, infeasible = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    lp::LinearProgram prog;
    const std::size_t nv = 1 + static_cast<std::size_t>(trial % 3);
    const int nc = 1 + static_cast<int>(rng() % 6);
    for (std::size_t j = 0; j < nv; ++j) prog.objective.push_back(u(rng));
    for (std::size_t j = 0; j < nv; ++j) {
      const double lo = u(rng) - 2.0;
      prog.lower.push_back(lo);
      prog.upper.push_back(lo + 0.5 + std::abs(u(rng)));
    }
    for (int i = 0; i < nc; ++i) {
      std::vector<double> a(nv);
      for (double& v : a) v = u(rng);
      prog.constraints.push_back({a, static_cast<lp::Relation>(static_cast<int>(rng() % 3)), u(rng)});
    }
    const auto expect = oracle::vertex_enumeration(prog);
    const auto got = lp::solve(prog);
    if (!expect.feasible) {
      infeasible += 1;
      agree += got.status == lp::Status::kInfeasible ? 1 : 0;
      continue;
    }
    ++optimal;
    if (got.status != lp::Status::kOptimal) continue;
    const double err = std::abs(got.objective - expect.optimum);
    worst = std::max(worst, err);
    agree += err <= 1e-9 * std::max(1.0, std::abs(expect.optimum)) ? 1 : 0;
  }
  return {agree == 200, fmt("%d/200 agree (%d optimal, %d infeasible); max optimum error %.3g", agree, optimal,
                            infeasible, worst)};
}

// 8. Private release.
Database random_database(int d, std::size_t n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(density);
  std::vector<Mask> items(n);
  for (Mask& r : items)
    for (int i = 0; i < d; ++i)
      if (bit(rng)) r |= Mask{1} << i;
  return Database(d, items);
}

Outcome criterion_release() {
  constexpr double kEpsilon = 1.0, kAlpha = 0.2;
  int accounted = 0, good = 0;
  double max_spent_err = 0.0;
  std::string betas;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto db = random_database(8, 10000, 0.05 + 0.05 * static_cast<double>(seed % 5), 800 + seed);
    Curator curator(db);
    const auto h = release(curator, kAlpha, kEpsilon, seed);
    const auto rep = verify_privacy_accounting(curator.log(), kEpsilon);
    accounted += rep.ok ? 1 : 0;
    max_spent_err = std::max(max_spent_err, std::abs(rep.spent - kEpsilon));
    const double beta = evaluate_release(h, db, kAlpha).beta;
    good += beta <= 0.1 ? 1 : 0;
    betas += (betas.empty() ? "" : ",") + fmt("%.3f", beta);
  }

  // Seal: inject a direct read.
  const auto db = random_database(8, 1000, 0.2, 1);
  Curator leaky(db);
  release(leaky, kAlpha, kEpsilon, 3);
  leaky.exact_counting_query({0b11}, "injected");
  const bool seal = !verify_privacy_accounting(leaky.log(), kEpsilon).ok;

  // eps = inf: exact truncation.
  Curator open(db);
  const auto h = release(open, kAlpha, std::numeric_limits<double>::infinity(), 4);
  const auto exact = truncate(transform(counting_query_table(db), ProductDistribution::uniform(8)), h.degree);
  double worst = 0.0;
  for (const auto& [s, c] : exact.terms()) worst = std::max(worst, std::abs(h.polynomial.coefficient(s) - c));

  return {accounted == 10 && seal && worst <= 1e-12 && good >= 6,
          fmt("accounting ok %d/10 (max |spent-eps| %.2g); injected direct read %s; eps=inf max coefficient "
              "error %.2g; beta<=0.1 in %d/10 runs (betas %s)",
              accounted, max_spent_err, seal ? "flagged" : "NOT flagged", worst, good, betas.c_str())};
}

// 9. Norm-to-mean ratio report.
Outcome criterion_norm_ratio(const std::vector<Instance>& inst) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
  int count = 0;
  bool finite = true;
  for (const auto& in : inst)
    for (const auto& dist : {in.product, ProductDistribution::uniform(in.f.n())}) {
      const auto t = in.f.table();
      const double mean = expectation(t, dist);
      if (mean == 0.0) continue;
      const double ratio = inner_product(t, t, dist) / (mean * mean);
      finite = finite && std::isfinite(ratio);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      sum += ratio;
      ++count;
    }
  return {finite && count > 0,
          fmt("||f||^2/E[f]^2 over %d (instance, distribution) pairs: min %.4f mean %.4f max %.4f (reported, no "
              "constant asserted)",
              count, lo, sum / count, hi)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_fail;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--expect-fail") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) expected_fail.insert(std::stoi(item));
    } else {
      std::fprintf(stderr, "usage: %s [--expect-fail N,M,...]\n", argv[0]);
      return 2;
    }
  }

  const auto start = std::chrono::steady_clock::now();
  const auto inst = generate_instances();
  std::set<int> failed;
  const auto report = [&](int id, const char* name, const std::function<Outcome()>& run) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) failed.insert(id);
    std::printf("[%s] criterion %d: %s -- %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
  };
  const auto info = [](const char* name, const Outcome& o) {
    std::printf("[INFO] %s: %s -- %s\n", name, o.pass ? "holds" : "violated", o.detail.c_str());
  };

  report(1, "stability bound, product distributions",
         [&] { return criterion_stability_product(inst, PminConvention::kLiteral); });
  info("criterion 1 with p_min = min_i min(p_i, 1-p_i)",
       criterion_stability_product(inst, PminConvention::kSymmetric));
  report(2, "stability bound, uniform", [&] { return criterion_stability_uniform(inst); });
  report(3, "pointwise lemmas", [&] { return criterion_pointwise(inst, PminConvention::kLiteral, true); });
  info("product pointwise lemma with p_min = min_i min(p_i, 1-p_i)",
       criterion_pointwise(inst, PminConvention::kSymmetric, false));
  report(4, "spectral identities", [&] { return criterion_spectral(inst); });
  report(5, "low-degree approximation lemma", [&] { return criterion_folklore(inst); });
  report(6, "learner", [&] { return criterion_learner(inst); });
  report(7, "LP solver vs vertex enumeration", [&] { return criterion_lp(); });
  report(8, "private release", [&] { return criterion_release(); });
  report(9, "norm-ratio report", [&] { return criterion_norm_ratio(inst); });

  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%zu/9 criteria passed in %.1fs\n", 9 - failed.size(), total);
  if (expected_fail.empty()) return failed.empty() ? 0 : 1;
  if (failed == expected_fail) {
    std::printf("failing criteria match the documented expected failures\n");
    return 0;
  }
  std::printf("failing criteria differ from the documented expected failures\n");
  return 1;
}
