// Command-line front end: submodularity checks, transforms, stability and
// low-degree verification sweeps, learning experiments, and private release.
//
// Exit codes: 0 success, 1 property violation, 2 usage or input error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "submodstab/cube_fn.hpp"
#include "submodstab/dist_fourier.hpp"
#include "submodstab/dp_release.hpp"
#include "submodstab/io.hpp"
#include "submodstab/learner.hpp"
#include "submodstab/lowdeg_approx.hpp"
#include "submodstab/noise_stability.hpp"

#ifndef SUBMODSTAB_VERSION
#define SUBMODSTAB_VERSION "dev"
#endif

using namespace submodstab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Output sink: a file when --out is given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw UsageError("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

/// "# key=value ..." config echo shared by every CSV.
void echo(std::ostream& out, const std::string& command,
          const std::vector<std::pair<std::string, std::string>>& config) {
  out << "# submodstab " << SUBMODSTAB_VERSION << ' ' << command;
  for (const auto& [k, v] : config) out << ' ' << k << '=' << v;
  out << "\n# slack_tolerance=" << fmt(kSlackTolerance) << " submodular_tolerance=" << fmt(kSubmodularTolerance)
      << '\n';
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      grid.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("bad rho value '" + item + "'");
    }
  }
  if (grid.empty()) throw UsageError("rho grid is empty");
  return grid;
}

std::string grid_string(const std::vector<double>& grid) {
  std::string s;
  for (double r : grid) s += (s.empty() ? "" : ";") + fmt(r);
  return s;
}

std::string default_grid_text() {
  std::string s;
  for (double r : default_rho_grid()) s += (s.empty() ? "" : ",") + fmt(r);
  return s;
}

PminConvention parse_pmin(const std::string& s) {
  if (s == "literal") return PminConvention::kLiteral;
  if (s == "symmetric") return PminConvention::kSymmetric;
  throw UsageError("--pmin must be 'literal' or 'symmetric'");
}

ProductDistribution load_distribution(const std::string& path, int n) {
  if (path.empty()) return ProductDistribution::uniform(n);
  auto dist = io::distribution_from_json(io::read_json_file(path));
  if (dist.n() != n) throw io::FormatError("distribution has " + std::to_string(dist.n()) + " coordinates, function has " + std::to_string(n));
  return dist;
}

LabelNoise parse_noise(const std::string& spec) {
  if (spec == "none") return LabelNoise::none();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    double value = 0.0;
    try {
      value = std::stod(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("bad noise value in '" + spec + "'");
    }
    if (kind == "additive") return LabelNoise::additive(value);
    if (kind == "adversarial") return LabelNoise::adversarial(value, 0.0);
  }
  throw UsageError("--noise must be none, additive:<magnitude> or adversarial:<fraction>");
}

// ---- check ----

struct CheckArgs {
  std::string function;
};

int run_check(const CheckArgs& a) {
  const auto f = io::function_from_json(io::read_json_file(a.function));
  const auto sub = is_submodular_marginal(f);
  const auto nonneg = is_nonnegative(f);
  std::cout << "n=" << f.n() << '\n';
  std::cout << "nonnegative: " << (nonneg.holds ? "yes" : "no");
  if (!nonneg.holds) std::cout << " (f(" << io::subset_string(*nonneg.witness) << ") = " << fmt(f(*nonneg.witness)) << ')';
  std::cout << "\nsubmodular: " << (sub.holds ? "yes" : "no");
  if (!sub.holds) {
    const auto [s, t] = *sub.witness;
    std::cout << " (S=" << io::subset_string(s) << " T=" << io::subset_string(t)
              << ": f(S|T)+f(S&T)-f(S)-f(T) = " << fmt(sub.violation) << ')';
  }
  std::cout << '\n';
  return nonneg.holds && sub.holds ? kExitOk : kExitViolation;
}

// ---- fourier ----

struct FourierArgs {
  std::string function, dist, out;
};

int run_fourier(const FourierArgs& a) {
  const auto f = io::function_from_json(io::read_json_file(a.function));
  const auto dist = load_distribution(a.dist, f.n());
  Output out(a.out);
  echo(out.stream(), "fourier", {{"function", a.function}, {"dist", a.dist.empty() ? "uniform" : a.dist}});
  io::write_expansion_csv(out.stream(), transform(f, dist));
  return kExitOk;
}

// ---- stability ----

struct StabilityArgs {
  std::string function, dist, out, pmin = "literal", grid = default_grid_text();
};

int run_stability(const StabilityArgs& a) {
  const auto grid = parse_grid(a.grid);
  const auto conv = parse_pmin(a.pmin);
  const auto f = io::function_from_json(io::read_json_file(a.function));
  const auto dist = load_distribution(a.dist, f.n());
  for (double r : grid)
    if (!(r >= 0.0 && r <= 1.0)) throw UsageError("rho must lie in [0,1]");
  const auto e = transform(f, dist);
  Output out(a.out);
  echo(out.stream(), "stability",
       {{"function", a.function}, {"dist", a.dist.empty() ? "uniform" : a.dist}, {"pmin", a.pmin}, {"rho_grid", grid_string(grid)}});
  out.stream() << "rho,stab,bound,slack,norm2sq,pmin\n";
  bool ok = true;
  for (double r : grid) {
    const auto rep = check_stability_bound(e, r, conv);
    ok = ok && rep.holds;
    out.stream() << fmt(r) << ',' << fmt(rep.stab) << ',' << fmt(rep.bound) << ',' << fmt(rep.slack) << ','
                 << fmt(rep.norm2sq) << ',' << fmt(rep.p_min) << '\n';
  }
  return ok ? kExitOk : kExitViolation;
}

// ---- verify ----

struct VerifyArgs {
  std::string suite, family = "all", dist = "uniform", out, pmin = "literal";
  std::optional<std::string> grid;
  int instances = 100;
  int n_min = 2;
  int n_max = 8;
  std::uint64_t seed = 1;
  bool negative_control = false;
};

int run_verify(const VerifyArgs& a) {
  if (a.suite != "pointwise" && a.suite != "stability" && a.suite != "lowdeg")
    throw UsageError("--suite must be pointwise, stability or lowdeg");
  const auto grid = parse_grid(a.grid ? *a.grid : a.suite == "lowdeg" ? std::string("0.5,0.75,0.9") : default_grid_text());
  for (double r : grid)
    if (!(r >= 0.0 && r <= 1.0) || (a.suite == "lowdeg" && r >= 1.0))
      throw UsageError("rho out of range for suite " + a.suite);
  const auto conv = parse_pmin(a.pmin);
  if (a.dist != "uniform" && a.dist != "random") throw UsageError("--dist must be uniform or random");
  if (a.n_min < 1 || a.n_max < a.n_min || a.n_max > 16) throw UsageError("need 1 <= n-min <= n-max <= 16");
  if (a.instances < 0) throw UsageError("--instances must be >= 0");
  std::vector<Family> families;
  if (a.family == "all") {
    families = {Family::kGraphCut, Family::kCoverage, Family::kBudgetAdditive, Family::kUniformMatroidRank};
  } else {
    try {
      families = {parse_family(a.family)};
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  Output out(a.out);
  echo(out.stream(), "verify",
       {{"suite", a.suite}, {"family", a.family}, {"dist", a.dist}, {"instances", std::to_string(a.instances)},
        {"n_min", std::to_string(a.n_min)}, {"n_max", std::to_string(a.n_max)}, {"seed", std::to_string(a.seed)},
        {"pmin", a.pmin}, {"rho_grid", grid_string(grid)}, {"negative_control", a.negative_control ? "1" : "0"}});
  out.stream() << "instance,family,n,rho,slack,holds\n";

  std::mt19937_64 rng(a.seed);
  std::uniform_real_distribution<double> unit_p(0.01, 0.99);
  bool ok = true;
  const auto run_one = [&](int index, const std::string& name, const CubeFunction& f, const ProductDistribution& dist) {
    const auto table = f.table();
    const auto e = transform(table, dist);
    for (double r : grid) {
      double slack = 0.0;
      bool holds = true;
      if (a.suite == "pointwise") {
        const auto rep = dist.is_uniform() ? check_pointwise_uniform(f, r) : check_pointwise_product(table, e, r, conv);
        slack = rep.min_slack;
        holds = rep.holds;
      } else if (a.suite == "stability") {
        const auto rep = check_stability_bound(e, r, conv);
        slack = rep.slack;
        holds = rep.holds;
      } else {
        const auto rep = check_folklore_lemma(f, r, dist);
        slack = rep.slack;
        holds = rep.holds;
      }
      ok = ok && holds;
      out.stream() << index << ',' << name << ',' << f.n() << ',' << fmt(r) << ',' << fmt(slack) << ','
                   << (holds ? 1 : 0) << '\n';
    }
  };

  for (int i = 0; i < a.instances; ++i) {
    const int n = a.n_min + i % (a.n_max - a.n_min + 1);
    const Family fam = families[static_cast<std::size_t>(i) % families.size()];
    std::vector<double> p(static_cast<std::size_t>(n), 0.5);
    if (a.dist == "random")
      for (double& v : p) v = unit_p(rng);
    const std::uint64_t fseed = rng();
    const auto f = random_submodular(n, fam, fseed);
    if (a.suite == "lowdeg" && std::all_of(f.table().begin(), f.table().end(), [](double v) { return v == 0.0; }))
      continue;  // nothing to normalise
    run_one(i, family_name(fam), f, ProductDistribution(p));
  }
  if (a.negative_control) {
    // f(S) = |S|^2 on n = 2: supermodular.
    const auto sq = CubeFunction::dense(2, {0, 1, 1, 4});
    run_one(-1, "supermodular", sq, a.dist == "random" ? ProductDistribution({unit_p(rng), unit_p(rng)})
                                                       : ProductDistribution::uniform(2));
  }
  return ok ? kExitOk : kExitViolation;
}

// ---- lowdeg ----

struct LowdegArgs {
  std::string function, dist, out, grid = "0.5,0.75,0.9";
};

int run_lowdeg(const LowdegArgs& a) {
  const auto grid = parse_grid(a.grid);
  for (double r : grid)
    if (!(r >= 0.0 && r < 1.0)) throw UsageError("rho must lie in [0,1)");
  const auto f = io::function_from_json(io::read_json_file(a.function));
  const auto dist = load_distribution(a.dist, f.n());
  Output out(a.out);
  echo(out.stream(), "lowdeg",
       {{"function", a.function}, {"dist", a.dist.empty() ? "uniform" : a.dist}, {"rho_grid", grid_string(grid)},
        {"error_constant", fmt(kLowDegreeErrorConstant)}});
  out.stream() << "rho,gamma,d,error,bound,slack\n";
  bool ok = true;
  for (double r : grid) {
    const auto rep = check_folklore_lemma(f, r, dist);
    ok = ok && rep.holds;
    out.stream() << fmt(r) << ',' << fmt(rep.gamma) << ',' << rep.degree << ',' << fmt(rep.error) << ','
                 << fmt(rep.bound) << ',' << fmt(rep.slack) << '\n';
  }
  return ok ? kExitOk : kExitViolation;
}

// ---- learn ----

struct LearnArgs {
  std::string function, dist, out, noise = "none", family;
  std::optional<int> degree;
  std::optional<double> eps;
  std::size_t m = 1000;
  std::size_t m_test = 1000;
  int trials = 1;
  int pool_extra = 50;
  std::uint64_t seed = 1;
  bool clamp = false;
  bool unit_norm = false;
};

int run_learn(const LearnArgs& a) {
  if (a.degree.has_value() == a.eps.has_value()) throw UsageError("give exactly one of --degree and --eps");
  if (a.trials < 1) throw UsageError("--trials must be >= 1");
  const auto noise = parse_noise(a.noise);
  const auto f0 = io::function_from_json(io::read_json_file(a.function));
  const auto dist = load_distribution(a.dist, f0.n());
  const CubeFunction target = a.unit_norm ? scaled_to_unit_norm(f0, dist) : f0;
  Family family = Family::kCoverage;
  if (!a.family.empty()) {
    try {
      family = parse_family(a.family);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  int degree = 0;
  double eps = 0.0;
  if (a.degree) {
    degree = *a.degree;
  } else {
    eps = *a.eps;
    degree = std::min(degree_for_accuracy(eps, dist.min_probability()).degree, target.n());
  }
  std::optional<std::pair<double, double>> clamp;
  if (a.clamp) {
    double hi = 0.0;
    for (double v : target.table()) hi = std::max(hi, v);
    if (noise.kind == LabelNoise::Kind::kAdditiveBounded) hi += noise.magnitude;
    clamp = std::pair{0.0, hi};
  }

  Output out(a.out);
  echo(out.stream(), "learn",
       {{"function", a.function}, {"dist", a.dist.empty() ? "uniform" : a.dist}, {"noise", a.noise},
        {"degree", std::to_string(degree)}, {"eps", fmt(eps)}, {"m", std::to_string(a.m)},
        {"m_test", std::to_string(a.m_test)}, {"trials", std::to_string(a.trials)},
        {"pool_family", family_name(family)}, {"pool_extra", std::to_string(a.pool_extra)},
        {"seed", std::to_string(a.seed)}, {"clamp", a.clamp ? "1" : "0"}, {"unit_norm", a.unit_norm ? "1" : "0"}});
  out.stream() << "trial,seed,train_l1,test_l1,opt_pool,eps,degree,m\n";
  std::mt19937_64 seeds(a.seed);
  for (int t = 0; t < a.trials; ++t) {
    const std::uint64_t trial_seed = seeds();
    const auto r = run_learning_trial({.target = target,
                                       .family = family,
                                       .dist = dist,
                                       .degree = degree,
                                       .m_train = a.m,
                                       .m_test = a.m_test,
                                       .noise = noise,
                                       .seed = trial_seed,
                                       .pool_extra = a.pool_extra,
                                       .clamp = clamp});
    out.stream() << t << ',' << trial_seed << ',' << fmt(r.train_l1) << ',' << fmt(r.test_l1) << ','
                 << fmt(r.opt_pool) << ',' << fmt(eps) << ',' << r.degree << ',' << r.m << '\n';
  }
  return kExitOk;
}

// ---- release ----

struct ReleaseArgs {
  std::string db, out, coefficients;
  double eps = 1.0;
  double alpha = 0.2;
  std::uint64_t seed = 1;
};

int run_release(const ReleaseArgs& a) {
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw UsageError("--alpha must lie in (0,1)");
  if (!(a.eps > 0.0)) throw UsageError("--eps must be > 0");
  const auto db = io::database_from_json(io::read_json_file(a.db));
  Curator curator(db);
  const auto h = release(curator, a.alpha, a.eps, a.seed);
  const auto privacy = verify_privacy_accounting(curator.log(), a.eps);
  const auto eval = evaluate_release(h, db, a.alpha, a.seed);

  const std::vector<std::pair<std::string, std::string>> config{
      {"db", a.db}, {"d", std::to_string(db.dimension())}, {"n_db", std::to_string(db.size())},
      {"eps", fmt(a.eps)}, {"alpha", fmt(a.alpha)}, {"seed", std::to_string(a.seed)},
      {"noise_scale", fmt(h.noise_scale)}, {"size_condition_met", h.size_condition_met ? "1" : "0"},
      {"beta_sampled", eval.sampled ? "1" : "0"}};
  if (!a.coefficients.empty()) {
    Output coef(a.coefficients);
    echo(coef.stream(), "release", config);
    io::write_polynomial_csv(coef.stream(), h.polynomial);
  }
  Output out(a.out);
  echo(out.stream(), "release", config);
  out.stream() << "alpha,beta,eps_spent,degree,queries\n"
               << fmt(a.alpha) << ',' << fmt(eval.beta) << ',' << fmt(privacy.spent) << ',' << h.degree << ','
               << h.queries << '\n';
  if (!privacy.ok) {
    std::cerr << "privacy accounting failed: " << privacy.message << '\n';
    return kExitViolation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise stability, low-degree approximation and learning of submodular functions"};
  app.set_version_flag("--version", SUBMODSTAB_VERSION);
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Check non-negativity and submodularity of a function spec");
  c->add_option("function", check.function, "Function spec (JSON)")->required();

  FourierArgs fourier;
  auto* f = app.add_subcommand("fourier", "Write the Fourier expansion under a product distribution");
  f->add_option("function", fourier.function, "Function spec (JSON)")->required();
  f->add_option("--dist", fourier.dist, "Distribution spec (JSON); uniform if omitted");
  f->add_option("-o,--out", fourier.out, "Output CSV (default stdout)");

  StabilityArgs stab;
  auto* s = app.add_subcommand("stability", "Noise stability and its lower bound over a rho grid");
  s->add_option("function", stab.function, "Function spec (JSON)")->required();
  s->add_option("--dist", stab.dist, "Distribution spec (JSON); uniform if omitted");
  s->add_option("--rho-grid", stab.grid, "Comma-separated rho values")->default_str("0,0.05,...,1");
  s->add_option("--pmin", stab.pmin, "literal: min_i p_i; symmetric: min_i min(p_i, 1-p_i)")->capture_default_str();
  s->add_option("-o,--out", stab.out, "Output CSV (default stdout)");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run a checker over generated instances");
  v->add_option("--suite", verify.suite, "pointwise | stability | lowdeg")->required();
  v->add_option("--family", verify.family, "cut | coverage | budget_additive | uniform_matroid | all")->capture_default_str();
  v->add_option("--dist", verify.dist, "uniform | random")->capture_default_str();
  v->add_option("--instances", verify.instances)->capture_default_str();
  v->add_option("--n-min", verify.n_min)->capture_default_str();
  v->add_option("--n-max", verify.n_max)->capture_default_str();
  v->add_option("--rho-grid", verify.grid, "Comma-separated rho values (suite default if omitted)");
  v->add_option("--pmin", verify.pmin, "literal | symmetric")->capture_default_str();
  v->add_option("--seed", verify.seed)->capture_default_str();
  v->add_flag("--negative-control", verify.negative_control, "Append the supermodular f(S)=|S|^2 instance");
  v->add_option("-o,--out", verify.out, "Output CSV (default stdout)");

  LowdegArgs lowdeg;
  auto* l = app.add_subcommand("lowdeg", "Check the low-degree approximation bound over a rho grid");
  l->add_option("function", lowdeg.function, "Function spec (JSON)")->required();
  l->add_option("--dist", lowdeg.dist, "Distribution spec (JSON); uniform if omitted");
  l->add_option("--rho-grid", lowdeg.grid, "Comma-separated rho values in [0,1)")->capture_default_str();
  l->add_option("-o,--out", lowdeg.out, "Output CSV (default stdout)");

  LearnArgs learn;
  auto* le = app.add_subcommand("learn", "L1 polynomial regression trials");
  le->add_option("function", learn.function, "Target function spec (JSON)")->required();
  le->add_option("--dist", learn.dist, "Distribution spec (JSON); uniform if omitted");
  le->add_option("--degree", learn.degree, "Polynomial degree");
  le->add_option("--eps", learn.eps, "Target accuracy; derives the degree");
  le->add_option("--m", learn.m, "Training samples")->capture_default_str();
  le->add_option("--m-test", learn.m_test, "Held-out samples")->capture_default_str();
  le->add_option("--noise", learn.noise, "none | additive:<magnitude> | adversarial:<fraction>")->capture_default_str();
  le->add_option("--trials", learn.trials)->capture_default_str();
  le->add_option("--pool-family", learn.family, "Family for the opt concept pool (default coverage)");
  le->add_option("--pool-extra", learn.pool_extra, "Random pool members besides the target")->capture_default_str();
  le->add_option("--seed", learn.seed)->capture_default_str();
  le->add_flag("--clamp", learn.clamp, "Clamp hypothesis output to [0, max label]");
  le->add_flag("--unit-norm", learn.unit_norm, "Scale the target to unit L2 norm first");
  le->add_option("-o,--out", learn.out, "Output CSV (default stdout)");

  ReleaseArgs rel;
  auto* r = app.add_subcommand("release", "Private release of disjunction counting queries");
  r->add_option("database", rel.db, "Database (JSON)")->required();
  r->add_option("--eps", rel.eps)->capture_default_str();
  r->add_option("--alpha", rel.alpha)->capture_default_str();
  r->add_option("--seed", rel.seed)->capture_default_str();
  r->add_option("--coefficients", rel.coefficients, "Write the released coefficients (CSV) here");
  r->add_option("-o,--out", rel.out, "Evaluation report CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c) return run_check(check);
    if (*f) return run_fourier(fourier);
    if (*s) return run_stability(stab);
    if (*v) return run_verify(verify);
    if (*l) return run_lowdeg(lowdeg);
    if (*le) return run_learn(learn);
    if (*r) return run_release(rel);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const io::FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
