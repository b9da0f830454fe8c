#include "submodstab/dp_release.hpp"

#include <algorithm>
#include <stdexcept>

#include "submodstab/dist_fourier.hpp"

namespace submodstab {

Database::Database(int d, std::vector<Mask> items) : d_(d), items_(std::move(items)) {
  if (d_ < 1 || d_ > kMaxDenseN) throw std::invalid_argument("attribute count must be in [1, 25]");
  if (items_.empty()) throw std::invalid_argument("database must hold at least one item");
  for (Mask r : items_)
    if ((r >> d_) != 0) throw std::invalid_argument("item has attributes beyond d");
}

double counting_query(const Database& db, DisjunctionQuery c) {
  std::size_t hits = 0;
  for (Mask r : db.items()) hits += c(r) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(db.size());
}

std::vector<double> counting_query_table(const Database& db) {
  // Count items per attribute pattern, then CQ(T) = 1 - (#items disjoint from T)/n.
  // Items disjoint from T are those whose pattern lies in the complement of T:
  // a subset-sum (zeta transform) over patterns.
  const int d = db.dimension();
  const std::size_t size = std::size_t{1} << d;
  std::vector<double> within(size, 0.0);
  for (Mask r : db.items()) within[r] += 1.0;
  for (int i = 0; i < d; ++i)
    for (std::size_t k = 0; k < size; ++k)
      if (k & (std::size_t{1} << i)) within[k] += within[k ^ (std::size_t{1} << i)];
  const double n = static_cast<double>(db.size());
  const std::size_t all = size - 1;
  std::vector<double> cq(size);
  for (std::size_t t = 0; t < size; ++t) cq[t] = 1.0 - within[all & ~t] / n;
  return cq;
}

double item_coefficient(Mask item, Mask s) {
  const double tail = std::ldexp(1.0, -popcount(item));
  if (s == 0) return 1.0 - tail;
  if ((s & item) != s) return 0.0;
  return (popcount(s) % 2 == 0) ? -tail : tail;
}

double sample_laplace(double scale, std::mt19937_64& rng) {
  if (scale == 0.0) return 0.0;
  // u uniform on (-1/2, 1/2), excluding the endpoints.
  double u;
  do {
    u = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  } while (u == -0.5);
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -scale * sign * std::log(1.0 - 2.0 * std::abs(u));
}

Curator::Curator(Database db) : db_(std::move(db)) {}

double Curator::laplace_sq(const std::function<double(Mask)>& g, double bound, double scale,
                           std::mt19937_64& rng, std::string label) {
  if (!(bound > 0.0 && bound <= 1.0)) throw std::invalid_argument("query bound must lie in (0,1]");
  if (!(scale >= 0.0)) throw std::invalid_argument("Laplace scale must be >= 0");
  double total = 0.0;
  for (Mask r : db_.items()) total += std::clamp(g(r), -bound, bound);
  const double n = static_cast<double>(db_.size());
  const double noisy = total / n + sample_laplace(scale, rng);
  std::lock_guard lock(mutex_);
  log_.push_back({AccessRecord::Kind::kLaplace, bound / n, scale, std::move(label)});
  return noisy;
}

double Curator::exact_counting_query(DisjunctionQuery c, std::string label) {
  const double v = counting_query(db_, c);
  std::lock_guard lock(mutex_);
  log_.push_back({AccessRecord::Kind::kDirect, 0.0, 0.0, std::move(label)});
  return v;
}

std::vector<AccessRecord> Curator::log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

int release_degree(double alpha, int d) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  return std::min(d, ceil_degree(std::log2(1.0 / alpha)) + 1);
}

ReleaseStructure release(Curator& curator, double alpha, double eps, std::uint64_t seed) {
  const int d = curator.dimension();
  if (d > 16) throw std::invalid_argument("release is limited to d <= 16 attributes");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  const int degree = release_degree(alpha, d);
  const std::vector<Mask> masks = low_degree_masks(d, degree);
  const auto bound_of = [](Mask s) { return s == 0 ? 1.0 : std::ldexp(1.0, -popcount(s)); };
  double total_bound = 0.0;
  for (Mask s : masks) total_bound += bound_of(s);
  const double n = static_cast<double>(curator.size());
  const double scale = std::isinf(eps) ? 0.0 : total_bound / (eps * n);

  std::mt19937_64 rng(seed);
  std::vector<TruncatedPolynomial::Term> terms;
  terms.reserve(masks.size());
  for (Mask s : masks) {
    const double c = curator.laplace_sq([s](Mask r) { return item_coefficient(r, s); },
                                        bound_of(s), scale, rng, "coef:" + std::to_string(s));
    terms.emplace_back(s, c);
  }

  const double q = static_cast<double>(masks.size());
  const bool size_ok = std::isinf(eps) ||
                       n >= q * (std::log(q) + std::log(1.0 / kReleaseDelta)) / (eps * alpha);
  return ReleaseStructure{TruncatedPolynomial(d, degree, ProductDistribution::uniform(d), std::move(terms)),
                          eps, alpha, degree, masks.size(), scale, size_ok};
}

PrivacyReport verify_privacy_accounting(const std::vector<AccessRecord>& log, double eps) {
  PrivacyReport report;
  for (const auto& rec : log) {
    if (rec.kind == AccessRecord::Kind::kDirect) {
      ++report.direct_reads;
      continue;
    }
    ++report.laplace_queries;
    if (rec.sensitivity > 0.0)
      report.spent += rec.scale == 0.0 ? std::numeric_limits<double>::infinity()
                                       : rec.sensitivity / rec.scale;
  }
  if (report.direct_reads > 0) {
    report.ok = false;
    report.message = std::to_string(report.direct_reads) + " database read(s) outside the Laplace mechanism";
  } else if (!(report.spent <= eps * (1.0 + 1e-12))) {
    report.ok = false;
    report.message = "spent budget " + std::to_string(report.spent) + " exceeds eps " + std::to_string(eps);
  }
  return report;
}

ReleaseEvaluation evaluate_release(const ReleaseStructure& h, const Database& db, double alpha,
                                   std::uint64_t seed) {
  const int d = db.dimension();
  if (h.polynomial.n() != d) throw std::invalid_argument("release and database dimensions differ");
  ReleaseEvaluation ev;
  std::size_t bad = 0;
  if (d <= 16) {
    const std::vector<double> cq = counting_query_table(db);
    const std::vector<double> answers = h.polynomial.table();
    for (std::size_t t = 0; t < cq.size(); ++t) {
      const double err = std::abs(cq[t] - answers[t]);
      ev.max_error = std::max(ev.max_error, err);
      if (err > alpha) ++bad;
    }
    ev.beta = static_cast<double>(bad) / static_cast<double>(cq.size());
    return ev;
  }
  ev.sampled = true;
  std::mt19937_64 rng(seed);
  constexpr std::size_t kSamples = 1 << 16;
  for (std::size_t i = 0; i < kSamples; ++i) {
    const DisjunctionQuery c{static_cast<Mask>(rng()) & full_mask(d)};
    const double err = std::abs(counting_query(db, c) - h.answer(c));
    ev.max_error = std::max(ev.max_error, err);
    if (err > alpha) ++bad;
  }
  ev.beta = static_cast<double>(bad) / static_cast<double>(kSamples);
  return ev;
}

}  // namespace submodstab
