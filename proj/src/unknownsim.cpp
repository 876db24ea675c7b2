#include "skewkit/unknownsim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skewkit/rng.hpp"

namespace skewkit {

std::string_view to_string(PriorKind kind) {
  switch (kind) {
    case PriorKind::BinomialSymmetric: return "symmetric";
    case PriorKind::BinomialInformative: return "informative";
    case PriorKind::NormalInformative: return "normal_informative";
    case PriorKind::BinomialSimilarWeb: return "similarweb";
    case PriorKind::SymmetricSolve: return "symmetric_solve";
    case PriorKind::SimilarWebSolve: return "similarweb_solve";
  }
  return "?";
}

std::optional<PriorKind> parse_prior(std::string_view text) {
  for (auto k : {PriorKind::BinomialSymmetric, PriorKind::BinomialInformative,
                 PriorKind::NormalInformative, PriorKind::BinomialSimilarWeb,
                 PriorKind::SymmetricSolve, PriorKind::SimilarWebSolve})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

PriorModel PriorModel::of(PriorKind kind) {
  PriorModel m;
  m.kind = kind;
  switch (kind) {
    case PriorKind::BinomialSymmetric:
    case PriorKind::SymmetricSolve: m.p_fixed = kSymmetricMaleShare; break;
    case PriorKind::BinomialSimilarWeb:
    case PriorKind::SimilarWebSolve: m.p_fixed = kSimilarWebMaleShare; break;
    case PriorKind::BinomialInformative:
    case PriorKind::NormalInformative: break;
  }
  return m;
}

namespace {

double fixed_share(const PriorModel& prior, double fallback) {
  const double p = prior.p_fixed.value_or(fallback);
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("prior p_fixed must lie in [0, 1]");
  return p;
}

double observed_share(const ObservedCounts& o) {
  if (o.known() == 0)
    throw InvalidArgument("informative prior needs at least one male or female impression");
  return static_cast<double>(o.n_male) / static_cast<double>(o.known());
}

double solve_share(const ObservedCounts& o, double target) {
  if (o.n_unknown == 0) throw InvalidArgument("solve prior needs at least one unknown impression");
  const double p = (target * static_cast<double>(o.total()) - static_cast<double>(o.n_male)) /
                   static_cast<double>(o.n_unknown);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

ResolvedPrior prior_p(const PriorModel& prior, const ObservedCounts& o) {
  switch (prior.kind) {
    case PriorKind::BinomialSymmetric: return {fixed_share(prior, kSymmetricMaleShare)};
    case PriorKind::BinomialSimilarWeb: return {fixed_share(prior, kSimilarWebMaleShare)};
    case PriorKind::BinomialInformative: return {observed_share(o)};
    case PriorKind::SymmetricSolve:
      return {solve_share(o, fixed_share(prior, kSymmetricMaleShare))};
    case PriorKind::SimilarWebSolve:
      return {solve_share(o, fixed_share(prior, kSimilarWebMaleShare))};
    case PriorKind::NormalInformative: {
      const double p = observed_share(o);
      double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(o.known()));
      if (prior.sigma_p) {
        if (!(*prior.sigma_p >= 0.0) || !std::isfinite(*prior.sigma_p))
          throw InvalidArgument("sigma_p must be a finite non-negative number");
        sigma = *prior.sigma_p;
      }
      return {p, sigma, true};
    }
  }
  throw InvalidArgument("unknown prior kind");
}

namespace {

constexpr int kMaxRejections = 1000;

double truncated_normal(Rng& rng, double mean, double sigma) {
  if (sigma == 0.0) return std::clamp(mean, 0.0, 1.0);
  double x = mean;
  for (int i = 0; i < kMaxRejections; ++i) {
    x = rng.normal(mean, sigma);
    if (x >= 0.0 && x <= 1.0) return x;
  }
  return std::clamp(x, 0.0, 1.0);
}

double one_draw(const ObservedCounts& o, const ResolvedPrior& rp, std::uint64_t seed,
                std::size_t index) {
  Rng rng(derive_stream(seed, index));
  const double p = rp.normal ? truncated_normal(rng, rp.p, rp.sigma) : rp.p;
  const std::uint64_t u_male = rng.binomial(o.n_unknown, p);
  return static_cast<double>(o.n_male + u_male) / static_cast<double>(o.total());
}

struct Prepared {
  SkewDistribution dist;
  std::optional<ResolvedPrior> resolved;  // nullopt: point mass
};

Prepared prepare(const ObservedCounts& o, const PriorModel& prior, std::size_t draws,
                 std::uint64_t seed) {
  if (draws == 0) throw InvalidArgument("draws must be >= 1");
  if (o.total() == 0) throw InvalidArgument("observed counts are all zero");
  Prepared p;
  p.dist.prior = prior;
  p.dist.observed = o;
  p.dist.seed = seed;
  if (o.n_unknown == 0) {
    p.dist.draws.assign(draws, static_cast<double>(o.n_male) / static_cast<double>(o.known()));
  } else {
    p.resolved = prior_p(prior, o);
    p.dist.draws.resize(draws);
  }
  return p;
}

}  // namespace

SkewDistribution simulate_unknown_skew(const ObservedCounts& o, const PriorModel& prior,
                                       std::size_t draws, std::uint64_t seed) {
  auto prep = prepare(o, prior, draws, seed);
  if (!prep.resolved) return std::move(prep.dist);
  const ResolvedPrior rp = *prep.resolved;
  double* out = prep.dist.draws.data();
  const auto n = static_cast<std::int64_t>(draws);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = one_draw(o, rp, seed, static_cast<std::size_t>(i));
  return std::move(prep.dist);
}

namespace reference {

SkewDistribution simulate_unknown_skew(const ObservedCounts& o, const PriorModel& prior,
                                       std::size_t draws, std::uint64_t seed) {
  auto prep = prepare(o, prior, draws, seed);
  if (!prep.resolved) return std::move(prep.dist);
  for (std::size_t i = 0; i < draws; ++i) prep.dist.draws[i] = one_draw(o, *prep.resolved, seed, i);
  return std::move(prep.dist);
}

}  // namespace reference

DistributionSummary summarize_distribution(const SkewDistribution& dist, std::size_t bins) {
  if (dist.draws.empty()) throw InvalidArgument("summarize_distribution: no draws");
  if (bins == 0) throw InvalidArgument("summarize_distribution: bins must be >= 1");

  DistributionSummary s;
  s.histogram.assign(bins, 0);
  double sum = 0.0;
  for (double x : dist.draws) {
    auto b = static_cast<std::size_t>(std::floor(x * static_cast<double>(bins)));
    s.histogram[std::min(b, bins - 1)] += 1;
    sum += x;
  }
  s.mean = sum / static_cast<double>(dist.draws.size());
  s.mode_bin = static_cast<std::size_t>(
      std::max_element(s.histogram.begin(), s.histogram.end()) - s.histogram.begin());
  s.mode = (static_cast<double>(s.mode_bin) + 0.5) / static_cast<double>(bins);

  std::vector<double> sorted = dist.draws;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  s.q01 = quantile(0.01);
  s.q50 = quantile(0.50);
  s.q99 = quantile(0.99);
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

}  // namespace skewkit
