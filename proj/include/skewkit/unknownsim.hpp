#pragma once

// Monte Carlo over the hidden gender of unknown-labelled impressions.
//
// Each draw samples U_M, the number of male users among N_U unknown
// impressions, and reports the completed skew (N_M + U_M) / N_Total.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "skewkit/core.hpp"

namespace skewkit {

struct ObservedCounts {
  std::uint64_t n_male = 0;
  std::uint64_t n_female = 0;
  std::uint64_t n_unknown = 0;

  std::uint64_t known() const { return n_male + n_female; }
  std::uint64_t total() const { return n_male + n_female + n_unknown; }
};

inline constexpr double kSymmetricMaleShare = 0.5;
inline constexpr double kSimilarWebMaleShare = 0.58;

enum class PriorKind : std::uint8_t {
  BinomialSymmetric,
  BinomialInformative,
  NormalInformative,
  BinomialSimilarWeb,
  SymmetricSolve,
  SimilarWebSolve,
};

std::string_view to_string(PriorKind kind);
std::optional<PriorKind> parse_prior(std::string_view text);

struct PriorModel {
  PriorKind kind = PriorKind::BinomialSymmetric;
  /// Fixed male share (Symmetric, SimilarWeb) or the solve target.
  std::optional<double> p_fixed;
  /// NormalInformative only. Defaults to the standard error of N_M/(N_M+N_F).
  std::optional<double> sigma_p;

  /// Default parameters for a prior kind.
  static PriorModel of(PriorKind kind);
};

/// A prior resolved against observed counts: U_M ~ Binomial(p, N_U), where
/// p is fixed or, for the normal prior, drawn per draw from a Normal(p, sigma)
/// truncated to [0, 1].
struct ResolvedPrior {
  double p = 0.5;
  double sigma = 0.0;
  bool normal = false;
};

/// Throws InvalidArgument when the prior's preconditions fail.
ResolvedPrior prior_p(const PriorModel& prior, const ObservedCounts& observed);

struct SkewDistribution {
  std::vector<double> draws;
  PriorModel prior;
  ObservedCounts observed;
  std::uint64_t seed = 0;
};

/// Draw i uses the stream derive_stream(seed, i), so the result does not
/// depend on thread count. With N_U = 0 every prior collapses to the
/// observed known-only skew and prior preconditions are not checked.
SkewDistribution simulate_unknown_skew(const ObservedCounts& observed, const PriorModel& prior,
                                       std::size_t draws, std::uint64_t seed);

namespace reference {
/// Single-threaded version of simulate_unknown_skew. Kept for tests and
/// benchmarks; output must match the parallel kernel byte for byte.
SkewDistribution simulate_unknown_skew(const ObservedCounts& observed, const PriorModel& prior,
                                       std::size_t draws, std::uint64_t seed);
}  // namespace reference

struct DistributionSummary {
  std::vector<std::uint64_t> histogram;  // equal-width bins over [0, 1]
  std::size_t mode_bin = 0;
  double mode = 0.0;  // centre of mode_bin
  double mean = 0.0;
  double q01 = 0.0;
  double q50 = 0.0;
  double q99 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Quantiles interpolate linearly between order statistics. A draw of
/// exactly 1.0 lands in the last bin.
DistributionSummary summarize_distribution(const SkewDistribution& dist, std::size_t bins);

}  // namespace skewkit
