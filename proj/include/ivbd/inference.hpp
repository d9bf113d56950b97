#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "ivbd/breakdown.hpp"
#include "ivbd/estimators.hpp"
#include "ivbd/types.hpp"

namespace ivbd {

struct BootstrapConfig {
  int replications = 500;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  /// Replicates run across this many workers; each replicate derives its RNG
  /// stream from (seed, index), so results do not depend on scheduling.
  int threads = 1;

  void validate() const;
};

/// n records drawn i.i.d. with replacement from `data`.
std::vector<ObservationRecord> resample(std::span<const ObservationRecord> data,
                                        std::mt19937_64& rng);

/// B evaluations of every statistic on the same stream of resampled tables,
/// one sorted vector per statistic. Replicate b uses an RNG stream seeded
/// from (config.seed, b), so the draw sequence is independent of how many
/// statistics are evaluated and of any scheduling.
///
/// Strata emptied by resampling are dropped with q renormalized (the
/// breakdown statistics stay total); replicates where that drops every cell
/// propagate the error tagged with the replicate index.
std::vector<std::vector<double>> bootstrap_distributions(
    std::span<const ObservationRecord> data,
    std::span<const std::function<double(const CellTable&)>> statistics,
    const BootstrapConfig& config);

/// Single-statistic convenience wrapper; result sorted ascending.
std::vector<double> bootstrap_distribution(
    std::span<const ObservationRecord> data,
    const std::function<double(const CellTable&)>& statistic,
    const BootstrapConfig& config);

/// Lower endpoint of the one-sided interval [L, 1]: the alpha-quantile of the
/// bootstrap draws by inverse empirical CDF with lower interpolation.
double one_sided_ci_breakdown(std::span<const double> sorted_draws, double alpha);

/// Sup-t lower band for a frontier: per grid point, the bootstrap standard
/// deviation sigma(j) scales a common multiplier k, chosen as the smallest
/// value such that at least (1 - alpha) * B draws lie above
/// estimate - k * sigma at every grid point. Grid points with sigma = 0 fall
/// back to the pointwise maximum downward deviation. Values clipped to [0,1].
std::vector<double> uniform_band_frontier(
    std::span<const FrontierCurve> curve_draws,
    const FrontierCurve& point_estimate, double alpha);

/// Bootstrap draws of a whole curve (shared grid), for the frontier band.
std::vector<FrontierCurve> bootstrap_curves(
    std::span<const ObservationRecord> data,
    const std::function<FrontierCurve(const CellTable&)>& curve_statistic,
    const BootstrapConfig& config);

}  // namespace ivbd
