#include "ivbd/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel_for.hpp"

namespace ivbd {

namespace {

std::mt19937_64 replicate_rng(std::uint64_t seed, int replicate) {
  std::seed_seq seq{static_cast<std::uint64_t>(seed),
                    static_cast<std::uint64_t>(replicate)};
  return std::mt19937_64(seq);
}

CellTable resampled_table(std::span<const ObservationRecord> data,
                          std::uint64_t seed, int replicate) {
  std::mt19937_64 rng = replicate_rng(seed, replicate);
  const std::vector<ObservationRecord> draw = resample(data, rng);
  // Drop strata that emptied out under resampling and renormalize q.
  return estimate_cells(draw, EstimateOptions{.min_stratum_count = 1});
}

}  // namespace

void BootstrapConfig::validate() const {
  if (replications < 2) throw InvalidParams("bootstrap needs at least 2 replications");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParams("alpha must lie in (0,1)");
  if (threads < 1) throw InvalidParams("threads must be >= 1");
}

std::vector<ObservationRecord> resample(std::span<const ObservationRecord> data,
                                        std::mt19937_64& rng) {
  if (data.empty()) throw EmptyData("cannot resample an empty dataset");
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  std::vector<ObservationRecord> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out.push_back(data[pick(rng)]);
  return out;
}

std::vector<std::vector<double>> bootstrap_distributions(
    std::span<const ObservationRecord> data,
    std::span<const std::function<double(const CellTable&)>> statistics,
    const BootstrapConfig& config) {
  config.validate();
  if (statistics.empty()) throw InvalidParams("no statistics to bootstrap");

  std::vector<std::vector<double>> draws(
      statistics.size(), std::vector<double>(config.replications));

  detail::parallel_for(config.replications, config.threads, [&](int b) {
    try {
      const CellTable table = resampled_table(data, config.seed, b);
      for (std::size_t s = 0; s < statistics.size(); ++s) {
        draws[s][b] = statistics[s](table);
      }
    } catch (const Error& e) {
      throw Error("bootstrap replicate " + std::to_string(b) + ": " + e.what());
    }
  });
  for (auto& d : draws) std::sort(d.begin(), d.end());
  return draws;
}

std::vector<double> bootstrap_distribution(
    std::span<const ObservationRecord> data,
    const std::function<double(const CellTable&)>& statistic,
    const BootstrapConfig& config) {
  const std::function<double(const CellTable&)> stats[] = {statistic};
  return bootstrap_distributions(data, stats, config)[0];
}

double one_sided_ci_breakdown(std::span<const double> sorted_draws, double alpha) {
  if (sorted_draws.empty()) throw EmptyData("no bootstrap draws");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParams("alpha must lie in (0,1)");
  const auto b = static_cast<double>(sorted_draws.size());
  const auto idx = static_cast<std::ptrdiff_t>(std::ceil(alpha * b)) - 1;
  return sorted_draws[static_cast<std::size_t>(std::max<std::ptrdiff_t>(idx, 0))];
}

std::vector<double> uniform_band_frontier(
    std::span<const FrontierCurve> curve_draws,
    const FrontierCurve& point_estimate, double alpha) {
  if (curve_draws.empty()) throw EmptyData("no bootstrap curves");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParams("alpha must lie in (0,1)");
  const std::size_t g = point_estimate.grid.size();
  for (const FrontierCurve& c : curve_draws) {
    if (c.grid != point_estimate.grid) {
      throw InvalidParams("bootstrap curves must share the estimate's grid");
    }
    if (c.values.size() != g) {
      throw InvalidParams("curve values and grid sizes differ");
    }
  }

  const auto b = curve_draws.size();
  std::vector<double> sigma(g, 0.0), max_down(g, 0.0);
  for (std::size_t j = 0; j < g; ++j) {
    double mean = 0.0;
    for (const FrontierCurve& c : curve_draws) mean += c.values[j];
    mean /= static_cast<double>(b);
    double var = 0.0;
    for (const FrontierCurve& c : curve_draws) {
      const double dev = c.values[j] - mean;
      var += dev * dev;
      max_down[j] = std::max(max_down[j], point_estimate.values[j] - c.values[j]);
    }
    sigma[j] = std::sqrt(var / static_cast<double>(b));
  }

  // Per draw, the smallest k that keeps the draw above estimate - k*sigma on
  // every sigma > 0 grid point; the band multiplier is the (1-alpha) quantile.
  std::vector<double> t(b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      if (sigma[j] <= 0.0) continue;
      t[i] = std::max(t[i], (point_estimate.values[j] - curve_draws[i].values[j]) /
                                sigma[j]);
    }
  }
  std::sort(t.begin(), t.end());
  const auto need = static_cast<std::size_t>(
      std::ceil((1.0 - alpha) * static_cast<double>(b)));
  const double k = t[std::min(std::max<std::size_t>(need, 1) - 1, b - 1)];

  std::vector<double> band(g);
  for (std::size_t j = 0; j < g; ++j) {
    const double drop = sigma[j] > 0.0 ? k * sigma[j] : max_down[j];
    band[j] = std::clamp(point_estimate.values[j] - drop, 0.0, 1.0);
  }
  return band;
}

std::vector<FrontierCurve> bootstrap_curves(
    std::span<const ObservationRecord> data,
    const std::function<FrontierCurve(const CellTable&)>& curve_statistic,
    const BootstrapConfig& config) {
  config.validate();
  std::vector<FrontierCurve> out(config.replications);
  detail::parallel_for(config.replications, config.threads, [&](int b) {
    try {
      out[b] = curve_statistic(resampled_table(data, config.seed, b));
    } catch (const Error& e) {
      throw Error("bootstrap replicate " + std::to_string(b) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace ivbd
