#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <string>

#include "ivbd/breakdown.hpp"
#include "ivbd/inference.hpp"
#include "ivbd/simulation.hpp"
#include "test_support.hpp"

using namespace ivbd;

namespace {

std::vector<ObservationRecord> sample_data(int n, std::uint64_t seed = 21) {
  DgpParams params;
  std::mt19937_64 rng(seed);
  return simulate(params, n, rng);
}

}  // namespace

TEST_CASE("resampling draws n records from the original data") {
  const auto data = sample_data(200);
  std::mt19937_64 rng(1);
  const auto draw = resample(data, rng);
  CHECK(draw.size() == data.size());

  std::mt19937_64 again(1);
  const auto repeat = resample(data, again);
  for (std::size_t i = 0; i < draw.size(); ++i) {
    CHECK(draw[i].y == repeat[i].y);
    CHECK(draw[i].d == repeat[i].d);
    CHECK(draw[i].z == repeat[i].z);
    CHECK(draw[i].x == repeat[i].x);
  }
  CHECK_THROWS_AS(resample({}, rng), EmptyData);
}

TEST_CASE("one-sided lower endpoint uses the lower-interpolated quantile") {
  std::vector<double> draws(100);
  for (int i = 0; i < 100; ++i) draws[i] = i + 1.0;  // already sorted
  CHECK(one_sided_ci_breakdown(draws, 0.05) == 5.0);
  CHECK(one_sided_ci_breakdown(draws, 0.001) == 1.0);
  CHECK(one_sided_ci_breakdown(draws, 0.051) == 6.0);
  CHECK_THROWS_AS(one_sided_ci_breakdown(draws, 0.0), InvalidParams);
  CHECK_THROWS_AS(one_sided_ci_breakdown({}, 0.05), EmptyData);
}

TEST_CASE("bootstrap configuration is validated") {
  const auto data = sample_data(50);
  const auto stat = [](const CellTable& t) { return t.cells()[0].p_d[1]; };
  BootstrapConfig config;
  config.replications = 1;
  CHECK_THROWS_AS(bootstrap_distribution(data, stat, config), InvalidParams);
  config.replications = 10;
  config.alpha = 1.0;
  CHECK_THROWS_AS(bootstrap_distribution(data, stat, config), InvalidParams);
  config.alpha = 0.05;
  config.threads = 0;
  CHECK_THROWS_AS(bootstrap_distribution(data, stat, config), InvalidParams);
}

TEST_CASE("bootstrap draws are sorted and deterministic") {
  const auto data = sample_data(300);
  const auto stat = [](const CellTable& t) {
    return first_stage_bounds(t, 0.05, BoundVariant::separate).lb();
  };
  BootstrapConfig config;
  config.replications = 60;
  config.seed = 9;
  const auto a = bootstrap_distribution(data, stat, config);
  REQUIRE(a.size() == 60);
  CHECK(std::is_sorted(a.begin(), a.end()));
  const auto b = bootstrap_distribution(data, stat, config);
  CHECK(a == b);
}

TEST_CASE("draws do not depend on the worker count") {
  const auto data = sample_data(300);
  const auto stat = [](const CellTable& t) {
    return reduced_form_bounds(t, 0.05, BoundVariant::separate).lb();
  };
  BootstrapConfig config;
  config.replications = 40;
  config.seed = 3;
  const auto serial = bootstrap_distribution(data, stat, config);
  config.threads = 4;
  const auto parallel = bootstrap_distribution(data, stat, config);
  CHECK(serial == parallel);
}

TEST_CASE("every statistic sees the same resample stream") {
  const auto data = sample_data(300);
  const std::function<double(const CellTable&)> stats[] = {
      [](const CellTable& t) { return t.cells()[0].p_d[1]; },
      [](const CellTable& t) { return t.cells()[0].p_y[1]; },
  };
  BootstrapConfig config;
  config.replications = 30;
  config.seed = 5;
  const auto together = bootstrap_distributions(data, stats, config);
  REQUIRE(together.size() == 2);
  const auto alone = bootstrap_distribution(data, stats[0], config);
  CHECK(together[0] == alone);
}

TEST_CASE("failing replicates report their index") {
  // Two records in one cell: many resamples contain only one assignment arm,
  // which empties the table even with thin-cell dropping enabled.
  const std::vector<ObservationRecord> data = {{1, 1, 1, "a"}, {0, 0, 0, "a"}};
  const auto stat = [](const CellTable& t) { return t.cells()[0].p_d[1]; };
  BootstrapConfig config;
  config.replications = 64;
  bool thrown = false;
  try {
    bootstrap_distribution(data, stat, config);
  } catch (const Error& e) {
    thrown = true;
    CHECK(std::string(e.what()).find("bootstrap replicate") != std::string::npos);
  }
  CHECK(thrown);
}

TEST_CASE("bootstrap mean tracks the sample statistic") {
  const auto data = sample_data(2000);
  const CellTable table = estimate_cells(data);
  const auto stat = [](const CellTable& t) {
    return breakdown_point_first_stage(t, 0.0, BoundVariant::separate).value;
  };
  BootstrapConfig config;
  config.replications = 200;
  config.seed = 17;
  const auto draws = bootstrap_distribution(data, stat, config);
  double mean = 0.0;
  for (const double d : draws) mean += d;
  mean /= static_cast<double>(draws.size());
  CHECK(std::abs(mean - stat(table)) < 0.05);
  CHECK(one_sided_ci_breakdown(draws, 0.05) <= stat(table));
}

TEST_CASE("a degenerate bootstrap distribution yields a tight band") {
  FrontierCurve estimate;
  estimate.grid = {0.0, 0.5, 1.0};
  estimate.values = {0.5, 0.4, 0.3};
  const std::vector<FrontierCurve> draws(10, estimate);
  const auto band = uniform_band_frontier(draws, estimate, 0.05);
  REQUIRE(band.size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(band[j] == doctest::Approx(estimate.values[j]).epsilon(1e-12));
  }
}

TEST_CASE("the band multiplier is the upper quantile of the sup statistic") {
  FrontierCurve estimate;
  estimate.grid = {0.0, 1.0};
  estimate.values = {0.95, 0.95};
  std::vector<FrontierCurve> draws(100, estimate);
  for (int i = 0; i < 100; ++i) {
    // Parallel downward shifts: the standardized sup statistic of draw i is
    // (i/100)/sigma at both points, so k*sigma is the 95th smallest shift.
    const double shift = static_cast<double>(i) / 100.0;
    draws[i].values = {0.95 - shift, 0.95 - shift};
  }
  const auto band = uniform_band_frontier(draws, estimate, 0.05);
  CHECK(band[0] == doctest::Approx(0.95 - 0.94).epsilon(1e-9));
  CHECK(band[1] == doctest::Approx(band[0]).epsilon(1e-12));
}

TEST_CASE("bands are clipped to the unit interval") {
  FrontierCurve estimate;
  estimate.grid = {0.0};
  estimate.values = {0.02};
  std::vector<FrontierCurve> draws;
  for (int i = 0; i < 20; ++i) {
    FrontierCurve c = estimate;
    c.values = {i % 2 == 0 ? 0.0 : 0.9};
    draws.push_back(c);
  }
  const auto band = uniform_band_frontier(draws, estimate, 0.05);
  CHECK(band[0] >= 0.0);
  CHECK(band[0] <= 0.02);
}

TEST_CASE("bootstrap curves must share the estimate's grid") {
  FrontierCurve estimate;
  estimate.grid = {0.0, 0.5};
  estimate.values = {0.5, 0.4};
  FrontierCurve other;
  other.grid = {0.0, 0.6};
  other.values = {0.5, 0.4};
  const std::vector<FrontierCurve> draws = {other};
  CHECK_THROWS_AS(uniform_band_frontier(draws, estimate, 0.05), InvalidParams);
  CHECK_THROWS_AS(uniform_band_frontier({}, estimate, 0.05), EmptyData);
}

TEST_CASE("frontier band sits weakly below the point estimate") {
  const auto data = sample_data(1500);
  const CellTable table = estimate_cells(data);
  const std::vector<double> grid = uniform_grid(0.3, 7);
  const auto curve_stat = [&](const CellTable& t) {
    return breakdown_frontier(t, 0.05, grid);
  };
  BootstrapConfig config;
  config.replications = 80;
  config.seed = 31;
  config.threads = 2;
  const auto curves = bootstrap_curves(data, curve_stat, config);
  REQUIRE(curves.size() == 80);
  const FrontierCurve estimate = curve_stat(table);
  const auto band = uniform_band_frontier(curves, estimate, 0.05);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(band[j] <= estimate.values[j] + 1e-12);
    CHECK(band[j] >= 0.0);
  }
}
