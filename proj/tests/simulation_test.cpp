#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ivbd/bounds.hpp"
#include "ivbd/estimators.hpp"
#include "ivbd/simulation.hpp"

using namespace ivbd;

TEST_CASE("parameter validation") {
  DgpParams params;
  params.p_x = 1.5;
  CHECK_THROWS_AS(params.validate(), InvalidParams);
  params = DgpParams{};
  params.pi_z = 0.8;
  params.pi_x = 0.5;
  CHECK_THROWS_AS(params.validate(), InvalidParams);
  params = DgpParams{};
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(simulate(params, 0, rng), InvalidParams);
}

TEST_CASE("simulated records are well formed and reproducible") {
  DgpParams params;
  std::mt19937_64 rng(42);
  const auto data = simulate(params, 500, rng);
  REQUIRE(data.size() == 500);
  for (const ObservationRecord& rec : data) {
    CHECK(rec.y <= 1);
    CHECK(rec.d <= 1);
    CHECK(rec.z <= 1);
    CHECK((rec.x == "0" || rec.x == "1"));
  }
  std::mt19937_64 again(42);
  const auto repeat = simulate(params, 500, again);
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(data[i].y == repeat[i].y);
    CHECK(data[i].d == repeat[i].d);
    CHECK(data[i].z == repeat[i].z);
    CHECK(data[i].x == repeat[i].x);
  }
}

TEST_CASE("each record consumes a fixed slice of the stream") {
  DgpParams params;
  for (const CopulaKind copula : {CopulaKind::gaussian, CopulaKind::mixture}) {
    params.copula = copula;
    std::mt19937_64 short_rng(7), long_rng(7);
    const auto head = simulate(params, 5, short_rng);
    const auto full = simulate(params, 10, long_rng);
    for (std::size_t i = 0; i < head.size(); ++i) {
      CHECK(head[i].y == full[i].y);
      CHECK(head[i].d == full[i].d);
      CHECK(head[i].z == full[i].z);
      CHECK(head[i].x == full[i].x);
    }
  }
}

TEST_CASE("empirical frequencies match the closed forms") {
  DgpParams params;
  std::mt19937_64 rng(8);
  const CellTable table = estimate_cells(simulate(params, 200'000, rng));
  REQUIRE(table.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const Cell& cell = table.cells()[i];
    const int x = static_cast<int>(i);
    CHECK(std::abs(cell.q - 0.5) < 0.01);
    CHECK(std::abs(cell.p_z1 - 0.4) < 0.01);
    for (int z = 0; z < 2; ++z) {
      CHECK(std::abs(cell.p_d[z] - treatment_probability(params, z, x)) < 0.01);
    }
  }
}

TEST_CASE("an independent copula point-identifies the usual estimands") {
  DgpParams params;
  params.rho = 0.0;
  const CellTable table = population_cells(params, 2'000'000);
  // Complier share pi_z and intent-to-treat beta_d * pi_z.
  const Interval fs = first_stage_bounds(table, 0.0, BoundVariant::separate);
  CHECK(fs.lb() == doctest::Approx(0.5).epsilon(0.01));
  const Interval rf = reduced_form_bounds(table, 0.0, BoundVariant::separate);
  CHECK(rf.lb() == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("the mixture copula preserves the uniform treatment margin") {
  DgpParams params;
  params.copula = CopulaKind::mixture;
  std::mt19937_64 rng(12);
  const CellTable table = estimate_cells(simulate(params, 200'000, rng));
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Cell& cell = table.cells()[i];
    for (int z = 0; z < 2; ++z) {
      CHECK(std::abs(cell.p_d[z] -
                     treatment_probability(params, z, static_cast<int>(i))) < 0.01);
    }
  }
}

TEST_CASE("the population oracle is deterministic") {
  DgpParams params;
  const CellTable a = population_cells(params, 100'000);
  const CellTable b = population_cells(params, 100'000);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.cells()[i].p_d == b.cells()[i].p_d);
    CHECK(a.cells()[i].p_y == b.cells()[i].p_y);
  }
  CHECK_THROWS_AS(population_cells(params, 10), InvalidParams);
}

TEST_CASE("a small coverage study runs deterministically") {
  MonteCarloConfig config;
  config.n = 400;
  config.replications = 8;
  config.mus = {0.0};
  config.targets = {Target::first_stage};
  config.bootstrap.replications = 20;
  config.population_draws = 200'000;
  config.threads = 2;

  const MonteCarloReport report = monte_carlo(config);
  REQUIRE(report.rows.size() == 1);
  const MonteCarloRow& row = report.rows[0];
  CHECK(row.target == Target::first_stage);
  CHECK(row.truth > 0.3);
  CHECK(row.replications == 8);
  CHECK(row.coverage >= 0.0);
  CHECK(row.coverage <= 1.0);
  CHECK(std::abs(row.avg_bias) < 0.2);

  const MonteCarloReport again = monte_carlo(config);
  CHECK(again.rows[0].avg_bias == row.avg_bias);
  CHECK(again.rows[0].coverage == row.coverage);

  const std::string text = format_table(report);
  CHECK(text.find("fs") != std::string::npos);
  CHECK(text.find("cover") != std::string::npos);
}

TEST_CASE("rows whose conclusion fails at independence are rejected") {
  MonteCarloConfig config;
  config.replications = 2;
  config.mus = {0.9};  // the population complier share is only 0.5
  config.targets = {Target::first_stage};
  config.population_draws = 100'000;
  CHECK_THROWS_AS(monte_carlo(config), InvalidParams);

  config.mus = {};
  CHECK_THROWS_AS(monte_carlo(config), InvalidParams);
}
