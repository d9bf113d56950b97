#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <string>
#include <vector>

#include "ivbd/calibration.hpp"

using namespace ivbd;

namespace {

/// `z1_of_cell(a, b)` out of `per_cell` records with covariates (a, b).
std::vector<LabeledRecord> grid_data(int per_cell,
                                     const std::function<int(int, int)>& z1_of_cell,
                                     bool drop_last_cell = false) {
  std::vector<LabeledRecord> data;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      if (drop_last_cell && a == 1 && b == 1) continue;
      const int ones = z1_of_cell(a, b);
      for (int i = 0; i < per_cell; ++i) {
        data.push_back(LabeledRecord{static_cast<std::uint8_t>(i < ones ? 1 : 0),
                                     {std::to_string(a), std::to_string(b)}});
      }
    }
  }
  return data;
}

}  // namespace

TEST_CASE("an irrelevant column scores zero") {
  // Assignment depends on column 0 only.
  const auto data = grid_data(10, [](int a, int) { return a ? 6 : 4; });
  const CbarResult first = cbar(data, 0);
  const CbarResult second = cbar(data, 1);
  // Dropping column 0 pools 0.6 and 0.4 into 0.5, a 0.1 gap either way.
  CHECK(first.value == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_FALSE(first.support_incomplete);
  CHECK(second.value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a 0.05 shift in the assignment rate scores 0.05") {
  const auto data = grid_data(20, [](int a, int) { return a ? 11 : 9; });
  CHECK(cbar(data, 0).value == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("unbalanced cell sizes weight the pooled rate") {
  // Column 0 = 0 cells have 30 records at rate 0.4; column 0 = 1 cells have
  // 10 records at rate 0.8. Pooled leave-out rate = (12 + 8) / 40 = 0.5.
  std::vector<LabeledRecord> data;
  const auto add = [&](int a, int n, int ones) {
    for (int i = 0; i < n; ++i) {
      data.push_back(LabeledRecord{static_cast<std::uint8_t>(i < ones ? 1 : 0),
                                   {std::to_string(a), "0"}});
    }
  };
  add(0, 30, 12);
  add(1, 10, 8);
  const CbarResult result = cbar(data, 0);
  CHECK(result.value == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("missing support cells are flagged") {
  const auto data = grid_data(10, [](int, int) { return 5; },
                              /*drop_last_cell=*/true);
  const CbarResult result = cbar(data, 0);
  CHECK(result.support_incomplete);
  CHECK(result.value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cbar_all walks the columns in order") {
  const auto data = grid_data(10, [](int a, int b) { return 4 + 2 * a + b; });
  const auto all = cbar_all(data, 2);
  REQUIRE(all.size() == 2);
  CHECK(all[0].value == cbar(data, 0).value);
  CHECK(all[1].value == cbar(data, 1).value);
  CHECK(all[0].value > all[1].value);  // column 0 moves the rate twice as far
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(cbar({}, 0), EmptyData);

  const std::vector<LabeledRecord> no_columns = {LabeledRecord{1, {}}};
  CHECK_THROWS_AS(cbar(no_columns, 0), InvalidParams);

  const auto data = grid_data(4, [](int, int) { return 2; });
  CHECK_THROWS_AS(cbar(data, 2), InvalidParams);

  std::vector<LabeledRecord> ragged = data;
  ragged.push_back(LabeledRecord{0, {"0"}});
  CHECK_THROWS_AS(cbar(ragged, 0), InvalidParams);
}
