#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ivbd/types.hpp"

namespace ivbd {

/// One unit keeping its covariate columns separate (the calibration measure
/// is the only place individual columns matter).
struct LabeledRecord {
  std::uint8_t z = 0;
  std::vector<std::string> covariates;
};

struct CbarResult {
  double value = 0.0;
  /// Set when the observed cells do not cover the full product support of
  /// the covariate columns; the supremum then runs over observed cells only.
  bool support_incomplete = false;
};

/// Leave-one-column-out sensitivity benchmark for column k: the largest
/// absolute gap between the empirical P(Z=1 | all columns) and
/// P(Z=1 | all columns except k), the latter formed by the empirical law of
/// total probability over x_k within each remaining-column stratum. The
/// supremum runs over observed cells.
CbarResult cbar(std::span<const LabeledRecord> data, std::size_t k);

/// cbar for every column, in column order.
std::vector<CbarResult> cbar_all(std::span<const LabeledRecord> data,
                                 std::size_t n_columns);

}  // namespace ivbd
