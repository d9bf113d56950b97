#pragma once

#include <string>
#include <vector>

#include "ivbd/calibration.hpp"
#include "ivbd/types.hpp"

namespace ivbd {

/// Parsed input file. Covariate cells are labeled "name=value|name=value"
/// in header order; files with no covariate columns get the single label
/// "all".
struct Dataset {
  std::vector<std::string> covariate_columns;
  std::vector<ObservationRecord> records;
  /// Per-record covariate columns kept separate; filled only when requested
  /// (the calibration measure needs them, nothing else does).
  std::vector<LabeledRecord> labeled;
};

/// Reads a headered CSV with mandatory integer columns y, d, z in {0,1} and
/// any number of additional integer-valued covariate columns. Throws
/// SchemaError with row/column diagnostics on any violation.
Dataset read_csv(const std::string& path, bool keep_columns = false);

}  // namespace ivbd
