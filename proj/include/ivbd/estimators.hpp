#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ivbd/types.hpp"

namespace ivbd {

struct EstimateOptions {
  /// 0: a cell with an empty assignment arm is a hard error (overlap must
  /// hold empirically). >0: cells with any (z, x) stratum thinner than this
  /// are dropped and q_x is renormalized over the survivors.
  std::int64_t min_stratum_count = 0;
};

/// Streaming counter of (y, d, z, x) frequencies; `finish` turns the counts
/// into a CellTable. Merging shards is associative, so sharded counting is
/// bit-identical to sequential counting.
class CellAccumulator {
 public:
  void add(const ObservationRecord& record);
  void merge(const CellAccumulator& other);
  CellTable finish(const EstimateOptions& options = {},
                   std::vector<std::string>* dropped = nullptr) const;

 private:
  struct Counts {
    std::int64_t n_zx[2] = {0, 0};
    std::int64_t n_d[2] = {0, 0};
    std::int64_t n_y[2] = {0, 0};
    std::int64_t n_yd[2] = {0, 0};
  };
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::pair<std::string, Counts>> cells_;
  std::int64_t total_ = 0;
};

/// Nonparametric frequency estimator: every stored probability is the exact
/// ratio of indicator sums within its stratum.
CellTable estimate_cells(std::span<const ObservationRecord> data,
                         const EstimateOptions& options = {},
                         std::vector<std::string>* dropped = nullptr);

struct CellDiagnostics {
  std::string label;
  bool relaxation_below_propensity = false;  // max{c1,c2} < min{p_1|x, p_0|x}
  bool fs_lower_positive = false;            // cell first-stage lower bound > 0 at c1
  bool relevant = false;                     // p_{D|1,x} != p_{D|0,x}
};

struct AssumptionReport {
  std::vector<CellDiagnostics> cells;
  bool relaxation_below_propensity = true;
  bool fs_lower_positive = true;
  bool relevant = true;

  bool pass() const {
    return relaxation_below_propensity && fs_lower_positive && relevant;
  }
};

/// Pure diagnostics for the maintained assumptions at the given relaxation
/// magnitudes (relevance, and the two parts of the simplification condition
/// used by the asymptotics).
AssumptionReport validate_assumptions(const CellTable& table,
                                      const SensitivityParams& params);

}  // namespace ivbd
