#include "ivbd/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "ivbd/bounds.hpp"

namespace ivbd {

void CellAccumulator::add(const ObservationRecord& record) {
  auto [it, inserted] = index_.try_emplace(record.x, cells_.size());
  if (inserted) cells_.emplace_back(record.x, Counts{});
  Counts& c = cells_[it->second].second;
  const int z = record.z ? 1 : 0;
  ++c.n_zx[z];
  if (record.d) ++c.n_d[z];
  if (record.y) ++c.n_y[z];
  if (record.y && record.d) ++c.n_yd[z];
  ++total_;
}

void CellAccumulator::merge(const CellAccumulator& other) {
  for (const auto& [label, counts] : other.cells_) {
    auto [it, inserted] = index_.try_emplace(label, cells_.size());
    if (inserted) cells_.emplace_back(label, Counts{});
    Counts& c = cells_[it->second].second;
    for (int z = 0; z < 2; ++z) {
      c.n_zx[z] += counts.n_zx[z];
      c.n_d[z] += counts.n_d[z];
      c.n_y[z] += counts.n_y[z];
      c.n_yd[z] += counts.n_yd[z];
    }
  }
  total_ += other.total_;
}

CellTable CellAccumulator::finish(const EstimateOptions& options,
                                  std::vector<std::string>* dropped) const {
  if (total_ == 0) throw EmptyData("no records to estimate from");

  std::vector<std::pair<std::string, Counts>> kept;
  kept.reserve(cells_.size());
  std::int64_t kept_n = 0;
  for (const auto& entry : cells_) {
    const Counts& c = entry.second;
    const std::int64_t thin = std::min(c.n_zx[0], c.n_zx[1]);
    if (options.min_stratum_count > 0) {
      if (thin < options.min_stratum_count) {
        if (dropped) dropped->push_back(entry.first);
        continue;
      }
    } else if (thin == 0) {
      throw EmptyStratum(entry.first,
                         "cell '" + entry.first + "' has no records with Z = " +
                             (c.n_zx[0] == 0 ? "0" : "1") +
                             "; empirical overlap fails");
    }
    kept.push_back(entry);
    kept_n += c.n_zx[0] + c.n_zx[1];
  }
  if (kept.empty()) {
    throw EmptyData("every cell was dropped by the stratum-size threshold");
  }

  // Deterministic output order, independent of record order.
  std::sort(kept.begin(), kept.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<Cell> cells;
  cells.reserve(kept.size());
  for (const auto& [label, c] : kept) {
    Cell cell;
    cell.label = label;
    const double n_x = static_cast<double>(c.n_zx[0] + c.n_zx[1]);
    cell.q = n_x / static_cast<double>(kept_n);
    cell.p_z1 = static_cast<double>(c.n_zx[1]) / n_x;
    for (int z = 0; z < 2; ++z) {
      const double n_zx = static_cast<double>(c.n_zx[z]);
      cell.p_d[z] = n_zx > 0 ? static_cast<double>(c.n_d[z]) / n_zx : 0.0;
      cell.p_y[z] = n_zx > 0 ? static_cast<double>(c.n_y[z]) / n_zx : 0.0;
      cell.p_yd[z] = n_zx > 0 ? static_cast<double>(c.n_yd[z]) / n_zx : 0.0;
      cell.count[z] = c.n_zx[z];
    }
    cells.push_back(std::move(cell));
  }
  return CellTable(std::move(cells), kept_n);
}

CellTable estimate_cells(std::span<const ObservationRecord> data,
                         const EstimateOptions& options,
                         std::vector<std::string>* dropped) {
  if (data.empty()) throw EmptyData("no records to estimate from");
  CellAccumulator acc;
  for (const ObservationRecord& record : data) acc.add(record);
  return acc.finish(options, dropped);
}

AssumptionReport validate_assumptions(const CellTable& table,
                                      const SensitivityParams& params) {
  params.validate();
  const double cmax = params.mode == RelaxationMode::joint
                          ? params.c
                          : std::max(params.c1, params.c2);
  const double c1 = params.mode == RelaxationMode::joint ? params.c : params.c1;
  const BoundVariant variant = params.mode == RelaxationMode::joint
                                   ? BoundVariant::joint
                                   : BoundVariant::separate;
  AssumptionReport report;
  for (const Cell& cell : table.cells()) {
    CellDiagnostics diag;
    diag.label = cell.label;
    diag.relaxation_below_propensity =
        cmax < std::min(cell.p_z1, 1.0 - cell.p_z1);

    // Unclipped cell-level first-stage lower bound.
    const Interval b1 = potential_quantity_bound(cell.p_d[1], cell.p_arm(1), c1, variant);
    const Interval b0 = potential_quantity_bound(cell.p_d[0], cell.p_arm(0), c1, variant);
    diag.fs_lower_positive = b1.lb() - b0.ub() > 0.0;

    diag.relevant = cell.p_d[1] != cell.p_d[0];

    report.relaxation_below_propensity &= diag.relaxation_below_propensity;
    report.fs_lower_positive &= diag.fs_lower_positive;
    report.relevant &= diag.relevant;
    report.cells.push_back(std::move(diag));
  }
  return report;
}

}  // namespace ivbd
