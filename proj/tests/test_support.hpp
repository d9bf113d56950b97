#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ivbd/types.hpp"

namespace ivbd::test {

/// Builds a cell whose stratum counts are consistent with (q, p_z1, n).
inline Cell make_cell(std::string label, double q, double p_z1, double pd0,
                      double pd1, double py0, double py1, std::int64_t n,
                      double pyd0 = -1.0, double pyd1 = -1.0) {
  Cell cell;
  cell.label = std::move(label);
  cell.q = q;
  cell.p_z1 = p_z1;
  cell.p_d = {pd0, pd1};
  cell.p_y = {py0, py1};
  // Default joint mass: independence within the stratum.
  cell.p_yd = {pyd0 >= 0.0 ? pyd0 : py0 * pd0, pyd1 >= 0.0 ? pyd1 : py1 * pd1};
  cell.count = {std::llround(q * (1.0 - p_z1) * static_cast<double>(n)),
                std::llround(q * p_z1 * static_cast<double>(n))};
  return cell;
}

inline CellTable single_cell_table(double p_z1, double pd0, double pd1,
                                   double py0, double py1,
                                   std::int64_t n = 1000) {
  return CellTable({make_cell("x", 1.0, p_z1, pd0, pd1, py0, py1, n)}, n);
}

inline Cell random_cell(std::mt19937_64& rng, const std::string& label = "x",
                        double q = 1.0) {
  std::uniform_real_distribution<double> mid(0.1, 0.9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Cell cell;
  cell.label = label;
  cell.q = q;
  cell.p_z1 = mid(rng);
  for (int z = 0; z < 2; ++z) {
    cell.p_d[z] = unit(rng);
    cell.p_y[z] = unit(rng);
    const double lo = std::max(0.0, cell.p_y[z] + cell.p_d[z] - 1.0);
    const double hi = std::min(cell.p_y[z], cell.p_d[z]);
    cell.p_yd[z] = lo + unit(rng) * (hi - lo);
  }
  const std::int64_t n = 100000;
  cell.count = {std::llround(q * (1.0 - cell.p_z1) * n),
                std::llround(q * cell.p_z1 * n)};
  return cell;
}

inline CellTable random_table(std::mt19937_64& rng, int n_cells = 2) {
  std::vector<double> weights(n_cells);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  double sum = 0.0;
  for (double& w : weights) sum += (w = unit(rng));
  std::vector<Cell> cells;
  double acc = 0.0;
  for (int i = 0; i < n_cells; ++i) {
    const double q = i + 1 == n_cells ? 1.0 - acc : weights[i] / sum;
    acc += q;
    cells.push_back(random_cell(rng, "x" + std::to_string(i), q));
  }
  return CellTable(std::move(cells), 100000);
}

}  // namespace ivbd::test
