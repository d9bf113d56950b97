#include "ivbd/types.hpp"

#include <cmath>
#include <unordered_set>

namespace ivbd {

namespace {

void check_prob(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidProbability(std::string(name) + " = " + std::to_string(v) +
                             " is not in [0,1]");
  }
}

}  // namespace

Interval::Interval(double lb, double ub) : lb_(lb), ub_(ub) {
  if (!(std::isfinite(lb) && std::isfinite(ub))) {
    throw InvalidInterval("interval endpoints must be finite");
  }
  if (lb > ub + 1e-12) {
    throw InvalidInterval("interval lower bound " + std::to_string(lb) +
                          " exceeds upper bound " + std::to_string(ub));
  }
}

double Cell::joint(int z, int y, int d) const {
  const double p11 = p_yd[z];
  const double p10 = p_y[z] - p11;  // Y=1, D=0
  const double p01 = p_d[z] - p11;  // Y=0, D=1
  const double p00 = 1.0 - p_y[z] - p_d[z] + p11;
  if (y == 1) return d == 1 ? p11 : p10;
  return d == 1 ? p01 : p00;
}

CellTable::CellTable(std::vector<Cell> cells, std::int64_t n)
    : cells_(std::move(cells)), n_(n) {
  if (cells_.empty()) throw EmptyData("cell table requires at least one cell");
  if (n_ <= 0) throw InvalidParams("cell table sample size must be positive");

  std::unordered_set<std::string> seen;
  double q_sum = 0.0;
  for (const Cell& cell : cells_) {
    if (!seen.insert(cell.label).second) {
      throw InvalidParams("duplicate cell label: " + cell.label);
    }
    check_prob(cell.q, "q_x");
    check_prob(cell.p_z1, "p_{z|x}");
    for (int z = 0; z < 2; ++z) {
      check_prob(cell.p_d[z], "p_{D|z,x}");
      check_prob(cell.p_y[z], "p_{Y|z,x}");
      check_prob(cell.p_yd[z], "p_{Y,D|z,x}");
      // Frechet consistency of the joint with its margins.
      const double slack = 1e-9;
      if (cell.p_yd[z] > std::min(cell.p_y[z], cell.p_d[z]) + slack ||
          cell.p_y[z] + cell.p_d[z] - cell.p_yd[z] > 1.0 + slack) {
        throw InvalidProbability("joint p_{Y,D|z,x} inconsistent with margins in cell " +
                                 cell.label);
      }
      if (cell.count[z] < 0) {
        throw InvalidParams("negative stratum count in cell " + cell.label);
      }
      const double expected =
          cell.q * (z == 1 ? cell.p_z1 : 1.0 - cell.p_z1) * static_cast<double>(n_);
      if (std::abs(static_cast<double>(cell.count[z]) - expected) > 1.0 + 1e-6) {
        throw InvalidParams("stratum count inconsistent with q_x * p_{z|x} * n in cell " +
                            cell.label);
      }
    }
    q_sum += cell.q;
  }
  if (std::abs(q_sum - 1.0) > 1e-12 * static_cast<double>(cells_.size()) + 1e-12) {
    throw InvalidProbability("cell weights q_x sum to " + std::to_string(q_sum) +
                             ", expected 1");
  }
}

const Cell* CellTable::find(std::string_view label) const {
  for (const Cell& cell : cells_) {
    if (cell.label == label) return &cell;
  }
  return nullptr;
}

void SensitivityParams::validate() const {
  check_prob(c1, "c1");
  check_prob(c2, "c2");
  check_prob(c, "c");
}

void Conclusion::validate() const {
  if (target == Target::first_stage) {
    if (!(mu >= 0.0 && mu <= 1.0)) {
      throw InvalidParams("first-stage threshold mu must lie in [0,1]");
    }
  } else if (!(mu >= -1.0 && mu <= 1.0)) {
    throw InvalidParams("threshold mu must lie in [-1,1]");
  }
}

const char* to_string(Target t) {
  switch (t) {
    case Target::first_stage: return "fs";
    case Target::reduced_form: return "rf";
    case Target::late: return "late";
  }
  return "?";
}

const char* to_string(Direction d) {
  return d == Direction::at_least ? "ge" : "le";
}

}  // namespace ivbd
