#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ivbd/errors.hpp"

namespace ivbd {

inline constexpr double kProbTol = 1e-12;

/// One observational unit. Outcome, treatment and assignment are binary;
/// the covariate cell is an opaque discrete label.
struct ObservationRecord {
  std::uint8_t y = 0;
  std::uint8_t d = 0;
  std::uint8_t z = 0;
  std::string x;
};

/// A closed interval [lb, ub]. Construction rejects lb > ub beyond tolerance.
class Interval {
 public:
  Interval(double lb, double ub);

  double lb() const { return lb_; }
  double ub() const { return ub_; }
  double width() const { return ub_ - lb_; }
  bool contains(double v, double tol = 0.0) const {
    return v >= lb_ - tol && v <= ub_ + tol;
  }
  /// True when this interval is contained in `outer` up to `tol`.
  bool within(const Interval& outer, double tol = 0.0) const {
    return lb_ >= outer.lb_ - tol && ub_ <= outer.ub_ + tol;
  }

 private:
  double lb_;
  double ub_;
};

/// Estimated probabilities for one covariate cell. Index 0/1 on the arrays
/// refers to the assignment arm z.
struct Cell {
  std::string label;
  double q = 0.0;                       // P(X = label)
  double p_z1 = 0.0;                    // P(Z = 1 | X)
  std::array<double, 2> p_d{};          // P(D = 1 | Z = z, X)
  std::array<double, 2> p_y{};          // P(Y = 1 | Z = z, X)
  std::array<double, 2> p_yd{};         // P(Y = 1, D = 1 | Z = z, X)
  std::array<std::int64_t, 2> count{};  // records with Z = z in this cell

  /// P(Z = z | X) for a given arm.
  double p_arm(int z) const { return z == 1 ? p_z1 : 1.0 - p_z1; }
  /// Full joint P(Y = y, D = d | Z = z, X), indexed (y, d).
  double joint(int z, int y, int d) const;
};

/// Per-cell estimated probabilities plus raw counts for a whole sample.
class CellTable {
 public:
  CellTable(std::vector<Cell> cells, std::int64_t n);

  std::span<const Cell> cells() const { return cells_; }
  std::int64_t n() const { return n_; }
  std::size_t size() const { return cells_.size(); }
  const Cell* find(std::string_view label) const;

 private:
  std::vector<Cell> cells_;
  std::int64_t n_;
};

/// Convenience constructor matching the validated-build entry point.
inline CellTable new_cell_table(std::vector<Cell> cells, std::int64_t n) {
  return CellTable(std::move(cells), n);
}

enum class RelaxationMode { separate, joint };
enum class RatioMode { paired, rectangle };

/// Relaxation magnitudes for the independence assumption, in probability
/// units. `c1` applies to potential treatments, `c2` to potential outcomes,
/// `c` to the joint relaxation.
struct SensitivityParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double c = 0.0;
  RelaxationMode mode = RelaxationMode::separate;
  RatioMode ratio_mode = RatioMode::paired;

  void validate() const;
};

enum class Target { first_stage, reduced_form, late };
enum class Direction { at_least, at_most };

/// A claim about a target parameter: "target is at least (or at most) mu".
struct Conclusion {
  Target target = Target::late;
  Direction direction = Direction::at_least;
  double mu = 0.0;

  void validate() const;
};

/// Outcome of a breakdown-point solve.
struct BreakdownResult {
  double value = 0.0;
  bool clipped = false;        // boundary value returned without a root
  int solver_iterations = 0;
  double residual = 0.0;       // lb_curve(value) - mu
  std::optional<double> ci_lower;  // filled in by bootstrap inference
};

const char* to_string(Target t);
const char* to_string(Direction d);

}  // namespace ivbd
