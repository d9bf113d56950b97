#include "ivbd/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace ivbd {

namespace {

struct ArmCounts {
  std::int64_t n = 0;
  std::int64_t z1 = 0;

  double rate() const { return static_cast<double>(z1) / static_cast<double>(n); }
};

std::string join_key(const std::vector<std::string>& values,
                     std::size_t skip = static_cast<std::size_t>(-1)) {
  std::string key;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == skip) continue;
    key += values[i];
    key += '\x1f';  // unit separator; covariate values are validated integers
  }
  return key;
}

}  // namespace

CbarResult cbar(std::span<const LabeledRecord> data, std::size_t k) {
  if (data.empty()) throw EmptyData("no records for calibration");
  const std::size_t n_columns = data.front().covariates.size();
  if (n_columns == 0) throw InvalidParams("calibration needs covariate columns");
  if (k >= n_columns) throw InvalidParams("covariate column index out of range");

  std::unordered_map<std::string, ArmCounts> full;
  std::unordered_map<std::string, ArmCounts> rest;
  std::vector<std::unordered_set<std::string>> support(n_columns);
  for (const LabeledRecord& rec : data) {
    if (rec.covariates.size() != n_columns) {
      throw InvalidParams("records disagree on the number of covariate columns");
    }
    ArmCounts& f = full[join_key(rec.covariates)];
    ArmCounts& r = rest[join_key(rec.covariates, k)];
    ++f.n;
    ++r.n;
    if (rec.z) {
      ++f.z1;
      ++r.z1;
    }
    for (std::size_t i = 0; i < n_columns; ++i) {
      support[i].insert(rec.covariates[i]);
    }
  }

  CbarResult result;
  std::size_t product_support = 1;
  for (const auto& s : support) product_support *= s.size();
  result.support_incomplete = full.size() < product_support;

  // Re-walk cells via the records to recover both keys per full cell; a set
  // avoids double-counting cells.
  std::unordered_set<std::string> seen;
  for (const LabeledRecord& rec : data) {
    const std::string fkey = join_key(rec.covariates);
    if (!seen.insert(fkey).second) continue;
    const double p_full = full.at(fkey).rate();
    const double p_rest = rest.at(join_key(rec.covariates, k)).rate();
    result.value = std::max(result.value, std::abs(p_full - p_rest));
  }
  return result;
}

std::vector<CbarResult> cbar_all(std::span<const LabeledRecord> data,
                                 std::size_t n_columns) {
  std::vector<CbarResult> out;
  out.reserve(n_columns);
  for (std::size_t k = 0; k < n_columns; ++k) out.push_back(cbar(data, k));
  return out;
}

}  // namespace ivbd
