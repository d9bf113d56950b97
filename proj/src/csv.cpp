#include "ivbd/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ivbd {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // Trim surrounding whitespace and a trailing CR from CRLF files.
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos
                         ? std::string()
                         : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

long parse_int(const std::string& field, long row, const std::string& column) {
  long value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw SchemaError("row " + std::to_string(row) + ", column '" + column +
                          "': value '" + field + "' is not an integer",
                      row, column);
  }
  return value;
}

}  // namespace

Dataset read_csv(const std::string& path, bool keep_columns) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open input file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw SchemaError("input file is empty", 1);
  const std::vector<std::string> header = split_line(line);

  long y_col = -1, d_col = -1, z_col = -1;
  Dataset out;
  std::vector<std::size_t> covariate_idx;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "y") {
      y_col = static_cast<long>(i);
    } else if (header[i] == "d") {
      d_col = static_cast<long>(i);
    } else if (header[i] == "z") {
      z_col = static_cast<long>(i);
    } else if (header[i].empty()) {
      throw SchemaError("empty column name in header", 1);
    } else {
      covariate_idx.push_back(i);
      out.covariate_columns.push_back(header[i]);
    }
  }
  if (y_col < 0 || d_col < 0 || z_col < 0) {
    throw SchemaError("header must contain columns y, d, z", 1);
  }

  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != header.size()) {
      throw SchemaError("row " + std::to_string(row) + ": expected " +
                            std::to_string(header.size()) + " fields, found " +
                            std::to_string(fields.size()),
                        row);
    }
    const auto binary = [&](long col, const std::string& name) {
      const long v = parse_int(fields[static_cast<std::size_t>(col)], row, name);
      if (v != 0 && v != 1) {
        throw SchemaError("row " + std::to_string(row) + ", column '" + name +
                              "': value must be 0 or 1",
                          row, name);
      }
      return static_cast<std::uint8_t>(v);
    };
    ObservationRecord rec;
    rec.y = binary(y_col, "y");
    rec.d = binary(d_col, "d");
    rec.z = binary(z_col, "z");

    std::vector<std::string> columns;
    columns.reserve(covariate_idx.size());
    std::string label;
    for (std::size_t i = 0; i < covariate_idx.size(); ++i) {
      const std::string& field = fields[covariate_idx[i]];
      parse_int(field, row, out.covariate_columns[i]);  // integers only
      if (i > 0) label += '|';
      label += out.covariate_columns[i];
      label += '=';
      label += field;
      if (keep_columns) columns.push_back(field);
    }
    rec.x = covariate_idx.empty() ? "all" : label;
    if (keep_columns) {
      out.labeled.push_back(LabeledRecord{rec.z, std::move(columns)});
    }
    out.records.push_back(std::move(rec));
  }
  if (out.records.empty()) throw SchemaError("input file has no data rows", row);
  return out;
}

}  // namespace ivbd
