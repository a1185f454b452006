#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "postaic/model.hpp"

namespace postaic {

/// Numeric table read from a CSV file with a header row.
struct NumericTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;  // rows x header.size()

  int column(const std::string& name) const;
};

// Columns listed in `ignore` may hold non-numeric text and are dropped.
// Throws ParseError naming the offending row and column.
NumericTable read_csv(std::istream& in, const std::vector<std::string>& ignore = {});
NumericTable read_csv_file(const std::string& path, const std::vector<std::string>& ignore = {});

/// Response column `response`, every other column a predictor. With
/// `intercept`, a leading "(Intercept)" column of ones is forced into every model.
Dataset make_dataset(const NumericTable& table, const std::string& response, bool intercept);

}  // namespace postaic
