#include "postaic/csv.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "postaic/error.hpp"

namespace postaic {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      cells.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell.push_back(ch);
    }
  }
  cells.push_back(cell);
  for (auto& c : cells) {
    const auto b = c.find_first_not_of(" \t");
    const auto e = c.find_last_not_of(" \t");
    c = b == std::string::npos ? std::string{} : c.substr(b, e - b + 1);
  }
  return cells;
}

}  // namespace

int NumericTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::ParseError, "no column named '" + name + "'");
  return static_cast<int>(it - header.begin());
}

NumericTable read_csv(std::istream& in, const std::vector<std::string>& ignore) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty CSV: header row required");
  const auto raw_header = split_row(line);
  std::vector<std::size_t> keep;
  NumericTable table;
  for (std::size_t j = 0; j < raw_header.size(); ++j) {
    if (raw_header[j].empty()) throw Error(ErrorCode::ParseError, "row 1, column " + std::to_string(j + 1) + ": empty header");
    if (std::find(ignore.begin(), ignore.end(), raw_header[j]) != ignore.end()) continue;
    keep.push_back(j);
    table.header.push_back(raw_header[j]);
  }
  for (const auto& name : ignore)
    if (std::find(raw_header.begin(), raw_header.end(), name) == raw_header.end())
      throw Error(ErrorCode::ParseError, "ignored column '" + name + "' not in header");

  std::vector<std::vector<double>> rows;
  int row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_row(line);
    if (cells.size() != raw_header.size())
      throw Error(ErrorCode::ParseError, "row " + std::to_string(row_no) + ": expected " +
                                             std::to_string(raw_header.size()) + " fields, got " +
                                             std::to_string(cells.size()));
    std::vector<double> values;
    values.reserve(keep.size());
    for (std::size_t j : keep) {
      const std::string& cell = cells[j];
      double v = 0.0;
      std::size_t used = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (cell.empty() || used != cell.size())
        throw Error(ErrorCode::ParseError, "row " + std::to_string(row_no) + ", column '" + raw_header[j] +
                                               "': not a number: '" + cell + "'");
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j)
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return table;
}

NumericTable read_csv_file(const std::string& path, const std::vector<std::string>& ignore) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_csv(in, ignore);
}

Dataset make_dataset(const NumericTable& table, const std::string& response, bool intercept) {
  const int r = table.column(response);
  const Eigen::Index n = table.values.rows();
  const Eigen::Index preds = table.values.cols() - 1;
  const Eigen::Index p = preds + (intercept ? 1 : 0);
  Eigen::MatrixXd X(n, p);
  std::vector<std::string> names;
  Eigen::Index col = 0;
  if (intercept) {
    X.col(col++).setOnes();
    names.emplace_back("(Intercept)");
  }
  for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
    if (j == r) continue;
    X.col(col++) = table.values.col(j);
    names.push_back(table.header[static_cast<std::size_t>(j)]);
  }
  return Dataset(std::move(X), table.values.col(r), std::move(names),
                 intercept ? InterceptPolicy::ForcedFirstColumn : InterceptPolicy::None);
}

}  // namespace postaic
