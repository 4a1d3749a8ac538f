#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace formsim {

// Column-oriented time series: one row per sample, fixed column set.
class SimLog {
 public:
  SimLog() = default;
  explicit SimLog(std::vector<std::string> columns) : columns_(std::move(columns)) {
    for (std::size_t i = 0; i < columns_.size(); ++i) index_[columns_[i]] = static_cast<int>(i);
    if (index_.size() != columns_.size())
      throw std::invalid_argument("duplicate column names in log layout");
  }

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  std::size_t row_count() const { return rows_.size(); }

  bool has_column(const std::string& name) const { return index_.count(name) > 0; }

  int column(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("no log column named '" + name + "'");
    return it->second;
  }

  void push_row(std::vector<double> row) {
    if (row.size() != columns_.size())
      throw std::invalid_argument("row width does not match the column layout");
    rows_.push_back(std::move(row));
  }

  double at(std::size_t row, int col) const { return rows_[row][static_cast<std::size_t>(col)]; }
  double at(std::size_t row, const std::string& name) const { return rows_[row][column(name)]; }

  std::vector<double> series(const std::string& name) const {
    const int c = column(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r[static_cast<std::size_t>(c)]);
    return out;
  }

  std::vector<double> times() const { return series("t"); }

 private:
  std::vector<std::string> columns_;
  std::map<std::string, int> index_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace formsim
