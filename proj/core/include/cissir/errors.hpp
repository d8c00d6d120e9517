#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cissir {

// A per-column SI budget is at or below its minimum feasible value.
class InfeasibleError : public std::runtime_error {
 public:
  struct Column {
    bool tx;
    int index;
    double budget;
    double threshold;  // sigma-bar, or NaN when unknown
  };
  InfeasibleError(const std::string& what, std::vector<Column> columns)
      : std::runtime_error(what), columns_(std::move(columns)) {}
  const std::vector<Column>& columns() const { return columns_; }

 private:
  std::vector<Column> columns_;
};

// An iterative solver hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cissir
