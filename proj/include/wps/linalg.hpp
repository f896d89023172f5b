#pragma once

#include <optional>
#include <vector>

#include "wps/scalar.hpp"

namespace wps {

/// Incremental exact row echelon form over K.
///
/// Rows are reduced against the stored pivots as they arrive, so
/// membership and rank queries are available at every step.
template <Scalar K>
class RowEchelon {
 public:
  explicit RowEchelon(std::size_t ncols) : ncols_(ncols), pivot_row_(ncols, -1) {}

  std::size_t rank() const { return rows_.size(); }
  std::size_t columns() const { return ncols_; }
  bool is_pivot(std::size_t col) const { return pivot_row_[col] >= 0; }

  /// Reduces v against the current pivots (in place).
  void reduce(std::vector<K>& v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::size_t p = pivots_[r];
      if (v[p].is_zero()) continue;
      const K f = v[p];
      const auto& row = rows_[r];
      for (std::size_t c = p; c < ncols_; ++c)
        if (!row[c].is_zero()) v[c] = v[c] - f * row[c];
    }
  }

  /// Adds a row; returns true when it increased the rank.
  bool insert(std::vector<K> v) {
    reduce(v);
    std::size_t p = 0;
    while (p < ncols_ && v[p].is_zero()) ++p;
    if (p == ncols_) return false;
    const K inv = K(1) / v[p];
    for (std::size_t c = p; c < ncols_; ++c) v[c] = v[c] * inv;
    // Keep earlier rows reduced at the new pivot so reduce() stays one pass.
    for (auto& row : rows_) {
      if (row[p].is_zero()) continue;
      const K f = row[p];
      for (std::size_t c = p; c < ncols_; ++c)
        if (!v[c].is_zero()) row[c] = row[c] - f * v[c];
    }
    pivot_row_[p] = static_cast<long>(rows_.size());
    pivots_.push_back(p);
    rows_.push_back(std::move(v));
    return true;
  }

  bool contains(std::vector<K> v) const {
    reduce(v);
    for (const auto& x : v)
      if (!x.is_zero()) return false;
    return true;
  }

 private:
  std::size_t ncols_;
  std::vector<std::vector<K>> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<long> pivot_row_;
};

}  // namespace wps
