#pragma once

#include <cstdint>
#include <vector>

namespace mmot {

/// A tuple of atom indices, one per marginal (0-based in the API;
/// file and report output uses 1-based indices).
using IndexTuple = std::vector<int>;

/// Row-major addressing of index tuples: the first coordinate varies slowest.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    strides_.assign(sizes_.size(), 1);
    count_ = 1;
    for (int i = static_cast<int>(sizes_.size()) - 1; i >= 0; --i) {
      strides_[i] = count_;
      count_ *= sizes_[i];
    }
  }

  std::int64_t count() const { return count_; }
  const std::vector<int>& sizes() const { return sizes_; }

  std::int64_t flat(const IndexTuple& tuple) const {
    std::int64_t f = 0;
    for (std::size_t i = 0; i < sizes_.size(); ++i) f += tuple[i] * strides_[i];
    return f;
  }

  IndexTuple unflat(std::int64_t flat) const {
    IndexTuple tuple(sizes_.size());
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      tuple[i] = static_cast<int>(flat / strides_[i]);
      flat %= strides_[i];
    }
    return tuple;
  }

  /// Odometer step in row-major order. Returns false after the last tuple.
  bool next(IndexTuple& tuple) const {
    for (int i = static_cast<int>(sizes_.size()) - 1; i >= 0; --i) {
      if (++tuple[i] < sizes_[i]) return true;
      tuple[i] = 0;
    }
    return false;
  }

 private:
  std::vector<int> sizes_;
  std::vector<std::int64_t> strides_;
  std::int64_t count_ = 1;
};

}  // namespace mmot
