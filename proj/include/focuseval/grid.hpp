#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace focuseval {

/// Dense row-major W x H grid. Element (row, col) addresses image row `row`
/// (top to bottom) and column `col` (left to right); pixel coordinates
/// (x, y) map to (col, row).
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height, fill) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const {
    return data_[row * width_ + col];
  }

  T& at(std::size_t row, std::size_t col) {
    check(row, col);
    return (*this)(row, col);
  }
  const T& at(std::size_t row, std::size_t col) const {
    check(row, col);
    return (*this)(row, col);
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  std::span<T> row(std::size_t r) { return std::span<T>(data_).subspan(r * width_, width_); }
  std::span<const T> row(std::size_t r) const {
    return std::span<const T>(data_).subspan(r * width_, width_);
  }

  bool same_shape(const Grid& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  void check(std::size_t row, std::size_t col) const {
    if (row >= height_ || col >= width_) throw std::out_of_range("grid index out of range");
  }

  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

}  // namespace focuseval
