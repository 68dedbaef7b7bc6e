// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace capsp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense matrix over the reals extended with +inf. NaN is rejected at every
// write so min()-style selection never needs a sentinel check.
class ScalarMatrix {
  public:
    ScalarMatrix() = default;
    ScalarMatrix(std::size_t rows, std::size_t cols, double fill = kInf);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, double value);

    std::span<const double> row_span(std::size_t r) const { return {v_.data() + r * cols_, cols_}; }

    bool operator==(const ScalarMatrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> v_;
};

ScalarMatrix transpose(const ScalarMatrix& m);

// Optional index per entry; an entry is absent exactly when the matching
// product entry is +inf.
class WitnessMatrix {
  public:
    static constexpr std::int32_t kAbsent = -1;

    WitnessMatrix() = default;
    WitnessMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), w_(rows * cols, kAbsent) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool has(std::size_t r, std::size_t c) const { return w_[r * cols_ + c] != kAbsent; }
    std::int32_t at(std::size_t r, std::size_t c) const { return w_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::int32_t k) { w_[r * cols_ + c] = k; }
    void clear(std::size_t r, std::size_t c) { w_[r * cols_ + c] = kAbsent; }

    bool operator==(const WitnessMatrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int32_t> w_;
};

WitnessMatrix transpose(const WitnessMatrix& m);

}  // namespace capsp
