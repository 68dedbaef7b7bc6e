// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace capsp {

// Row-major bit-packed 0-1 matrix. Rows double as points of the Hamming
// space. Padding bits past `cols` are kept zero, so word-level XOR/popcount
// and equality are exact.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return words_per_row_; }

    bool get(std::size_t r, std::size_t c) const {
        return (bits_[r * words_per_row_ + (c >> 6)] >> (c & 63)) & 1ULL;
    }
    void set(std::size_t r, std::size_t c, bool value);

    std::span<const std::uint64_t> row(std::size_t r) const {
        return {bits_.data() + r * words_per_row_, words_per_row_};
    }

    // Sorted positions of the set bits in row r.
    std::vector<std::uint32_t> row_positions(std::size_t r) const;
    // Sorted positions of the set bits in column c.
    std::vector<std::uint32_t> column_positions(std::size_t c) const;

    bool operator==(const BitMatrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_per_row_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Number of positions where the two rows differ. Throws on length mismatch.
std::uint64_t hamming_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
std::uint64_t hamming_distance(const BitMatrix& m, std::size_t r1, std::size_t r2);
std::uint64_t hamming_distance(const BitMatrix& a, std::size_t ra, const BitMatrix& b, std::size_t rb);

BitMatrix transpose(const BitMatrix& m);

struct DiffPositions {
    std::vector<std::uint32_t> only_a;  // a=1, b=0
    std::vector<std::uint32_t> only_b;  // a=0, b=1
};

// Splits the differing positions of two equal-length rows by side.
// |only_a| + |only_b| always equals the Hamming distance.
DiffPositions diff_positions(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

}  // namespace capsp
