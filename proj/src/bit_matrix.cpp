// SPDX-License-Identifier: Apache-2.0
#include "capsp/bit_matrix.hpp"

#include <bit>
#include <stdexcept>

namespace capsp {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64), bits_(rows * words_per_row_, 0) {}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
    std::uint64_t& word = bits_[r * words_per_row_ + (c >> 6)];
    std::uint64_t mask = 1ULL << (c & 63);
    if (value)
        word |= mask;
    else
        word &= ~mask;
}

std::vector<std::uint32_t> BitMatrix::row_positions(std::size_t r) const {
    std::vector<std::uint32_t> out;
    auto words = row(r);
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t x = words[w];
        while (x) {
            out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(x)));
            x &= x - 1;
        }
    }
    return out;
}

std::vector<std::uint32_t> BitMatrix::column_positions(std::size_t c) const {
    std::vector<std::uint32_t> out;
    for (std::size_t r = 0; r < rows_; ++r)
        if (get(r, c)) out.push_back(static_cast<std::uint32_t>(r));
    return out;
}

std::uint64_t hamming_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: row length mismatch");
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::popcount(a[i] ^ b[i]);
    return d;
}

std::uint64_t hamming_distance(const BitMatrix& m, std::size_t r1, std::size_t r2) {
    return hamming_distance(m.row(r1), m.row(r2));
}

std::uint64_t hamming_distance(const BitMatrix& a, std::size_t ra, const BitMatrix& b, std::size_t rb) {
    if (a.cols() != b.cols()) throw std::invalid_argument("hamming_distance: row length mismatch");
    return hamming_distance(a.row(ra), b.row(rb));
}

BitMatrix transpose(const BitMatrix& m) {
    BitMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto words = m.row(r);
        for (std::size_t w = 0; w < words.size(); ++w) {
            std::uint64_t x = words[w];
            while (x) {
                std::size_t c = w * 64 + std::countr_zero(x);
                out.set(c, r, true);
                x &= x - 1;
            }
        }
    }
    return out;
}

DiffPositions diff_positions(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("diff_positions: row length mismatch");
    DiffPositions out;
    for (std::size_t w = 0; w < a.size(); ++w) {
        std::uint64_t d = a[w] ^ b[w];
        std::uint64_t da = d & a[w];
        std::uint64_t db = d & b[w];
        while (da) {
            out.only_a.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(da)));
            da &= da - 1;
        }
        while (db) {
            out.only_b.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(db)));
            db &= db - 1;
        }
    }
    return out;
}

}  // namespace capsp
