// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "capsp/bit_matrix.hpp"
#include "capsp/scalar_matrix.hpp"
#include "capsp/spanning_tree.hpp"

namespace capsp {

// Ordered pool of (value, index) pairs keyed lexicographically, with
// delete-by-index. Backed by a hierarchical bitset over the rank order of the
// fixed value array, so insert/erase/min cost a handful of word operations.
// min() ties break toward the smaller index, which makes witnesses
// deterministic.
class OrderedPool {
  public:
    explicit OrderedPool(std::span<const double> values);

    void insert(std::size_t k);
    void erase(std::size_t k);
    bool empty() const { return size_ == 0; }
    std::size_t size() const { return size_; }

    // Smallest (value, index) pair; pool must be nonempty.
    std::pair<double, std::uint32_t> min() const;

    std::uint64_t op_count() const { return ops_; }

  private:
    void set_bit(std::size_t r);
    void clear_bit(std::size_t r);

    std::span<const double> values_;
    std::vector<std::uint32_t> order_;    // rank -> index
    std::vector<std::uint32_t> rank_of_;  // index -> rank
    std::vector<std::vector<std::uint64_t>> levels_;
    std::size_t size_ = 0;
    std::uint64_t ops_ = 0;
};

struct MixedProductResult {
    ScalarMatrix C;
    WitnessMatrix W;
    std::uint64_t op_count = 0;               // total pool inserts + deletes
    std::vector<std::uint64_t> per_row_ops;   // pool operations per sweep
};

// Right product: C[i,j] = min{A[i,k] : B[k,j]=1} (+inf when empty), W the
// index attaining it. `plan` must be a traversal of the columns of B, i.e.
// compiled against transpose(B).
MixedProductResult mixed_right(const ScalarMatrix& A, const BitMatrix& B, const TraversalPlan& plan,
                               unsigned threads = 1);

// Left product: C[i,j] = min{A[k,j] : B[i,k]=1}. `plan` must be a traversal
// of the rows of B.
MixedProductResult mixed_left(const BitMatrix& B, const ScalarMatrix& A, const TraversalPlan& plan,
                              unsigned threads = 1);

// Brute-force oracles with the same (value, index) tie rule; op_count = 0.
MixedProductResult mixed_right_naive(const ScalarMatrix& A, const BitMatrix& B);
MixedProductResult mixed_left_naive(const BitMatrix& B, const ScalarMatrix& A);

}  // namespace capsp
