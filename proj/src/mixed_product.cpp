// SPDX-License-Identifier: Apache-2.0
#include "capsp/mixed_product.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <numeric>
#include <stdexcept>

#include "capsp/parallel.hpp"

namespace capsp {

OrderedPool::OrderedPool(std::span<const double> values)
    : values_(values), order_(values.size()), rank_of_(values.size()) {
    std::iota(order_.begin(), order_.end(), 0u);
    std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (values_[a] != values_[b]) return values_[a] < values_[b];
        return a < b;
    });
    for (std::size_t r = 0; r < order_.size(); ++r) rank_of_[order_[r]] = static_cast<std::uint32_t>(r);
    std::size_t sz = values.size();
    while (true) {
        std::size_t words = (sz + 63) / 64;
        levels_.emplace_back(words, 0);
        if (words <= 1) break;
        sz = words;
    }
}

void OrderedPool::set_bit(std::size_t r) {
    for (auto& level : levels_) {
        std::uint64_t& word = level[r >> 6];
        std::uint64_t mask = 1ULL << (r & 63);
        bool had = word != 0;
        word |= mask;
        if (had) break;
        r >>= 6;
    }
}

void OrderedPool::clear_bit(std::size_t r) {
    for (auto& level : levels_) {
        std::uint64_t& word = level[r >> 6];
        word &= ~(1ULL << (r & 63));
        if (word != 0) break;
        r >>= 6;
    }
}

void OrderedPool::insert(std::size_t k) {
    assert(!(levels_[0][rank_of_[k] >> 6] >> (rank_of_[k] & 63) & 1ULL));
    set_bit(rank_of_[k]);
    ++size_;
    ++ops_;
}

void OrderedPool::erase(std::size_t k) {
    assert(levels_[0][rank_of_[k] >> 6] >> (rank_of_[k] & 63) & 1ULL);
    clear_bit(rank_of_[k]);
    --size_;
    ++ops_;
}

std::pair<double, std::uint32_t> OrderedPool::min() const {
    assert(size_ > 0);
    std::size_t idx = 0;
    for (std::size_t l = levels_.size(); l-- > 0;) {
        idx = idx * 64 + static_cast<std::size_t>(std::countr_zero(levels_[l][idx]));
    }
    std::uint32_t k = order_[idx];
    return {values_[k], k};
}

namespace {

// Shared sweep: for each outer index, walk the plan maintaining the pool of
// candidate positions and record (min value, min index) at every node.
template <class ValuesFn>
MixedProductResult sweep(std::size_t n_outer, const TraversalPlan& plan, ValuesFn values_for,
                         unsigned threads) {
    MixedProductResult res;
    res.C = ScalarMatrix(n_outer, plan.node_count, kInf);
    res.W = WitnessMatrix(n_outer, plan.node_count);
    res.per_row_ops.assign(n_outer, 0);

    parallel_for(n_outer, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> scratch;
        for (std::size_t outer = begin; outer < end; ++outer) {
            std::span<const double> vals = values_for(outer, scratch);
            OrderedPool pool(vals);
            auto record = [&](std::uint32_t node) {
                if (pool.empty()) return;  // C stays +inf, W stays absent
                auto [v, k] = pool.min();
                res.C.set(outer, node, v);
                res.W.set(outer, node, static_cast<std::int32_t>(k));
            };
            for (std::uint32_t k : plan.start_positions)
                if (vals[k] != kInf) pool.insert(k);
            record(plan.start);
            for (const auto& step : plan.steps) {
                for (std::uint32_t k : step.added)
                    if (vals[k] != kInf) pool.insert(k);
                for (std::uint32_t k : step.removed)
                    if (vals[k] != kInf) pool.erase(k);
                record(step.to);
            }
            res.per_row_ops[outer] = pool.op_count();
        }
    });
    for (std::uint64_t c : res.per_row_ops) res.op_count += c;
    return res;
}

void check_plan_against(const BitMatrix& B, const TraversalPlan& plan, bool over_columns) {
    std::size_t nodes = over_columns ? B.cols() : B.rows();
    if (plan.node_count != nodes)
        throw std::invalid_argument("mixed product: plan does not span the matrix");
    std::vector<std::uint32_t> start_bits =
        over_columns ? B.column_positions(plan.start) : B.row_positions(plan.start);
    if (start_bits != plan.start_positions)
        throw std::invalid_argument("mixed product: plan start pattern does not match the matrix");
}

}  // namespace

MixedProductResult mixed_right(const ScalarMatrix& A, const BitMatrix& B, const TraversalPlan& plan,
                               unsigned threads) {
    if (A.cols() != B.rows()) throw std::invalid_argument("mixed_right: dimension mismatch");
    check_plan_against(B, plan, /*over_columns=*/true);
    return sweep(A.rows(), plan,
                 [&](std::size_t outer, std::vector<double>&) { return A.row_span(outer); }, threads);
}

MixedProductResult mixed_left(const BitMatrix& B, const ScalarMatrix& A, const TraversalPlan& plan,
                              unsigned threads) {
    if (B.cols() != A.rows()) throw std::invalid_argument("mixed_left: dimension mismatch");
    check_plan_against(B, plan, /*over_columns=*/false);
    // Sweep per column of A over the rows of B, then flip the result back.
    MixedProductResult core = sweep(
        A.cols(), plan,
        [&](std::size_t outer, std::vector<double>& scratch) {
            scratch.resize(A.rows());
            for (std::size_t k = 0; k < A.rows(); ++k) scratch[k] = A(k, outer);
            return std::span<const double>(scratch);
        },
        threads);
    MixedProductResult res;
    res.C = transpose(core.C);
    res.W = transpose(core.W);
    res.op_count = core.op_count;
    res.per_row_ops = std::move(core.per_row_ops);
    return res;
}

MixedProductResult mixed_right_naive(const ScalarMatrix& A, const BitMatrix& B) {
    if (A.cols() != B.rows()) throw std::invalid_argument("mixed_right_naive: dimension mismatch");
    MixedProductResult res;
    res.C = ScalarMatrix(A.rows(), B.cols(), kInf);
    res.W = WitnessMatrix(A.rows(), B.cols());
    for (std::size_t j = 0; j < B.cols(); ++j) {
        std::vector<std::uint32_t> members = B.column_positions(j);
        for (std::size_t i = 0; i < A.rows(); ++i) {
            double best = kInf;
            std::int32_t bk = WitnessMatrix::kAbsent;
            for (std::uint32_t k : members) {
                if (A(i, k) < best) {
                    best = A(i, k);
                    bk = static_cast<std::int32_t>(k);
                }
            }
            if (bk != WitnessMatrix::kAbsent) {
                res.C.set(i, j, best);
                res.W.set(i, j, bk);
            }
        }
    }
    return res;
}

MixedProductResult mixed_left_naive(const BitMatrix& B, const ScalarMatrix& A) {
    if (B.cols() != A.rows()) throw std::invalid_argument("mixed_left_naive: dimension mismatch");
    MixedProductResult res;
    res.C = ScalarMatrix(B.rows(), A.cols(), kInf);
    res.W = WitnessMatrix(B.rows(), A.cols());
    for (std::size_t i = 0; i < B.rows(); ++i) {
        std::vector<std::uint32_t> members = B.row_positions(i);
        for (std::size_t j = 0; j < A.cols(); ++j) {
            double best = kInf;
            std::int32_t bk = WitnessMatrix::kAbsent;
            for (std::uint32_t k : members) {
                if (A(k, j) < best) {
                    best = A(k, j);
                    bk = static_cast<std::int32_t>(k);
                }
            }
            if (bk != WitnessMatrix::kAbsent) {
                res.C.set(i, j, best);
                res.W.set(i, j, bk);
            }
        }
    }
    return res;
}

}  // namespace capsp
