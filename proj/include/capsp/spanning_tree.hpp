// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "capsp/bit_matrix.hpp"

namespace capsp {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct TreeEdge {
    std::uint32_t u = 0;
    std::uint32_t v = 0;
    double cost = 0.0;
};

// Spanning tree over row indices of a matrix (or over points). Edge costs are
// Hamming distances for row trees and Euclidean lengths for point trees.
struct SpanningTree {
    std::size_t node_count = 0;
    std::vector<TreeEdge> edges;
    double cost = 0.0;
};

// One move of the tree walk. `added` are the positions set in `to` but not in
// `from`; `removed` the positions set in `from` but not in `to`. Applying
// them to the bit pattern of `from` reconstructs the pattern of `to`.
struct TraversalStep {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    std::vector<std::uint32_t> added;
    std::vector<std::uint32_t> removed;
};

// Euler-style walk of a spanning tree: consecutive steps are chained, every
// node is visited, and each tree edge is used at most twice.
struct TraversalPlan {
    std::uint32_t start = 0;
    std::size_t node_count = 0;
    std::vector<std::uint32_t> start_positions;  // set bits of the start row
    std::vector<TraversalStep> steps;

    std::uint64_t total_diff() const {
        std::uint64_t s = 0;
        for (const auto& st : steps) s += st.added.size() + st.removed.size();
        return s;
    }
};

// Bit-sampling LSH configuration. One bank of `tables` hash tables is kept
// per distance scale; table i of a scale hashes `bits_per_hash` sampled
// positions of each row.
struct LshParams {
    double epsilon = 1.0;
    std::size_t tables = 8;
    std::vector<std::uint32_t> scales;         // strictly increasing distance thresholds
    std::vector<std::uint32_t> bits_per_hash;  // aligned with scales
    std::uint64_t seed = 0;

    static LshParams defaults(std::size_t n_rows, std::size_t cols, double epsilon, std::uint64_t seed);
    void validate(std::size_t cols) const;
};

// Hamming-metric minimum spanning tree of the matrix rows, quadratic Prim.
// Ties on distance break toward the smaller row index.
SpanningTree exact_mst(const BitMatrix& rows);

// Monte Carlo approximate Hamming MST: Prim grown through per-scale LSH
// tables with lazy deletion. Always returns a valid spanning tree; the cost
// approaches the minimum as `tables` grows.
SpanningTree approx_mst_lsh(const BitMatrix& rows, const LshParams& params);

// Exact Euclidean MST, quadratic Prim over squared distances.
SpanningTree euclidean_mst(std::span<const Point2> points);

// Compiles a spanning tree of the matrix rows into a depth-first Euler walk
// from node 0, with per-step symmetric-difference position sets. Trailing
// backtrack steps after the last first-visit are dropped.
TraversalPlan compile_traversal(const SpanningTree& tree, const BitMatrix& rows);

}  // namespace capsp
