// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "capsp/bit_matrix.hpp"
#include "capsp/mixed_product.hpp"
#include "capsp/scalar_matrix.hpp"
#include "capsp/spanning_tree.hpp"

namespace capsp {

// Directed graph with nonnegative finite vertex weights. The distance of a
// path counts every vertex on it, both endpoints included; the distance from
// a vertex to itself is 0 by convention. Self-loops are permitted but never
// affect distances.
struct VertexWeightedDigraph {
    BitMatrix adjacency;
    std::vector<double> weights;

    std::size_t n() const { return weights.size(); }
    static VertexWeightedDigraph make(BitMatrix adjacency, std::vector<double> weights);
};

// Same graph with edges split into q weight classes; edge (u,v) of class i
// adds class_costs[i] to any path using it. Class adjacencies are disjoint.
struct EdgeClassDigraph {
    std::vector<BitMatrix> class_adjacency;
    std::vector<double> class_costs;
    std::vector<double> vertex_weights;

    std::size_t n() const { return vertex_weights.size(); }
    std::size_t q() const { return class_costs.size(); }
    static EdgeClassDigraph make(std::vector<BitMatrix> class_adjacency, std::vector<double> class_costs,
                                 std::vector<double> vertex_weights);
};

enum class Side { kRight, kLeft };
enum class Direction { kForward, kReverse };
enum class MstMode { kExact, kLsh, kEuclid };

// Distances restricted to paths of at most `horizon` edges, together with
// the bookkeeping needed to reconstruct one shortest path per improved pair:
// the last improving witness vertex, the edge count of the last strict
// improvement (level), and the edge class that achieved it.
struct HorizonState {
    std::uint32_t horizon = 1;
    Side side = Side::kRight;
    ScalarMatrix D;
    WitnessMatrix W;                      // present iff level >= 2
    std::vector<std::int32_t> level;      // n*n; 0 on the diagonal / unreached, 1 for direct edges
    std::vector<std::int32_t> edge_class; // n*n; class of the last improvement, -1 if none
    std::size_t last_improvements = 0;
    std::uint64_t op_count = 0;           // cumulative mixed-product pool operations

    std::int32_t level_at(std::size_t v, std::size_t u) const { return level[v * D.cols() + u]; }
    std::int32_t class_at(std::size_t v, std::size_t u) const { return edge_class[v * D.cols() + u]; }
};

struct BridgingSet {
    std::vector<std::uint32_t> vertices;
};

struct ApspStats {
    Side side = Side::kRight;
    std::uint32_t t = 2;
    std::uint32_t horizon_reached = 1;
    double tree_cost = 0.0;
    std::optional<double> tree_cost_right;
    std::optional<double> tree_cost_left;
    std::size_t long_path_sets = 0;
    std::size_t bridging_size = 0;
    std::uint64_t op_count = 0;
};

struct ApspResult {
    ScalarMatrix D;
    BridgingSet bridging;
    std::uint32_t t = 2;
    ApspStats stats;
};

struct ApspConfig {
    MstMode mst = MstMode::kExact;
    std::optional<Side> side;             // default: the cheaper of the two trees
    std::optional<std::uint32_t> t_override;
    std::optional<double> epsilon;        // LSH knob; default max(1, ceil(log2 n) - 1)
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::optional<SpanningTree> row_tree; // precomputed tree over adjacency rows; forces the left side
};

// D^1: zeros on the diagonal, w(v)+w(u) on edges, +inf elsewhere.
HorizonState init_horizon(const VertexWeightedDigraph& g);
HorizonState init_horizon(const EdgeClassDigraph& g);

// One horizon extension via a mixed product of D with the adjacency matrix
// (right side) or of the adjacency matrix with D (left side).
HorizonState horizon_step(const HorizonState& state, const VertexWeightedDigraph& g,
                          const TraversalPlan& plan, Side side, unsigned threads = 1);
HorizonState horizon_step(const HorizonState& state, const EdgeClassDigraph& g,
                          std::span<const TraversalPlan> plans, Side side, unsigned threads = 1);

// All vertex sets of shortest paths recorded at level t-1, each of exactly t
// vertices, reconstructed by backtracking the witness matrix. Verifies chain
// length and path weight along the way.
std::vector<std::vector<std::uint32_t>> extract_long_paths(const HorizonState& state, std::uint32_t t,
                                                           const VertexWeightedDigraph& g);
std::vector<std::vector<std::uint32_t>> extract_long_paths(const HorizonState& state, std::uint32_t t,
                                                           const EdgeClassDigraph& g);

// Greedy hitting set: every input set (size exactly l) intersects the result.
// The output is verified against the inputs before returning.
BridgingSet hitting_set(const std::vector<std::vector<std::uint32_t>>& sets, std::size_t n, std::size_t l);

// Single-source vertex-weighted distances; row[u] = dist(source,u) forward,
// dist(u,source) reverse, with row[source] = 0.
std::vector<double> dijkstra_vertex_weighted(const VertexWeightedDigraph& g, std::uint32_t source,
                                             Direction direction);

ApspResult apsp(const VertexWeightedDigraph& g, const ApspConfig& config = {});
ApspResult apsp_bounded_edge_classes(const EdgeClassDigraph& g, const ApspConfig& config = {});

// Reachability closure (diagonal set): apsp with all-zero weights, finite
// distance <=> reachable.
BitMatrix transitive_closure(const BitMatrix& b, const ApspConfig& config = {});

}  // namespace capsp
