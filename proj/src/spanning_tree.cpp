// SPDX-License-Identifier: Apache-2.0
#include "capsp/spanning_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "capsp/rng.hpp"

namespace capsp {

SpanningTree exact_mst(const BitMatrix& rows) {
    const std::size_t n = rows.rows();
    if (n == 0) throw std::invalid_argument("exact_mst: empty matrix");
    SpanningTree tree;
    tree.node_count = n;
    if (n == 1) return tree;

    std::vector<char> in_tree(n, 0);
    std::vector<std::uint64_t> best(n, std::numeric_limits<std::uint64_t>::max());
    std::vector<std::uint32_t> parent(n, 0);
    in_tree[0] = 1;
    for (std::size_t j = 1; j < n; ++j) best[j] = hamming_distance(rows, 0, j);

    for (std::size_t added = 1; added < n; ++added) {
        std::size_t pick = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (!in_tree[j] && (pick == n || best[j] < best[pick])) pick = j;
        }
        in_tree[pick] = 1;
        tree.edges.push_back({parent[pick], static_cast<std::uint32_t>(pick), static_cast<double>(best[pick])});
        tree.cost += static_cast<double>(best[pick]);
        for (std::size_t j = 0; j < n; ++j) {
            if (in_tree[j]) continue;
            std::uint64_t d = hamming_distance(rows, pick, j);
            if (d < best[j]) {
                best[j] = d;
                parent[j] = static_cast<std::uint32_t>(pick);
            }
        }
    }
    return tree;
}

SpanningTree euclidean_mst(std::span<const Point2> points) {
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("euclidean_mst: empty point set");
    SpanningTree tree;
    tree.node_count = n;
    if (n == 1) return tree;

    auto sq = [&](std::size_t a, std::size_t b) {
        double dx = points[a].x - points[b].x;
        double dy = points[a].y - points[b].y;
        return dx * dx + dy * dy;
    };

    std::vector<char> in_tree(n, 0);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<std::uint32_t> parent(n, 0);
    in_tree[0] = 1;
    for (std::size_t j = 1; j < n; ++j) best[j] = sq(0, j);

    for (std::size_t added = 1; added < n; ++added) {
        std::size_t pick = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (!in_tree[j] && (pick == n || best[j] < best[pick])) pick = j;
        }
        in_tree[pick] = 1;
        double len = std::sqrt(best[pick]);
        tree.edges.push_back({parent[pick], static_cast<std::uint32_t>(pick), len});
        tree.cost += len;
        for (std::size_t j = 0; j < n; ++j) {
            if (in_tree[j]) continue;
            double d = sq(pick, j);
            if (d < best[j]) {
                best[j] = d;
                parent[j] = static_cast<std::uint32_t>(pick);
            }
        }
    }
    return tree;
}

LshParams LshParams::defaults(std::size_t n_rows, std::size_t cols, double epsilon, std::uint64_t seed) {
    LshParams p;
    p.epsilon = epsilon;
    p.seed = seed;
    double ln_n = std::log(static_cast<double>(n_rows < 2 ? 2 : n_rows));
    p.tables = static_cast<std::size_t>(std::ceil(3.0 * ln_n));
    if (p.tables < 1) p.tables = 1;
    double ratio = 1.0 + epsilon;
    if (ratio < 1.0001) ratio = 1.0001;
    for (std::uint64_t s = 1; s <= cols;) {
        p.scales.push_back(static_cast<std::uint32_t>(s));
        std::uint64_t next = static_cast<std::uint64_t>(std::ceil(static_cast<double>(s) * ratio));
        s = next > s ? next : s + 1;
    }
    for (std::uint32_t s : p.scales) {
        std::uint64_t k = static_cast<std::uint64_t>(std::ceil(static_cast<double>(cols) / (s + 1.0)));
        if (k < 1) k = 1;
        if (k > cols) k = cols;
        p.bits_per_hash.push_back(static_cast<std::uint32_t>(k));
    }
    return p;
}

void LshParams::validate(std::size_t cols) const {
    if (tables < 1) throw std::invalid_argument("LshParams: tables must be >= 1");
    if (epsilon <= 0.0) throw std::invalid_argument("LshParams: epsilon must be > 0");
    if (scales.size() != bits_per_hash.size())
        throw std::invalid_argument("LshParams: scales and bits_per_hash must align");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] > cols) throw std::invalid_argument("LshParams: scale exceeds row length");
        if (i > 0 && scales[i] <= scales[i - 1])
            throw std::invalid_argument("LshParams: scales must be strictly increasing");
        if (bits_per_hash[i] < 1 || bits_per_hash[i] > cols)
            throw std::invalid_argument("LshParams: bits_per_hash out of range");
    }
}

namespace {

std::uint64_t sampled_key(const BitMatrix& rows, std::size_t r, std::span<const std::uint32_t> positions) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::uint32_t p : positions) {
        h ^= rows.get(r, p) ? 0x2545f4914f6cdd1dULL : 0xdeadbeefULL;
        h *= 0x100000001b3ULL;
        h ^= h >> 29;
    }
    return h;
}

}  // namespace

SpanningTree approx_mst_lsh(const BitMatrix& rows, const LshParams& params) {
    const std::size_t n = rows.rows();
    if (n == 0) throw std::invalid_argument("approx_mst_lsh: empty matrix");
    params.validate(rows.cols());
    SpanningTree tree;
    tree.node_count = n;
    if (n == 1) return tree;

    const std::size_t n_scales = params.scales.size();
    const std::size_t L = params.tables;
    std::mt19937_64 rng = named_stream(params.seed, "lsh-bit-sampling");
    std::uniform_int_distribution<std::uint32_t> pos_dist(0, static_cast<std::uint32_t>(rows.cols() ? rows.cols() - 1 : 0));

    // positions[s][l]: sampled bit positions; buckets[s][l]: key -> rows.
    std::vector<std::vector<std::vector<std::uint32_t>>> positions(n_scales);
    std::vector<std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>>> buckets(n_scales);
    for (std::size_t s = 0; s < n_scales; ++s) {
        positions[s].resize(L);
        buckets[s].resize(L);
        for (std::size_t l = 0; l < L; ++l) {
            positions[s][l].resize(params.bits_per_hash[s]);
            for (auto& p : positions[s][l]) p = pos_dist(rng);
            for (std::size_t r = 0; r < n; ++r)
                buckets[s][l][sampled_key(rows, r, positions[s][l])].push_back(static_cast<std::uint32_t>(r));
        }
    }

    std::vector<char> in_tree(n, 0);
    in_tree[0] = 1;
    std::size_t remaining = n - 1;

    // Pending queries keyed by (scale index, tree row): always serve the
    // smallest scale available, which approximates Prim's closest-pair choice.
    std::set<std::pair<std::uint32_t, std::uint32_t>> pending;
    pending.insert({0, 0});

    auto best_candidate_at = [&](std::uint32_t r, std::uint32_t s) {
        std::uint64_t best_d = std::numeric_limits<std::uint64_t>::max();
        std::uint32_t best_row = 0;
        bool found = false;
        for (std::size_t l = 0; l < L; ++l) {
            auto it = buckets[s][l].find(sampled_key(rows, r, positions[s][l]));
            if (it == buckets[s][l].end()) continue;
            auto& vec = it->second;
            for (std::size_t i = 0; i < vec.size();) {
                std::uint32_t cand = vec[i];
                if (in_tree[cand]) {  // lazy deletion
                    vec[i] = vec.back();
                    vec.pop_back();
                    continue;
                }
                std::uint64_t d = hamming_distance(rows, r, cand);
                if (!found || d < best_d || (d == best_d && cand < best_row)) {
                    best_d = d;
                    best_row = cand;
                    found = true;
                }
                ++i;
            }
        }
        return std::tuple<bool, std::uint64_t, std::uint32_t>{found, best_d, best_row};
    };

    auto link = [&](std::uint32_t u, std::uint32_t v, std::uint64_t d) {
        tree.edges.push_back({u, v, static_cast<double>(d)});
        tree.cost += static_cast<double>(d);
        in_tree[v] = 1;
        --remaining;
        pending.insert({0, v});
    };

    while (remaining > 0) {
        if (pending.empty()) {
            // LSH missed everywhere; fall back to one exact Prim step so the
            // result is always a spanning tree.
            std::uint64_t best_d = std::numeric_limits<std::uint64_t>::max();
            std::uint32_t bu = 0, bv = 0;
            for (std::uint32_t u = 0; u < n; ++u) {
                if (!in_tree[u]) continue;
                for (std::uint32_t v = 0; v < n; ++v) {
                    if (in_tree[v]) continue;
                    std::uint64_t d = hamming_distance(rows, u, v);
                    if (d < best_d) {
                        best_d = d;
                        bu = u;
                        bv = v;
                    }
                }
            }
            link(bu, bv, best_d);
            continue;
        }
        auto [s, r] = *pending.begin();
        pending.erase(pending.begin());
        auto [found, d, cand] = best_candidate_at(r, s);
        if (found) {
            link(r, cand, d);
            pending.insert({s, r});  // same bucket bank may hold more neighbors
        } else if (s + 1 < n_scales) {
            pending.insert({s + 1, r});
        }
        // else: r exhausted every scale and is dropped.
    }
    return tree;
}

TraversalPlan compile_traversal(const SpanningTree& tree, const BitMatrix& rows) {
    const std::size_t n = rows.rows();
    if (tree.node_count != n)
        throw std::invalid_argument("compile_traversal: tree/matrix size mismatch");
    TraversalPlan plan;
    plan.node_count = n;
    plan.start = 0;
    if (n == 0) throw std::invalid_argument("compile_traversal: empty matrix");
    plan.start_positions = rows.row_positions(0);
    if (n == 1) return plan;
    if (tree.edges.size() != n - 1)
        throw std::invalid_argument("compile_traversal: not a spanning tree (edge count)");

    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& e : tree.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<char> visited(n, 0);
    visited[0] = 1;
    std::size_t visit_count = 1;
    std::size_t last_new_step = 0;

    struct Frame {
        std::uint32_t node;
        std::uint32_t parent;
        std::size_t next_child = 0;
    };
    std::vector<Frame> stack;
    stack.push_back({0, 0});

    while (!stack.empty()) {
        Frame& f = stack.back();
        bool descended = false;
        while (f.next_child < adj[f.node].size()) {
            std::uint32_t c = adj[f.node][f.next_child++];
            if (visited[c]) continue;
            DiffPositions dp = diff_positions(rows.row(c), rows.row(f.node));
            plan.steps.push_back({f.node, c, std::move(dp.only_a), std::move(dp.only_b)});
            visited[c] = 1;
            ++visit_count;
            last_new_step = plan.steps.size();
            stack.push_back({c, f.node});
            descended = true;
            break;
        }
        if (descended) continue;
        std::uint32_t node = f.node;
        std::uint32_t parent = f.parent;
        stack.pop_back();
        if (!stack.empty()) {
            DiffPositions dp = diff_positions(rows.row(parent), rows.row(node));
            plan.steps.push_back({node, parent, std::move(dp.only_a), std::move(dp.only_b)});
        }
    }
    if (visit_count != n)
        throw std::invalid_argument("compile_traversal: tree does not span the rows");
    plan.steps.resize(last_new_step);  // trailing backtracks carry no new node
    return plan;
}

}  // namespace capsp
