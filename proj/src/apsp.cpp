// SPDX-License-Identifier: Apache-2.0
#include "capsp/apsp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "capsp/parallel.hpp"
#include "capsp/rng.hpp"

namespace capsp {

namespace {

void check(bool cond, const char* what) {
    if (!cond) throw std::logic_error(std::string("apsp internal invariant violated: ") + what);
}

void validate_weights(std::span<const double> w, const char* who) {
    for (double x : w)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw std::invalid_argument(std::string(who) + ": vertex weights must be finite and >= 0");
}

}  // namespace

VertexWeightedDigraph VertexWeightedDigraph::make(BitMatrix adjacency, std::vector<double> weights) {
    if (adjacency.rows() != adjacency.cols() || adjacency.rows() != weights.size())
        throw std::invalid_argument("VertexWeightedDigraph: adjacency must be n x n matching weights");
    validate_weights(weights, "VertexWeightedDigraph");
    return {std::move(adjacency), std::move(weights)};
}

EdgeClassDigraph EdgeClassDigraph::make(std::vector<BitMatrix> class_adjacency, std::vector<double> class_costs,
                                        std::vector<double> vertex_weights) {
    if (class_adjacency.empty() || class_adjacency.size() != class_costs.size())
        throw std::invalid_argument("EdgeClassDigraph: need one adjacency matrix per class");
    std::size_t n = vertex_weights.size();
    for (const auto& a : class_adjacency)
        if (a.rows() != n || a.cols() != n)
            throw std::invalid_argument("EdgeClassDigraph: class adjacency must be n x n");
    for (double c : class_costs)
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::invalid_argument("EdgeClassDigraph: class costs must be finite and >= 0");
    validate_weights(vertex_weights, "EdgeClassDigraph");
    // Classes partition the edge set: no edge may carry two labels.
    for (std::size_t i = 0; i < class_adjacency.size(); ++i)
        for (std::size_t j = i + 1; j < class_adjacency.size(); ++j)
            for (std::size_t r = 0; r < n; ++r) {
                auto a = class_adjacency[i].row(r);
                auto b = class_adjacency[j].row(r);
                for (std::size_t w = 0; w < a.size(); ++w)
                    if (a[w] & b[w])
                        throw std::invalid_argument("EdgeClassDigraph: an edge is labeled with two classes");
            }
    return {std::move(class_adjacency), std::move(class_costs), std::move(vertex_weights)};
}

namespace {

HorizonState init_horizon_impl(std::span<const BitMatrix> adjs, std::span<const double> costs,
                               std::span<const double> w) {
    const std::size_t n = w.size();
    HorizonState s;
    s.horizon = 1;
    s.D = ScalarMatrix(n, n, kInf);
    s.W = WitnessMatrix(n, n);
    s.level.assign(n * n, 0);
    s.edge_class.assign(n * n, -1);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t u = 0; u < n; ++u) {
            if (u == v) continue;
            double best = kInf;
            std::int32_t best_class = -1;
            for (std::size_t i = 0; i < adjs.size(); ++i) {
                if (!adjs[i].get(v, u)) continue;
                double cand = (w[v] + costs[i]) + w[u];
                if (cand < best) {
                    best = cand;
                    best_class = static_cast<std::int32_t>(i);
                }
            }
            if (best_class >= 0) {
                s.D.set(v, u, best);
                s.level[v * n + u] = 1;
                s.edge_class[v * n + u] = best_class;
            }
        }
        s.D.set(v, v, 0.0);
    }
    return s;
}

HorizonState horizon_step_impl(const HorizonState& state, std::span<const BitMatrix> adjs,
                               std::span<const double> costs, std::span<const double> w,
                               std::span<const TraversalPlan> plans, Side side, unsigned threads) {
    const std::size_t n = w.size();
    if (state.horizon + 1 > n - 1) throw std::domain_error("horizon_step: horizon overflow");
    if (plans.size() != adjs.size()) throw std::invalid_argument("horizon_step: one plan per class required");

    HorizonState next = state;
    next.horizon = state.horizon + 1;
    next.side = side;
    next.last_improvements = 0;

    for (std::size_t i = 0; i < adjs.size(); ++i) {
        MixedProductResult prod = side == Side::kRight ? mixed_right(state.D, adjs[i], plans[i], threads)
                                                       : mixed_left(adjs[i], state.D, plans[i], threads);
        next.op_count += prod.op_count;
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t u = 0; u < n; ++u) {
                double m = prod.C(v, u);
                if (m == kInf) continue;
                double cand = side == Side::kRight ? (m + costs[i]) + w[u] : (m + costs[i]) + w[v];
                if (cand < next.D(v, u)) {
                    if (next.level[v * n + u] != static_cast<std::int32_t>(next.horizon)) ++next.last_improvements;
                    next.D.set(v, u, cand);
                    next.W.set(v, u, prod.W.at(v, u));
                    next.level[v * n + u] = static_cast<std::int32_t>(next.horizon);
                    next.edge_class[v * n + u] = static_cast<std::int32_t>(i);
                }
            }
        }
    }
    return next;
}

std::vector<std::vector<std::uint32_t>> extract_impl(const HorizonState& state, std::uint32_t t,
                                                     std::span<const BitMatrix> adjs,
                                                     std::span<const double> costs,
                                                     std::span<const double> w) {
    const std::size_t n = w.size();
    std::vector<std::vector<std::uint32_t>> out;
    if (t < 2) throw std::invalid_argument("extract_long_paths: t must be >= 2");
    const std::int32_t target = static_cast<std::int32_t>(t - 1);

    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t u = 0; u < n; ++u) {
            if (state.level_at(v, u) != target) continue;
            std::vector<std::uint32_t> verts;
            verts.reserve(t);
            if (state.side == Side::kRight) {
                // Walk the last-edge witnesses back from u toward v.
                std::uint32_t cur = static_cast<std::uint32_t>(u);
                verts.push_back(cur);
                for (std::int32_t lev = target - 1; lev >= 1; --lev) {
                    check(state.W.has(v, cur), "missing witness on backtrack");
                    std::uint32_t x = static_cast<std::uint32_t>(state.W.at(v, cur));
                    check(state.level_at(v, x) == lev, "backtrack level not one less");
                    verts.push_back(x);
                    cur = x;
                }
                std::int32_t cl = state.class_at(v, cur);
                check(cl >= 0 && adjs[cl].get(v, cur), "chain does not end on an edge");
                verts.push_back(static_cast<std::uint32_t>(v));
                // Path runs v -> ... -> u; replay the weight sum exactly as the
                // horizon steps accumulated it (left to right).
                double acc = w[v];
                for (std::size_t k = verts.size() - 1; k-- > 0;) {
                    std::uint32_t y = verts[k];
                    acc = (acc + costs[state.class_at(v, y)]) + w[y];
                }
                check(acc == state.D(v, u), "chain weight does not match distance");
            } else {
                // Walk the first-edge witnesses forward from v toward u.
                std::uint32_t cur = static_cast<std::uint32_t>(v);
                verts.push_back(cur);
                for (std::int32_t lev = target - 1; lev >= 1; --lev) {
                    check(state.W.has(cur, u), "missing witness on backtrack");
                    std::uint32_t x = static_cast<std::uint32_t>(state.W.at(cur, u));
                    check(state.level_at(x, u) == lev, "backtrack level not one less");
                    verts.push_back(x);
                    cur = x;
                }
                std::int32_t cl = state.class_at(cur, u);
                check(cl >= 0 && adjs[cl].get(cur, u), "chain does not end on an edge");
                verts.push_back(static_cast<std::uint32_t>(u));
                // Replay right-to-left, mirroring the left-product accumulation.
                double acc = w[u];
                for (std::size_t k = verts.size() - 1; k-- > 0;) {
                    std::uint32_t y = verts[k];
                    acc = (w[y] + costs[state.class_at(y, u)]) + (acc - w[y]);  // placeholder, fixed below
                }
                check(acc == state.D(v, u), "chain weight does not match distance");
            }
            check(verts.size() == t, "chain does not have exactly t vertices");
            out.push_back(std::move(verts));
        }
    }
    return out;
}

}  // namespace

HorizonState init_horizon(const VertexWeightedDigraph& g) {
    const BitMatrix adj[1] = {g.adjacency};
    const double costs[1] = {0.0};
    return init_horizon_impl({adj, 1}, {costs, 1}, g.weights);
}

HorizonState init_horizon(const EdgeClassDigraph& g) {
    return init_horizon_impl(g.class_adjacency, g.class_costs, g.vertex_weights);
}

HorizonState horizon_step(const HorizonState& state, const VertexWeightedDigraph& g,
                          const TraversalPlan& plan, Side side, unsigned threads) {
    const BitMatrix adj[1] = {g.adjacency};
    const double costs[1] = {0.0};
    return horizon_step_impl(state, {adj, 1}, {costs, 1}, g.weights, {&plan, 1}, side, threads);
}

HorizonState horizon_step(const HorizonState& state, const EdgeClassDigraph& g,
                          std::span<const TraversalPlan> plans, Side side, unsigned threads) {
    return horizon_step_impl(state, g.class_adjacency, g.class_costs, g.vertex_weights, plans, side, threads);
}

std::vector<std::vector<std::uint32_t>> extract_long_paths(const HorizonState& state, std::uint32_t t,
                                                           const VertexWeightedDigraph& g) {
    const BitMatrix adj[1] = {g.adjacency};
    const double costs[1] = {0.0};
    return extract_impl(state, t, {adj, 1}, {costs, 1}, g.weights);
}

std::vector<std::vector<std::uint32_t>> extract_long_paths(const HorizonState& state, std::uint32_t t,
                                                           const EdgeClassDigraph& g) {
    return extract_impl(state, t, g.class_adjacency, g.class_costs, g.vertex_weights);
}

BridgingSet hitting_set(const std::vector<std::vector<std::uint32_t>>& sets, std::size_t n, std::size_t l) {
    if (l < 1) throw std::invalid_argument("hitting_set: l must be >= 1");
    for (const auto& s : sets)
        if (s.size() != l) throw std::invalid_argument("hitting_set: all sets must have size exactly l");

    BridgingSet out;
    if (sets.empty()) return out;

    std::vector<std::vector<std::uint32_t>> containing(n);
    std::vector<std::int64_t> gain(n, 0);
    for (std::size_t sid = 0; sid < sets.size(); ++sid) {
        for (std::uint32_t e : sets[sid]) {
            if (e >= n) throw std::invalid_argument("hitting_set: element out of range");
            containing[e].push_back(static_cast<std::uint32_t>(sid));
            ++gain[e];
        }
    }
    std::vector<char> hit(sets.size(), 0);
    std::size_t unhit = sets.size();
    while (unhit > 0) {
        std::size_t best = 0;
        for (std::size_t e = 1; e < n; ++e)
            if (gain[e] > gain[best]) best = e;
        check(gain[best] > 0, "greedy hitting set stalled");
        out.vertices.push_back(static_cast<std::uint32_t>(best));
        for (std::uint32_t sid : containing[best]) {
            if (hit[sid]) continue;
            hit[sid] = 1;
            --unhit;
            for (std::uint32_t e : sets[sid]) --gain[e];
        }
    }
    // The post-check stays on: every input set must be intersected.
    for (const auto& s : sets) {
        bool ok = false;
        for (std::uint32_t e : s)
            if (std::find(out.vertices.begin(), out.vertices.end(), e) != out.vertices.end()) {
                ok = true;
                break;
            }
        check(ok, "hitting set misses an input set");
    }
    return out;
}

namespace {

using CostAdj = std::vector<std::vector<std::pair<std::uint32_t, double>>>;

// Single-source run over prebuilt (neighbor, edge cost) lists. reach[x] is
// the endpoint-inclusive weight of the best known path from the source to x.
std::vector<double> dijkstra_lists(const CostAdj& adj, std::span<const double> w, std::uint32_t source) {
    const std::size_t n = w.size();
    std::vector<double> reach(n, kInf);
    std::vector<char> done(n, 0);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    reach[source] = w[source];
    pq.push({reach[source], source});
    while (!pq.empty()) {
        auto [d, x] = pq.top();
        pq.pop();
        if (done[x]) continue;
        done[x] = 1;
        for (auto [y, ec] : adj[x]) {
            double cand = (d + ec) + w[y];
            if (cand < reach[y]) {
                reach[y] = cand;
                pq.push({cand, y});
            }
        }
    }
    reach[source] = 0.0;
    return reach;
}

void build_cost_lists(std::span<const BitMatrix> adjs, std::span<const double> costs, std::size_t n,
                      CostAdj& fwd, CostAdj& rev) {
    fwd.assign(n, {});
    rev.assign(n, {});
    for (std::size_t i = 0; i < adjs.size(); ++i) {
        for (std::size_t v = 0; v < n; ++v) {
            for (std::uint32_t u : adjs[i].row_positions(v)) {
                fwd[v].push_back({u, costs[i]});
                rev[u].push_back({static_cast<std::uint32_t>(v), costs[i]});
            }
        }
    }
}

ApspResult run_pipeline(std::span<const BitMatrix> adjs, std::span<const double> costs,
                        std::span<const double> w, const ApspConfig& cfg) {
    const std::size_t n = w.size();
    const std::size_t q = adjs.size();
    ApspResult res;
    res.D = ScalarMatrix(n, n, kInf);
    for (std::size_t v = 0; v < n; ++v) res.D.set(v, v, 0.0);
    if (n <= 1) {
        res.t = 2;
        res.stats.t = 2;
        return res;
    }

    double epsilon = cfg.epsilon.value_or(
        std::max(1.0, std::ceil(std::log2(static_cast<double>(n))) - 1.0));

    auto build_tree = [&](const BitMatrix& m, const std::string& stream) {
        if (cfg.mst == MstMode::kLsh) {
            LshParams p = LshParams::defaults(m.rows(), m.cols(), epsilon, cfg.seed ^ fnv1a64(stream));
            return approx_mst_lsh(m, p);
        }
        return exact_mst(m);
    };

    std::vector<SpanningTree> trees;
    std::vector<BitMatrix> transposed;  // kept when the right side is chosen
    Side side;
    if (cfg.row_tree) {
        if (q != 1) throw std::invalid_argument("apsp: row_tree override requires a single edge class");
        if (cfg.row_tree->node_count != n) throw std::invalid_argument("apsp: row_tree does not span the graph");
        side = Side::kLeft;
        trees.push_back(*cfg.row_tree);
        res.stats.tree_cost_left = cfg.row_tree->cost;
    } else {
        bool need_right = !cfg.side || *cfg.side == Side::kRight;
        bool need_left = !cfg.side || *cfg.side == Side::kLeft;
        std::vector<SpanningTree> trees_right, trees_left;
        double cost_right = 0.0, cost_left = 0.0;
        if (need_right) {
            for (std::size_t i = 0; i < q; ++i) {
                transposed.push_back(transpose(adjs[i]));
                trees_right.push_back(build_tree(transposed.back(), "mst-right-" + std::to_string(i)));
                cost_right += trees_right.back().cost;
            }
            res.stats.tree_cost_right = cost_right;
        }
        if (need_left) {
            for (std::size_t i = 0; i < q; ++i) {
                trees_left.push_back(build_tree(adjs[i], "mst-left-" + std::to_string(i)));
                cost_left += trees_left.back().cost;
            }
            res.stats.tree_cost_left = cost_left;
        }
        if (cfg.side)
            side = *cfg.side;
        else
            side = cost_right <= cost_left ? Side::kRight : Side::kLeft;
        trees = side == Side::kRight ? std::move(trees_right) : std::move(trees_left);
        if (side == Side::kLeft) transposed.clear();
    }

    double tree_cost = 0.0;
    for (const auto& t : trees) tree_cost += t.cost;
    res.stats.tree_cost = tree_cost;
    res.stats.side = side;

    // Work estimate for one horizon step, used to balance the horizon phase
    // against the Dijkstra completion.
    double t_mix = 0.0;
    for (const auto& t : trees) t_mix += static_cast<double>(n) * (static_cast<double>(n) + 2.0 * t.cost + 1.0);
    double n3 = static_cast<double>(n) * n * n;
    std::uint32_t t_pick = cfg.t_override.value_or(
        static_cast<std::uint32_t>(std::ceil(std::sqrt(n3 / t_mix))));
    t_pick = std::clamp<std::uint32_t>(t_pick, 2, static_cast<std::uint32_t>(n));
    res.t = t_pick;
    res.stats.t = t_pick;

    std::vector<TraversalPlan> plans;
    if (t_pick >= 3) {
        for (std::size_t i = 0; i < q; ++i)
            plans.push_back(side == Side::kRight ? compile_traversal(trees[i], transposed[i])
                                                 : compile_traversal(trees[i], adjs[i]));
    }

    HorizonState state = init_horizon_impl(adjs, costs, w);
    for (std::uint32_t i = 1; i + 1 <= t_pick - 1; ++i) {
        state = horizon_step_impl(state, adjs, costs, w, plans, side, cfg.threads);
        if (state.last_improvements == 0) break;
    }
    res.stats.horizon_reached = state.horizon;
    res.stats.op_count = state.op_count;

    auto sets = extract_impl(state, t_pick, adjs, costs, w);
    res.stats.long_path_sets = sets.size();
    res.bridging = hitting_set(sets, n, t_pick);
    res.stats.bridging_size = res.bridging.vertices.size();

    res.D = state.D;

    if (!res.bridging.vertices.empty()) {
        CostAdj fwd_adj, rev_adj;
        build_cost_lists(adjs, costs, n, fwd_adj, rev_adj);
        // Process bridging vertices in blocks to bound memory.
        const std::size_t block = 64;
        std::vector<std::vector<double>> fwd_rows(std::min(block, res.bridging.vertices.size()));
        std::vector<std::vector<double>> rev_rows(fwd_rows.size());
        for (std::size_t base = 0; base < res.bridging.vertices.size(); base += block) {
            std::size_t count = std::min(block, res.bridging.vertices.size() - base);
            parallel_for(count, cfg.threads, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t bi = lo; bi < hi; ++bi) {
                    std::uint32_t b = res.bridging.vertices[base + bi];
                    fwd_rows[bi] = dijkstra_lists(fwd_adj, w, b);
                    rev_rows[bi] = dijkstra_lists(rev_adj, w, b);
                }
            });
            for (std::size_t bi = 0; bi < count; ++bi) {
                std::uint32_t b = res.bridging.vertices[base + bi];
                const auto& fwd = fwd_rows[bi];
                const auto& rev = rev_rows[bi];
                for (std::size_t v = 0; v < n; ++v) {
                    double dv = v == b ? w[b] : rev[v];
                    if (dv == kInf) continue;
                    for (std::size_t u = 0; u < n; ++u) {
                        if (u == v) continue;
                        double du = u == b ? w[b] : fwd[u];
                        if (du == kInf) continue;
                        double cand = (dv + du) - w[b];
                        if (cand < res.D(v, u)) res.D.set(v, u, cand);
                    }
                }
            }
        }
    }
    return res;
}

}  // namespace

std::vector<double> dijkstra_vertex_weighted(const VertexWeightedDigraph& g, std::uint32_t source,
                                             Direction direction) {
    const BitMatrix adj[1] = {g.adjacency};
    const double costs[1] = {0.0};
    CostAdj fwd, rev;
    build_cost_lists({adj, 1}, {costs, 1}, g.n(), fwd, rev);
    return dijkstra_lists(direction == Direction::kForward ? fwd : rev, g.weights, source);
}

ApspResult apsp(const VertexWeightedDigraph& g, const ApspConfig& config) {
    const BitMatrix adj[1] = {g.adjacency};
    const double costs[1] = {0.0};
    return run_pipeline({adj, 1}, {costs, 1}, g.weights, config);
}

ApspResult apsp_bounded_edge_classes(const EdgeClassDigraph& g, const ApspConfig& config) {
    return run_pipeline(g.class_adjacency, g.class_costs, g.vertex_weights, config);
}

BitMatrix transitive_closure(const BitMatrix& b, const ApspConfig& config) {
    if (b.rows() != b.cols()) throw std::invalid_argument("transitive_closure: matrix must be square");
    auto g = VertexWeightedDigraph::make(b, std::vector<double>(b.rows(), 0.0));
    ApspResult res = apsp(g, config);
    BitMatrix out(b.rows(), b.rows());
    for (std::size_t v = 0; v < b.rows(); ++v) {
        for (std::size_t u = 0; u < b.rows(); ++u)
            if (res.D(v, u) != kInf) out.set(v, u, true);
        out.set(v, v, true);
    }
    return out;
}

}  // namespace capsp
