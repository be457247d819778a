#pragma once

#include "uniformity/errors.hpp"
#include "uniformity/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace unif {

// Primal network simplex for the dense uncapacitated transportation
// problem. The basis is a spanning tree over sources, sinks and an
// artificial root; the leaving arc is the last blocking arc met when
// traversing the pivot cycle from the apex along the entering direction,
// which keeps the tree strongly feasible. Entering arcs come from a
// round-robin block scan of the cost matrix.
//
// Cost is any callable double(int source, int sink). Supplies and demands
// must balance to ~1e-9; the residual is folded into the largest demand.

struct SimplexArc {
    int source = 0;
    int sink = 0;
    double flow = 0.0;
};

struct SimplexResult {
    std::vector<SimplexArc> arcs; // basis arcs with positive flow
    double cost = 0.0;            // Kahan-recomputed from arcs
    std::uint64_t pivots = 0;
};

template <class Cost>
SimplexResult solve_transportation(std::span<const double> supply_in,
                                   std::span<const double> demand_in,
                                   Cost&& cost) {
    const int n = static_cast<int>(supply_in.size());
    const int m = static_cast<int>(demand_in.size());
    if (n < 1 || m < 1) throw SpecError("transportation: empty marginal");

    std::vector<double> supply(supply_in.begin(), supply_in.end());
    std::vector<double> demand(demand_in.begin(), demand_in.end());
    {
        KahanSum sa, sb;
        for (double v : supply) sa.add(v);
        for (double v : demand) sb.add(v);
        const double diff = sa.value() - sb.value();
        if (std::abs(diff) > 1e-9) throw SpecError("transportation: marginals do not balance");
        auto it = std::max_element(demand.begin(), demand.end());
        *it += diff;
    }
    for (double v : supply)
        if (!(v > 0.0)) throw SpecError("transportation: supplies must be positive");
    for (double v : demand)
        if (!(v > 0.0)) throw SpecError("transportation: demands must be positive");

    const int root = n + m;
    const int nodes = n + m + 1;
    const std::int64_t narcs = static_cast<std::int64_t>(n) * m;

    double cmax = 0.0;
#pragma omp parallel for schedule(static) reduction(max : cmax)
    for (std::int64_t a = 0; a < narcs; ++a)
        cmax = std::max(cmax, cost(static_cast<int>(a / m), static_cast<int>(a % m)));
    const double big = 1.0 + cmax * static_cast<double>(nodes);
    const double enter_eps = 1e-12 * std::max(1.0, cmax);

    // tree arrays; edge attributes live on the child side
    std::vector<int> parent(nodes, -1), first_child(nodes, -1), next_sib(nodes, -1), prev_sib(nodes, -1), depth(nodes, 0);
    std::vector<double> tflow(nodes, 0.0), pi(nodes, 0.0);
    std::vector<signed char> up(nodes, 0);     // +1: arc child->parent, -1: parent->child
    std::vector<std::int64_t> tarc(nodes, -1); // real arc id i*m+j, or -1 for artificial

    const auto attach = [&](int v, int p) {
        parent[v] = p;
        prev_sib[v] = -1;
        next_sib[v] = first_child[p];
        if (first_child[p] >= 0) prev_sib[first_child[p]] = v;
        first_child[p] = v;
    };
    const auto detach = [&](int v) {
        const int p = parent[v];
        if (prev_sib[v] >= 0)
            next_sib[prev_sib[v]] = next_sib[v];
        else
            first_child[p] = next_sib[v];
        if (next_sib[v] >= 0) prev_sib[next_sib[v]] = prev_sib[v];
        parent[v] = -1;
        next_sib[v] = prev_sib[v] = -1;
    };

    // initial basis: all-artificial star around the root
    pi[root] = 0.0;
    for (int i = 0; i < n; ++i) {
        attach(i, root);
        depth[i] = 1;
        up[i] = +1; // source -> root
        tflow[i] = supply[static_cast<std::size_t>(i)];
        pi[i] = big;
    }
    for (int j = 0; j < m; ++j) {
        const int v = n + j;
        attach(v, root);
        depth[v] = 1;
        up[v] = -1; // root -> sink
        tflow[v] = demand[static_cast<std::size_t>(j)];
        pi[v] = -big;
    }

    std::uint64_t pivots = 0;
    const std::uint64_t pivot_guard = 10000 + 64ull * static_cast<std::uint64_t>(nodes);

    // Dantzig-style pricing with a candidate list: a full parallel scan
    // collects the most negative arcs per fixed chunk, pivots then re-price
    // only the candidates until the list runs dry. Chunking is fixed, and
    // candidates are merged in (reduced cost, arc id) order, so the pivot
    // sequence does not depend on the thread count.
    constexpr std::int64_t kChunk = 1 << 16;
    constexpr int kPerChunk = 8;
    constexpr std::size_t kListCap = 256;
    struct Cand {
        double r;
        std::int64_t arc;
    };
    std::vector<Cand> candidates;
    const std::int64_t nchunks = (narcs + kChunk - 1) / kChunk;
    std::vector<Cand> chunk_best(static_cast<std::size_t>(nchunks) * kPerChunk);

    const auto major_scan = [&]() {
#pragma omp parallel for schedule(static)
        for (std::int64_t ch = 0; ch < nchunks; ++ch) {
            Cand local[kPerChunk];
            int filled = 0;
            const std::int64_t lo = ch * kChunk;
            const std::int64_t hi = std::min(narcs, lo + kChunk);
            for (std::int64_t a = lo; a < hi; ++a) {
                const int i = static_cast<int>(a / m);
                const int j = static_cast<int>(a % m);
                const double r = cost(i, j) - pi[i] + pi[n + j];
                if (r >= -enter_eps) continue;
                if (filled < kPerChunk) {
                    local[filled++] = {r, a};
                    if (filled == kPerChunk)
                        std::sort(local, local + kPerChunk,
                                  [](const Cand& x, const Cand& y) { return x.r < y.r; });
                } else if (r < local[kPerChunk - 1].r) {
                    int pos = kPerChunk - 1;
                    while (pos > 0 && local[pos - 1].r > r) {
                        local[pos] = local[pos - 1];
                        --pos;
                    }
                    local[pos] = {r, a};
                }
            }
            if (filled < kPerChunk)
                std::sort(local, local + filled,
                          [](const Cand& x, const Cand& y) { return x.r < y.r; });
            for (int t = 0; t < kPerChunk; ++t)
                chunk_best[static_cast<std::size_t>(ch) * kPerChunk + t] =
                    t < filled ? local[t] : Cand{0.0, -1};
        }
        candidates.clear();
        for (const Cand& c : chunk_best)
            if (c.arc >= 0) candidates.push_back(c);
        std::sort(candidates.begin(), candidates.end(), [](const Cand& x, const Cand& y) {
            return x.r != y.r ? x.r < y.r : x.arc < y.arc;
        });
        if (candidates.size() > kListCap) candidates.resize(kListCap);
    };

    std::vector<int> path_u, path_v, cyc_nodes, chain, stack;
    std::vector<signed char> cyc_fwd;

    for (;;) {
        // entering arc: best candidate under current potentials
        std::int64_t enter = -1;
        double best_r = -enter_eps;
        bool rescanned = false;
        for (;;) {
            std::size_t keep = 0;
            for (const Cand& c : candidates) {
                const int i = static_cast<int>(c.arc / m);
                const int j = static_cast<int>(c.arc % m);
                const double r = cost(i, j) - pi[i] + pi[n + j];
                if (r >= -enter_eps) continue;
                candidates[keep++] = {r, c.arc};
                if (r < best_r || (r == best_r && c.arc < enter)) {
                    best_r = r;
                    enter = c.arc;
                }
            }
            candidates.resize(keep);
            if (enter >= 0 || rescanned) break;
            major_scan();
            rescanned = true;
            if (candidates.empty()) break;
        }
        if (enter < 0) break; // optimal

        const int u = static_cast<int>(enter / m);
        const int v = n + static_cast<int>(enter % m);

        // tree paths from both endpoints up to the apex
        path_u.clear();
        path_v.clear();
        {
            int a = u, b = v;
            while (depth[a] > depth[b]) {
                path_u.push_back(a);
                a = parent[a];
            }
            while (depth[b] > depth[a]) {
                path_v.push_back(b);
                b = parent[b];
            }
            while (a != b) {
                path_u.push_back(a);
                path_v.push_back(b);
                a = parent[a];
                b = parent[b];
            }
        }

        // cycle from the apex along the entering direction:
        // apex -> u (descending), entering arc, v -> apex (ascending)
        cyc_nodes.clear();
        cyc_fwd.clear();
        for (std::size_t idx = path_u.size(); idx-- > 0;) {
            const int w = path_u[idx];
            cyc_nodes.push_back(w);
            cyc_fwd.push_back(static_cast<signed char>(up[w] == -1)); // traversed parent->child
        }
        for (const int w : path_v) {
            cyc_nodes.push_back(w);
            cyc_fwd.push_back(static_cast<signed char>(up[w] == +1)); // traversed child->parent
        }

        double delta = std::numeric_limits<double>::infinity();
        for (std::size_t idx = 0; idx < cyc_nodes.size(); ++idx)
            if (!cyc_fwd[idx]) delta = std::min(delta, tflow[static_cast<std::size_t>(cyc_nodes[idx])]);
        if (!std::isfinite(delta)) throw ValidityError("transportation: pivot cycle has no reverse arc");

        int leave = -1; // child-side node of the leaving arc: last blocking in cycle order
        for (std::size_t idx = 0; idx < cyc_nodes.size(); ++idx)
            if (!cyc_fwd[idx] && tflow[static_cast<std::size_t>(cyc_nodes[idx])] <= delta)
                leave = cyc_nodes[idx];
        if (leave < 0) throw ValidityError("transportation: no blocking arc found");

        for (std::size_t idx = 0; idx < cyc_nodes.size(); ++idx)
            tflow[static_cast<std::size_t>(cyc_nodes[idx])] += cyc_fwd[idx] ? delta : -delta;

        // endpoint of the entering arc inside the subtree cut off at `leave`
        const bool u_side = std::find(path_u.begin(), path_u.end(), leave) != path_u.end();
        const int inside = u_side ? u : v;
        const int outside = u_side ? v : u;

        detach(leave);

        // reverse the parent chain inside -> ... -> leave; edge attributes
        // move from the old child side to the new one with direction flipped
        chain.clear();
        for (int w = inside;; w = parent[w]) {
            chain.push_back(w);
            if (w == leave) break;
            if (parent[w] < 0) throw ValidityError("transportation: broken basis chain");
        }
        for (std::size_t kk = chain.size(); kk-- > 1;) {
            const int child = chain[kk - 1];
            const int par = chain[kk];
            if (parent[child] == par) detach(child);
            attach(par, child);
            tflow[par] = tflow[child];
            up[par] = static_cast<signed char>(-up[child]);
            tarc[par] = tarc[child];
        }
        attach(inside, outside);
        tflow[inside] = delta;
        up[inside] = u_side ? +1 : -1;
        tarc[inside] = enter;

        // potentials in the re-hung subtree shift by the entering reduced cost
        {
            const double shift = u_side ? best_r : -best_r;
            stack.assign(1, inside);
            while (!stack.empty()) {
                const int w = stack.back();
                stack.pop_back();
                pi[w] += shift;
                depth[w] = depth[parent[w]] + 1;
                for (int c = first_child[w]; c >= 0; c = next_sib[c]) stack.push_back(c);
            }
        }

        if (++pivots > pivot_guard) throw ResourceError("transportation: pivot guard exceeded");
    }

    // artificial arcs must carry no flow at optimality
    for (int vtx = 0; vtx < n + m; ++vtx)
        if (parent[vtx] == root && tarc[vtx] < 0 && tflow[vtx] > 1e-7)
            throw ValidityError("transportation: infeasible (artificial flow remains)");

    SimplexResult res;
    res.pivots = pivots;
    KahanSum total;
    for (int vtx = 0; vtx < n + m; ++vtx) {
        if (parent[vtx] < 0 || tarc[vtx] < 0) continue;
        if (!(tflow[vtx] > 0.0)) continue;
        const int i = static_cast<int>(tarc[vtx] / m);
        const int j = static_cast<int>(tarc[vtx] % m);
        res.arcs.push_back({i, j, tflow[vtx]});
    }
    std::sort(res.arcs.begin(), res.arcs.end(), [](const SimplexArc& x, const SimplexArc& y) {
        return x.source != y.source ? x.source < y.source : x.sink < y.sink;
    });
    for (const SimplexArc& a : res.arcs) total.add(a.flow * cost(a.source, a.sink));
    res.cost = total.value();
    return res;
}

} // namespace unif
