#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// here (dense matrix powers, exhaustive cycle search) stay deliberately
// separate from the library's own algorithms.

#include <algorithm>
#include <set>
#include <vector>

#include "lgs/graph.hpp"

namespace corpus {

inline lgs::Graph petersen() {
    lgs::Graph g(10);
    // outer 5-cycle, inner pentagram, spokes
    for (int i = 0; i < 5; ++i) g.add_edge(i, (i + 1) % 5);
    for (int i = 0; i < 5; ++i) g.add_edge(5 + i, 5 + (i + 2) % 5);
    for (int i = 0; i < 5; ++i) g.add_edge(i, 5 + i);
    return g;
}

// two hub vertices joined by three internally disjoint length-2 paths
inline lgs::Graph theta222() {
    lgs::Graph g(5);
    int u = 0, v = 1;
    for (int mid : {2, 3, 4}) {
        g.add_edge(u, mid);
        g.add_edge(mid, v);
    }
    return g;
}

// dense integer adjacency with multiplicities
inline std::vector<std::vector<long long>> adjacency_matrix(const lgs::Graph& g) {
    std::vector<std::vector<long long>> a(static_cast<size_t>(g.n()),
                                          std::vector<long long>(static_cast<size_t>(g.n()), 0));
    for (int id : g.alive_edges()) {
        lgs::EdgeEnds e = g.ends(id);
        ++a[static_cast<size_t>(e.u)][static_cast<size_t>(e.v)];
        ++a[static_cast<size_t>(e.v)][static_cast<size_t>(e.u)];
    }
    return a;
}

inline std::vector<std::vector<long long>> mat_mul(const std::vector<std::vector<long long>>& x,
                                                   const std::vector<std::vector<long long>>& y) {
    size_t n = x.size();
    std::vector<std::vector<long long>> z(n, std::vector<long long>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (x[i][k] == 0) continue;
            for (size_t j = 0; j < n; ++j) z[i][j] += x[i][k] * y[k][j];
        }
    return z;
}

inline std::vector<std::vector<long long>> mat_pow(std::vector<std::vector<long long>> a, int p) {
    auto r = a;
    for (int i = 1; i < p; ++i) r = mat_mul(r, a);
    return r;
}

// brute-force simple-cycle count through every vertex, by vertex-set walks
// (edge multiplicities multiplied in). Exponential; n <= 12 only.
inline std::vector<std::vector<long long>> brute_cycle_counts(const lgs::Graph& g, int g_target) {
    std::vector<std::vector<long long>> counts(static_cast<size_t>(g_target),
                                               std::vector<long long>(static_cast<size_t>(g.n()), 0));
    auto a = adjacency_matrix(g);
    // 2-cycles: parallel pairs
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v) {
            long long m = a[static_cast<size_t>(u)][static_cast<size_t>(v)];
            if (m >= 2 && g_target > 2) {
                counts[2][static_cast<size_t>(u)] += m * (m - 1) / 2;
                counts[2][static_cast<size_t>(v)] += m * (m - 1) / 2;
            }
        }
    // k >= 3: enumerate vertex sequences with min-first canonical form
    std::vector<int> path;
    std::vector<char> used(static_cast<size_t>(g.n()), 0);
    auto dfs = [&](auto&& self, int root, int v, long long mult) -> void {
        if (static_cast<int>(path.size()) >= 3) {
            long long closing = a[static_cast<size_t>(v)][static_cast<size_t>(root)];
            if (closing > 0 && path[1] < path.back()) {
                long long total = mult * closing;
                for (int x : path)
                    counts[path.size()][static_cast<size_t>(x)] += total;
            }
        }
        if (static_cast<int>(path.size()) >= g_target - 1) return;
        for (int w = root + 1; w < g.n(); ++w) {
            if (used[static_cast<size_t>(w)]) continue;
            long long m = a[static_cast<size_t>(v)][static_cast<size_t>(w)];
            if (m == 0) continue;
            used[static_cast<size_t>(w)] = 1;
            path.push_back(w);
            self(self, root, w, mult * m);
            path.pop_back();
            used[static_cast<size_t>(w)] = 0;
        }
    };
    for (int r = 0; r < g.n(); ++r) {
        path = {r};
        used[static_cast<size_t>(r)] = 1;
        dfs(dfs, r, r, 1);
        used[static_cast<size_t>(r)] = 0;
    }
    // counts indexed [k][vertex] with k < g_target
    std::vector<std::vector<long long>> out(static_cast<size_t>(g_target),
                                            std::vector<long long>(static_cast<size_t>(g.n()), 0));
    for (int k = 2; k < g_target; ++k) out[static_cast<size_t>(k)] = counts[static_cast<size_t>(k)];
    return out;
}

inline lgs::Graph disjoint_union(const lgs::Graph& a, const lgs::Graph& b) {
    lgs::Graph g(a.n() + b.n());
    for (int id : a.alive_edges()) {
        lgs::EdgeEnds e = a.ends(id);
        g.add_edge(e.u, e.v);
    }
    for (int id : b.alive_edges()) {
        lgs::EdgeEnds e = b.ends(id);
        g.add_edge(a.n() + e.u, a.n() + e.v);
    }
    return g;
}

} // namespace corpus
