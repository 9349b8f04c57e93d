#include <algorithm>
#include <set>
#include <utility>

#include "lgs/error.hpp"
#include "lgs/graph.hpp"
#include "lgs/rng.hpp"

namespace lgs {

Graph cycle_graph(int n) {
    if (n < 3) fail(errc::parameter, "gen", "cycle needs n >= 3");
    Graph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

Graph complete_graph(int n) {
    if (n < 1) fail(errc::parameter, "gen", "complete needs n >= 1");
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

Graph complete_bipartite(int a, int b) {
    if (a < 1 || b < 1) fail(errc::parameter, "gen", "complete-bipartite needs a,b >= 1");
    Graph g(a + b);
    for (int u = 0; u < a; ++u)
        for (int v = 0; v < b; ++v) g.add_edge(u, a + v);
    return g;
}

namespace {

// Pair up vertex stubs, then repair conflicts (loops, and duplicates when a
// simple graph is required) by switching endpoints with random other pairs.
Graph configuration_model(int n, int d, uint64_t seed, bool simple, int max_rounds) {
    if (n <= 0 || d <= 0) fail(errc::parameter, "gen", "random-regular needs n,d >= 1");
    if ((static_cast<long long>(n) * d) % 2 != 0)
        fail(errc::parameter, "gen", "n*d must be even");
    if (simple && d >= n) fail(errc::parameter, "gen", "random-regular needs d < n");

    Rng rng(key_mix(seed, 0x7265677521ULL));
    long long m = static_cast<long long>(n) * d / 2;

    std::vector<int> stubs(static_cast<size_t>(n) * static_cast<size_t>(d));
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < d; ++j) stubs[static_cast<size_t>(v) * d + j] = v;
    for (size_t i = stubs.size(); i > 1; --i)
        std::swap(stubs[i - 1], stubs[rng.next_below(i)]);

    std::vector<std::pair<int, int>> pairs(static_cast<size_t>(m));
    for (long long i = 0; i < m; ++i)
        pairs[static_cast<size_t>(i)] = {stubs[static_cast<size_t>(2 * i)],
                                         stubs[static_cast<size_t>(2 * i + 1)]};

    auto canon = [](int u, int v) { return std::pair<int, int>(std::min(u, v), std::max(u, v)); };
    std::multiset<std::pair<int, int>> seen;
    for (auto& p : pairs) seen.insert(canon(p.first, p.second));

    auto is_bad = [&](const std::pair<int, int>& p) {
        if (p.first == p.second) return true;
        return simple && seen.count(canon(p.first, p.second)) > 1;
    };

    for (int round = 0; round < max_rounds; ++round) {
        std::vector<size_t> bad;
        for (size_t i = 0; i < pairs.size(); ++i)
            if (is_bad(pairs[i])) bad.push_back(i);
        if (bad.empty()) {
            Graph g(n);
            for (auto& p : pairs) g.add_edge(p.first, p.second);
            return g;
        }
        for (size_t i : bad) {
            if (!is_bad(pairs[i])) continue; // an earlier switch may have fixed it
            size_t j = static_cast<size_t>(rng.next_below(static_cast<uint64_t>(m)));
            if (j == i) continue;
            auto a = pairs[i], b = pairs[j];
            // switch to (a.first, b.second), (b.first, a.second)
            std::pair<int, int> na{a.first, b.second}, nb{b.first, a.second};
            if (rng.next_bool()) { na = {a.first, b.first}; nb = {a.second, b.second}; }
            auto conflict = [&](const std::pair<int, int>& p) {
                if (p.first == p.second) return true;
                return simple && seen.count(canon(p.first, p.second)) > 0;
            };
            if (conflict(na) || conflict(nb)) continue;
            if (simple && canon(na.first, na.second) == canon(nb.first, nb.second)) continue;
            seen.erase(seen.find(canon(a.first, a.second)));
            seen.erase(seen.find(canon(b.first, b.second)));
            seen.insert(canon(na.first, na.second));
            seen.insert(canon(nb.first, nb.second));
            pairs[i] = na;
            pairs[j] = nb;
        }
    }
    fail(errc::generation_failure, "gen", "configuration model repair exceeded retry cap");
}

} // namespace

Graph random_regular(int n, int d, uint64_t seed, int max_rounds) {
    return configuration_model(n, d, seed, true, max_rounds);
}

Graph random_regular_multigraph(int n, int d, uint64_t seed, int max_rounds) {
    return configuration_model(n, d, seed, false, max_rounds);
}

} // namespace lgs
