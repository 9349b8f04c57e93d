#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "lgs/error.hpp"
#include "lgs/graph.hpp"

namespace lgs {

std::vector<int> distances_from(const Graph& g, int x, int radius) {
    if (radius < 0) fail(errc::parameter, "graph", "negative radius");
    if (x < 0 || x >= g.n()) fail(errc::parameter, "graph", "source out of range");
    std::vector<int> dist(static_cast<size_t>(g.n()), -1);
    dist[static_cast<size_t>(x)] = 0;
    std::deque<int> queue{x};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        int dv = dist[static_cast<size_t>(v)];
        if (dv >= radius) continue;
        for (int id : g.incident(v)) {
            int w = g.other(id, v);
            if (dist[static_cast<size_t>(w)] < 0) {
                dist[static_cast<size_t>(w)] = dv + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

std::optional<int> girth(const Graph& g) {
    if (g.has_parallel_edges()) return 2;
    int best = std::numeric_limits<int>::max();
    std::vector<int> dist(static_cast<size_t>(g.n()));
    std::vector<int> via(static_cast<size_t>(g.n()));
    for (int s = 0; s < g.n(); ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<size_t>(s)] = 0;
        via[static_cast<size_t>(s)] = -1;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            int dv = dist[static_cast<size_t>(v)];
            if (2 * dv >= best) break; // deeper candidates are >= 2*dv
            for (int id : g.incident(v)) {
                if (id == via[static_cast<size_t>(v)]) continue; // parent edge
                int w = g.other(id, v);
                if (dist[static_cast<size_t>(w)] < 0) {
                    dist[static_cast<size_t>(w)] = dv + 1;
                    via[static_cast<size_t>(w)] = id;
                    queue.push_back(w);
                } else {
                    best = std::min(best, dv + dist[static_cast<size_t>(w)] + 1);
                }
            }
        }
    }
    if (best == std::numeric_limits<int>::max()) return std::nullopt;
    return best;
}

namespace {

struct NeighborArc {
    int to;
    long long mult;
};

// Collapsed adjacency with parallel-edge multiplicities.
std::vector<std::vector<NeighborArc>> collapse(const Graph& g) {
    std::vector<std::vector<NeighborArc>> adj(static_cast<size_t>(g.n()));
    for (int v = 0; v < g.n(); ++v) {
        std::vector<int> nb;
        nb.reserve(g.incident(v).size());
        for (int id : g.incident(v)) nb.push_back(g.other(id, v));
        std::sort(nb.begin(), nb.end());
        for (size_t i = 0; i < nb.size();) {
            size_t j = i;
            while (j < nb.size() && nb[j] == nb[i]) ++j;
            adj[static_cast<size_t>(v)].push_back({nb[i], static_cast<long long>(j - i)});
            i = j;
        }
    }
    return adj;
}

struct CycleDfs {
    const std::vector<std::vector<NeighborArc>>& adj;
    CyclesProfile& out;
    long long cap;
    int max_len;
    int root = 0;
    std::vector<int> path;
    std::vector<char> on_path;

    void record(int k, long long realizations) {
        if (out.cycle_count() >= cap)
            fail(errc::resource, "cycles", "cycle cap exceeded (" + std::to_string(cap) + ")");
        for (int v : path) {
            out.counts[static_cast<size_t>(k) - 2][static_cast<size_t>(v)] += realizations;
            out.cyc_data.push_back(v);
        }
        out.cyc_off.push_back(static_cast<int>(out.cyc_data.size()));
        out.cyc_mult.push_back(realizations);
    }

    void dfs(int v, long long mult_so_far) {
        const auto& arcs = adj[static_cast<size_t>(v)];
        int len = static_cast<int>(path.size());
        if (len >= 3) {
            // closing edge; canonical direction: second vertex < last vertex
            if (path[1] < path[static_cast<size_t>(len) - 1]) {
                auto it = std::lower_bound(arcs.begin(), arcs.end(), root,
                                           [](const NeighborArc& a, int t) { return a.to < t; });
                if (it != arcs.end() && it->to == root)
                    record(len, mult_so_far * it->mult);
            }
        }
        if (len >= max_len) return;
        auto it = std::upper_bound(arcs.begin(), arcs.end(), root,
                                   [](int t, const NeighborArc& a) { return t < a.to; });
        for (; it != arcs.end(); ++it) {
            if (on_path[static_cast<size_t>(it->to)]) continue;
            path.push_back(it->to);
            on_path[static_cast<size_t>(it->to)] = 1;
            dfs(it->to, mult_so_far * it->mult);
            on_path[static_cast<size_t>(it->to)] = 0;
            path.pop_back();
        }
    }
};

} // namespace

CyclesProfile count_short_cycles(const Graph& g, int g_target, long long cycle_cap) {
    if (g_target < 3) fail(errc::parameter, "cycles", "g_target must be >= 3");
    CyclesProfile out;
    out.g_target = g_target;
    out.n = g.n();
    out.counts.assign(static_cast<size_t>(g_target) - 2,
                      std::vector<long long>(static_cast<size_t>(g.n()), 0));
    out.cyc_off.push_back(0);

    auto adj = collapse(g);

    // 2-cycles: unordered pairs of parallel edges
    for (int v = 0; v < g.n(); ++v) {
        for (const NeighborArc& arc : adj[static_cast<size_t>(v)]) {
            if (arc.to <= v || arc.mult < 2) continue;
            long long pairs = arc.mult * (arc.mult - 1) / 2;
            out.counts[0][static_cast<size_t>(v)] += pairs;
            out.counts[0][static_cast<size_t>(arc.to)] += pairs;
            out.cyc_data.push_back(v);
            out.cyc_data.push_back(arc.to);
            out.cyc_off.push_back(static_cast<int>(out.cyc_data.size()));
            out.cyc_mult.push_back(pairs);
        }
    }

    if (g_target > 3) {
        CycleDfs dfs{adj, out, cycle_cap, g_target - 1};
        dfs.on_path.assign(static_cast<size_t>(g.n()), 0);
        for (int r = 0; r < g.n(); ++r) {
            dfs.root = r;
            dfs.path = {r};
            dfs.on_path[static_cast<size_t>(r)] = 1;
            dfs.dfs(r, 1);
            dfs.on_path[static_cast<size_t>(r)] = 0;
        }
    }
    return out;
}

long long CyclesProfile::total_realizations() const {
    long long sum = 0;
    for (long long m : cyc_mult) sum += m;
    return sum;
}

std::optional<int> CyclesProfile::min_cycle_length() const {
    std::optional<int> best;
    for (int i = 0; i < cycle_count(); ++i) {
        int len = cyc_off[static_cast<size_t>(i) + 1] - cyc_off[static_cast<size_t>(i)];
        if (!best || len < *best) best = len;
    }
    return best;
}

HypothesisReport check_hypothesis(const CyclesProfile& profile, const Rational& base) {
    if (!base.positive()) fail(errc::parameter, "hypothesis", "base must be positive");
    HypothesisReport report;
    double worst_ratio = -1.0;
    for (int k = 2; k < profile.g_target; ++k) {
        double bound = std::pow(base.to_double(), k);
        for (int x = 0; x < profile.n; ++x) {
            long long c = profile.count(x, k);
            bool holds = base.pow_at_least(k, c);
            double ratio = bound > 0 ? static_cast<double>(c) / bound : 0.0;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                report.worst_vertex = x;
                report.worst_k = k;
                report.worst_count = c;
                report.worst_bound = bound;
            }
            if (!holds) report.ok = false;
        }
    }
    return report;
}

double measured_base(const CyclesProfile& profile) {
    double base = 0.0;
    for (int k = 2; k < profile.g_target; ++k) {
        long long worst = 0;
        for (int x = 0; x < profile.n; ++x) worst = std::max(worst, profile.count(x, k));
        if (worst > 0)
            base = std::max(base, std::pow(static_cast<double>(worst), 1.0 / k));
    }
    return base;
}

} // namespace lgs
