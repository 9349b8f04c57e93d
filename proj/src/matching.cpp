#include "lgs/matching.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "lgs/error.hpp"
#include "lgs/rng.hpp"

#include "json.hpp"

namespace lgs {

BipartiteGraph::BipartiteGraph(int a, int b) : na(a), nb(b) {
    if (a < 0 || b < 0) fail(errc::parameter, "bipartite", "negative side size");
    adj_a.resize(static_cast<size_t>(a));
    adj_b.resize(static_cast<size_t>(b));
}

int BipartiteGraph::add_edge(int a, int b) {
    if (a < 0 || a >= na || b < 0 || b >= nb)
        fail(errc::parameter, "bipartite", "edge endpoint out of range");
    int id = m();
    edges.emplace_back(a, b);
    adj_a[static_cast<size_t>(a)].push_back(id);
    adj_b[static_cast<size_t>(b)].push_back(id);
    return id;
}

Graph BipartiteGraph::to_graph() const {
    Graph g(na + nb);
    for (auto& [a, b] : edges) g.add_edge(a, na + b);
    return g;
}

BipartiteGraph random_bipartite_regular(int n_side, int d, uint64_t seed, int max_rounds) {
    if (n_side <= 0 || d <= 0 || d > n_side)
        fail(errc::parameter, "gen", "bipartite-regular needs 1 <= d <= n");
    Rng rng(key_mix(seed, 0x62697061727447ULL));
    std::vector<int> stubs(static_cast<size_t>(n_side) * static_cast<size_t>(d));
    for (int v = 0; v < n_side; ++v)
        for (int j = 0; j < d; ++j) stubs[static_cast<size_t>(v) * d + j] = v;

    for (int round = 0; round < max_rounds; ++round) {
        std::vector<int> right = stubs;
        for (size_t i = right.size(); i > 1; --i)
            std::swap(right[i - 1], right[rng.next_below(i)]);
        // repair duplicates by switches
        std::multiset<std::pair<int, int>> seen;
        for (size_t i = 0; i < stubs.size(); ++i) seen.insert({stubs[i], right[i]});
        bool stuck = false;
        for (int pass = 0; pass < 100 && !stuck; ++pass) {
            std::vector<size_t> bad;
            for (size_t i = 0; i < stubs.size(); ++i)
                if (seen.count({stubs[i], right[i]}) > 1) bad.push_back(i);
            if (bad.empty()) {
                BipartiteGraph g(n_side, n_side);
                for (size_t i = 0; i < stubs.size(); ++i) g.add_edge(stubs[i], right[i]);
                return g;
            }
            size_t fixed = 0;
            for (size_t i : bad) {
                if (seen.count({stubs[i], right[i]}) <= 1) continue;
                size_t j = static_cast<size_t>(rng.next_below(stubs.size()));
                std::pair<int, int> na{stubs[i], right[j]}, nb{stubs[j], right[i]};
                if (seen.count(na) > 0 || seen.count(nb) > 0 || na == nb) continue;
                seen.erase(seen.find({stubs[i], right[i]}));
                seen.erase(seen.find({stubs[j], right[j]}));
                seen.insert(na);
                seen.insert(nb);
                std::swap(right[i], right[j]);
                ++fixed;
            }
            if (fixed == 0 && !bad.empty() && pass == 99) stuck = true;
        }
    }
    fail(errc::generation_failure, "gen", "bipartite configuration model repair failed");
}

Matching Matching::empty(const BipartiteGraph& g) {
    Matching m;
    m.a_edge.assign(static_cast<size_t>(g.na), -1);
    m.b_edge.assign(static_cast<size_t>(g.nb), -1);
    return m;
}

std::vector<int> Matching::unmatched_a(const BipartiteGraph& g) const {
    std::vector<int> out;
    for (int a = 0; a < g.na; ++a)
        if (a_edge[static_cast<size_t>(a)] < 0) out.push_back(a);
    return out;
}

std::vector<int> Matching::unmatched_b(const BipartiteGraph& g) const {
    std::vector<int> out;
    for (int b = 0; b < g.nb; ++b)
        if (b_edge[static_cast<size_t>(b)] < 0) out.push_back(b);
    return out;
}

namespace {

constexpr int kInf = 1 << 29;

struct Layers {
    std::vector<int> dist_a, dist_b;
    int shortest = kInf; // edge length of shortest augmenting path
};

// Alternating BFS: unmatched A at level 0, non-matching edges A->B, matching
// edges B->A. dist counts edges.
Layers bfs_layers(const BipartiteGraph& g, const Matching& m, int max_len) {
    Layers L;
    L.dist_a.assign(static_cast<size_t>(g.na), kInf);
    L.dist_b.assign(static_cast<size_t>(g.nb), kInf);
    std::deque<int> queue;
    for (int a = 0; a < g.na; ++a)
        if (m.a_edge[static_cast<size_t>(a)] < 0) {
            L.dist_a[static_cast<size_t>(a)] = 0;
            queue.push_back(a);
        }
    while (!queue.empty()) {
        int a = queue.front();
        queue.pop_front();
        int da = L.dist_a[static_cast<size_t>(a)];
        if (da + 1 > max_len || da + 1 > L.shortest) continue;
        for (int id : g.adj_a[static_cast<size_t>(a)]) {
            if (id == m.a_edge[static_cast<size_t>(a)]) continue;
            int b = g.edges[static_cast<size_t>(id)].second;
            if (L.dist_b[static_cast<size_t>(b)] != kInf) continue;
            L.dist_b[static_cast<size_t>(b)] = da + 1;
            int back = m.b_edge[static_cast<size_t>(b)];
            if (back < 0) {
                L.shortest = std::min(L.shortest, da + 1);
                continue;
            }
            int a2 = g.edges[static_cast<size_t>(back)].first;
            if (L.dist_a[static_cast<size_t>(a2)] == kInf) {
                L.dist_a[static_cast<size_t>(a2)] = da + 2;
                queue.push_back(a2);
            }
        }
    }
    return L;
}

struct PathExtractor {
    const BipartiteGraph& g;
    const Matching& m;
    const Layers& L;
    int target_len;
    std::vector<char> used_a, used_b;
    std::vector<int> path;

    bool dfs(int a) {
        int da = L.dist_a[static_cast<size_t>(a)];
        for (int id : g.adj_a[static_cast<size_t>(a)]) {
            if (id == m.a_edge[static_cast<size_t>(a)]) continue;
            int b = g.edges[static_cast<size_t>(id)].second;
            if (used_b[static_cast<size_t>(b)]) continue;
            if (L.dist_b[static_cast<size_t>(b)] != da + 1) continue;
            int back = m.b_edge[static_cast<size_t>(b)];
            if (back < 0) {
                if (da + 1 != target_len) continue;
                used_b[static_cast<size_t>(b)] = 1;
                path.push_back(id);
                return true;
            }
            if (da + 1 >= target_len) continue;
            int a2 = g.edges[static_cast<size_t>(back)].first;
            if (used_a[static_cast<size_t>(a2)]) continue;
            if (L.dist_a[static_cast<size_t>(a2)] != da + 2) continue;
            used_b[static_cast<size_t>(b)] = 1;
            used_a[static_cast<size_t>(a2)] = 1;
            path.push_back(id);
            path.push_back(back);
            if (dfs(a2)) return true;
            path.pop_back();
            path.pop_back();
            // vertices stay used: their layered options are exhausted
        }
        return false;
    }
};

} // namespace

std::vector<std::vector<int>> find_augmenting_paths(const BipartiteGraph& g, const Matching& m,
                                                    int max_len) {
    std::vector<std::vector<int>> out;
    Layers L = bfs_layers(g, m, max_len);
    if (L.shortest > max_len) return out;
    PathExtractor ex{g, m, L, L.shortest};
    ex.used_a.assign(static_cast<size_t>(g.na), 0);
    ex.used_b.assign(static_cast<size_t>(g.nb), 0);
    for (int a = 0; a < g.na; ++a) {
        if (m.a_edge[static_cast<size_t>(a)] >= 0) continue;
        if (ex.used_a[static_cast<size_t>(a)]) continue;
        ex.path.clear();
        ex.used_a[static_cast<size_t>(a)] = 1;
        if (ex.dfs(a)) out.push_back(ex.path);
    }
    return out;
}

void flip_augmenting_path(const BipartiteGraph& g, Matching& m, const std::vector<int>& path) {
    if (path.empty() || path.size() % 2 == 0)
        fail(errc::parameter, "matching", "augmenting path must have odd length");
    int a0 = g.edges[static_cast<size_t>(path[0])].first;
    int bl = g.edges[static_cast<size_t>(path.back())].second;
    if (m.a_edge[static_cast<size_t>(a0)] >= 0 || m.b_edge[static_cast<size_t>(bl)] >= 0)
        fail(errc::parameter, "matching", "augmenting path endpoints must be unmatched");
    for (size_t i = 0; i < path.size(); i += 2) {
        int id = path[i];
        auto [a, b] = g.edges[static_cast<size_t>(id)];
        m.a_edge[static_cast<size_t>(a)] = id;
        m.b_edge[static_cast<size_t>(b)] = id;
    }
    ++m.size;
}

namespace {

// A-side Hall violator from the final layered forest: the set of A vertices
// alternating-reachable from unmatched A.
std::vector<int> hall_witness(const BipartiteGraph& g, const Matching& m) {
    Layers L = bfs_layers(g, m, kInf);
    std::vector<int> s;
    for (int a = 0; a < g.na; ++a)
        if (L.dist_a[static_cast<size_t>(a)] != kInf) s.push_back(a);
    return s;
}

} // namespace

Matching match_to_completion(const BipartiteGraph& g, uint64_t seed, MatchStats* stats) {
    if (g.na != g.nb) fail(errc::parameter, "matching", "sides must have equal size");
    // seeded copy with shuffled adjacency: different seeds explore different
    // augmenting orders and so produce different perfect matchings
    BipartiteGraph h(g.na, g.nb);
    h.edges = g.edges;
    h.adj_a = g.adj_a;
    h.adj_b = g.adj_b;
    Rng rng(key_mix(seed, 0x6d617463686d63ULL));
    for (auto& lst : h.adj_a)
        for (size_t i = lst.size(); i > 1; --i) std::swap(lst[i - 1], lst[rng.next_below(i)]);
    for (auto& lst : h.adj_b)
        for (size_t i = lst.size(); i > 1; --i) std::swap(lst[i - 1], lst[rng.next_below(i)]);

    Matching m = Matching::empty(h);
    MatchStats local;
    MatchStats& st = stats ? *stats : local;
    int max_len = 1;
    bool unbounded_done = false;
    while (m.size < h.na) {
        auto paths = find_augmenting_paths(h, m, max_len);
        ++st.iterations;
        st.max_len_history.push_back(max_len);
        if (paths.empty()) {
            if (max_len >= 2 * (h.na + h.nb)) {
                unbounded_done = true;
                break;
            }
            max_len = std::min(max_len * 2, 2 * (h.na + h.nb));
            st.unmatched_history.push_back(h.na - m.size);
            continue;
        }
        int unmatched_before = 2 * (h.na - m.size);
        if (8 * static_cast<int>(paths.size()) < unmatched_before) ++st.quarter_anomalies;
        for (auto& p : paths) {
            ++st.path_length_histogram[static_cast<int>(p.size())];
            flip_augmenting_path(h, m, p);
        }
        st.unmatched_history.push_back(h.na - m.size);
    }
    st.deficiency = h.na - m.size;
    if (st.deficiency > 0 && unbounded_done) st.deficiency_witness = hall_witness(h, m);
    return m;
}

LayerAudit layer_growth_audit(const BipartiteGraph& g, const Matching& m) {
    LayerAudit audit;
    auto run_side = [&](bool from_a, std::vector<long long>& sizes) {
        int n_here = from_a ? g.na : g.nb;
        int n_other = from_a ? g.nb : g.na;
        std::vector<char> cur(static_cast<size_t>(n_here), 0);
        int start_count = 0;
        for (int v = 0; v < n_here; ++v) {
            int e = from_a ? m.a_edge[static_cast<size_t>(v)] : m.b_edge[static_cast<size_t>(v)];
            if (e < 0) {
                cur[static_cast<size_t>(v)] = 1;
                ++start_count;
            }
        }
        if (start_count == 0) return;
        long long prev = -1;
        int max_layers = 4 + static_cast<int>(std::ceil(std::log2(std::max(2, n_other)) * 2));
        for (int layer = 1; layer <= max_layers; ++layer) {
            // neighborhood on the other side
            std::vector<char> nxt(static_cast<size_t>(n_other), 0);
            long long count = 0;
            for (size_t id = 0; id < g.edges.size(); ++id) {
                int u = from_a ? g.edges[id].first : g.edges[id].second;
                int w = from_a ? g.edges[id].second : g.edges[id].first;
                if (cur[static_cast<size_t>(u)] && !nxt[static_cast<size_t>(w)]) {
                    nxt[static_cast<size_t>(w)] = 1;
                    ++count;
                }
            }
            sizes.push_back(count);
            if (prev >= 0) {
                bool grown = 2 * count >= 3 * prev || 4 * count >= 3LL * n_other;
                if (!grown) {
                    audit.ok = false;
                    audit.violating_layer = layer;
                    return;
                }
            }
            if (4 * count >= 3LL * n_other) return; // chain saturated
            // partners of the layer; an unmatched vertex here means a short
            // augmenting path exists, which ends the chain
            std::vector<char> part(static_cast<size_t>(n_here), 0);
            bool found_unmatched = false;
            for (int w = 0; w < n_other; ++w) {
                if (!nxt[static_cast<size_t>(w)]) continue;
                int e = from_a ? m.b_edge[static_cast<size_t>(w)] : m.a_edge[static_cast<size_t>(w)];
                if (e < 0) {
                    found_unmatched = true;
                    break;
                }
                int back = from_a ? g.edges[static_cast<size_t>(e)].first
                                  : g.edges[static_cast<size_t>(e)].second;
                part[static_cast<size_t>(back)] = 1;
            }
            if (found_unmatched) {
                audit.short_augmenting_found = true;
                return;
            }
            prev = count;
            cur = std::move(part);
        }
    };
    run_side(true, audit.s_sizes);
    if (audit.ok) run_side(false, audit.t_sizes);
    return audit;
}

std::string MatchStats::to_json() const {
    nlohmann::json j;
    j["iterations"] = iterations;
    nlohmann::json hist = nlohmann::json::object();
    for (auto& [len, count] : path_length_histogram) hist[std::to_string(len)] = count;
    j["path_length_histogram"] = hist;
    j["deficiency"] = deficiency;
    j["quarter_anomalies"] = quarter_anomalies;
    if (!deficiency_witness.empty()) j["deficiency_witness_size"] = deficiency_witness.size();
    return j.dump();
}

// ---- plain-graph matchings ---------------------------------------------------

bool GraphMatching::perfect(const Graph& g) const {
    if (static_cast<int>(partner.size()) != g.n()) return false;
    for (int v = 0; v < g.n(); ++v) {
        int p = partner[static_cast<size_t>(v)];
        if (p < 0 || p == v) return false;
        if (partner[static_cast<size_t>(p)] != v) return false;
        int e = edge_of[static_cast<size_t>(v)];
        if (e != edge_of[static_cast<size_t>(p)]) return false;
        EdgeEnds ends = g.ends(e);
        if (!((ends.u == v && ends.v == p) || (ends.u == p && ends.v == v))) return false;
    }
    return true;
}

std::vector<char> euler_orient(const Graph& g, uint64_t seed) {
    for (int v = 0; v < g.n(); ++v)
        if (g.degree(v) % 2 != 0)
            fail(errc::parameter, "euler", "all degrees must be even");
    std::vector<char> forward(static_cast<size_t>(g.edge_slots()), 0);
    std::vector<char> used(static_cast<size_t>(g.edge_slots()), 0);
    std::vector<std::vector<int>> inc(static_cast<size_t>(g.n()));
    Rng rng(key_mix(seed, 0x65756c6572ULL));
    for (int v = 0; v < g.n(); ++v) {
        inc[static_cast<size_t>(v)] = g.incident(v);
        auto& lst = inc[static_cast<size_t>(v)];
        for (size_t i = lst.size(); i > 1; --i) std::swap(lst[i - 1], lst[rng.next_below(i)]);
    }
    std::vector<size_t> cursor(static_cast<size_t>(g.n()), 0);
    for (int start = 0; start < g.n(); ++start) {
        if (cursor[static_cast<size_t>(start)] >= inc[static_cast<size_t>(start)].size()) continue;
        // Hierholzer: walk until stuck (back at a vertex with no unused edge),
        // splicing sub-tours as we go; orienting along the walk keeps in = out.
        std::vector<int> stack{start};
        while (!stack.empty()) {
            int v = stack.back();
            auto& cur = cursor[static_cast<size_t>(v)];
            auto& lst = inc[static_cast<size_t>(v)];
            while (cur < lst.size() && used[static_cast<size_t>(lst[cur])]) ++cur;
            if (cur == lst.size()) {
                stack.pop_back();
                continue;
            }
            int id = lst[cur];
            used[static_cast<size_t>(id)] = 1;
            int w = g.other(id, v);
            forward[static_cast<size_t>(id)] = (g.ends(id).u == v) ? 1 : 0;
            stack.push_back(w);
        }
    }
    return forward;
}

PerfectMatchingResult perfect_matching_even_regular(const Graph& g, uint64_t seed,
                                                    int attempt_cap) {
    auto dr = g.regular_degree();
    if (!dr || *dr < 2 || *dr % 2 != 0)
        fail(errc::parameter, "perfect-matching", "input must be d-regular with even d >= 2");
    if (g.n() % 2 != 0)
        fail(errc::generation_failure, "perfect-matching", "odd vertex count has no perfect matching");

    for (int attempt = 0; attempt < attempt_cap; ++attempt) {
        uint64_t s = key_mix(seed, 0x706d6572ULL, static_cast<uint64_t>(attempt));
        std::vector<int> succ_edge(static_cast<size_t>(g.n()), -1);
        // Euler orientation, then one out-edge per vertex via bipartite matching
        std::vector<char> forward = euler_orient(g, s);
        BipartiteGraph out_in(g.n(), g.n());
        std::vector<int> bip_to_g;
        for (int id : g.alive_edges()) {
            EdgeEnds e = g.ends(id);
            int tail = forward[static_cast<size_t>(id)] ? e.u : e.v;
            int head = forward[static_cast<size_t>(id)] ? e.v : e.u;
            out_in.add_edge(tail, head);
            bip_to_g.push_back(id);
        }
        Matching bm = match_to_completion(out_in, s);
        if (!bm.perfect(out_in))
            fail(errc::internal, "perfect-matching", "regular bipartite graph had no perfect matching");
        for (int v = 0; v < g.n(); ++v)
            succ_edge[static_cast<size_t>(v)] = bip_to_g[static_cast<size_t>(
                bm.a_edge[static_cast<size_t>(v)])];

        // cycles of the successor permutation; alternate edges when even
        std::vector<int> succ(static_cast<size_t>(g.n()));
        for (int v = 0; v < g.n(); ++v)
            succ[static_cast<size_t>(v)] = g.other(succ_edge[static_cast<size_t>(v)], v);
        std::vector<char> visited(static_cast<size_t>(g.n()), 0);
        GraphMatching gm;
        gm.partner.assign(static_cast<size_t>(g.n()), -1);
        gm.edge_of.assign(static_cast<size_t>(g.n()), -1);
        bool odd_cycle = false;
        for (int v0 = 0; v0 < g.n() && !odd_cycle; ++v0) {
            if (visited[static_cast<size_t>(v0)]) continue;
            std::vector<int> cyc;
            int v = v0;
            do {
                cyc.push_back(v);
                visited[static_cast<size_t>(v)] = 1;
                v = succ[static_cast<size_t>(v)];
            } while (v != v0);
            if (cyc.size() % 2 != 0) {
                odd_cycle = true;
                break;
            }
            for (size_t i = 0; i + 1 < cyc.size(); i += 2) {
                int a = cyc[i], b = cyc[i + 1];
                gm.partner[static_cast<size_t>(a)] = b;
                gm.partner[static_cast<size_t>(b)] = a;
                gm.edge_of[static_cast<size_t>(a)] = succ_edge[static_cast<size_t>(a)];
                gm.edge_of[static_cast<size_t>(b)] = succ_edge[static_cast<size_t>(a)];
            }
        }
        if (!odd_cycle) return {gm, attempt + 1};
        if (*dr == 2) // the cycle structure is fixed; retries cannot help
            fail(errc::generation_failure, "perfect-matching",
                 "2-regular input contains an odd cycle, no perfect matching exists");
    }
    fail(errc::generation_failure, "perfect-matching",
         "no all-even-cycle decomposition found in " + std::to_string(attempt_cap) +
             " attempts (odd cycles at the 2-regular base)");
}

bool orientation_condition_holds(int d) {
    if (d < 1) return false;
    double lhs = std::pow(1.0 - 1.0 / (d + 1.0), d) / (d + 1.0);
    double rhs = std::exp(-static_cast<double>(d) * d / 200.0);
    return lhs > rhs;
}

namespace {

class OrientationInstance final : public lll::Instance {
public:
    OrientationInstance(const Graph& g, const GraphMatching& m, int threshold, int d)
        : g_(g), threshold_(threshold), d_(d) {
        int n = g.n();
        vertex_var_.assign(static_cast<size_t>(n), -1);
        for (int v = 0; v < n; ++v) {
            if (m.partner[static_cast<size_t>(v)] < v) continue;
            int idx = static_cast<int>(edges_.size());
            edges_.push_back(m.edge_of[static_cast<size_t>(v)]);
            vertex_var_[static_cast<size_t>(v)] = idx;
            vertex_var_[static_cast<size_t>(m.partner[static_cast<size_t>(v)])] = idx;
        }
        nm_.resize(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v)
            for (int id : g.incident(v)) {
                if (id == m.edge_of[static_cast<size_t>(v)]) continue;
                nm_[static_cast<size_t>(v)].push_back(g.other(id, v));
            }
        // baseline: every edge oriented ends.u -> ends.v
        dir_.assign(edges_.size(), 1);
        is_out_.assign(static_cast<size_t>(n), 0);
        for (size_t i = 0; i < edges_.size(); ++i) {
            EdgeEnds e = g.ends(edges_[i]);
            is_out_[static_cast<size_t>(e.u)] = 1;
            is_out_[static_cast<size_t>(e.v)] = 0;
        }
        cross_.assign(static_cast<size_t>(n), 0);
        for (int v = 0; v < n; ++v) {
            int c = 0;
            for (int w : nm_[static_cast<size_t>(v)])
                if (is_out_[static_cast<size_t>(w)] != is_out_[static_cast<size_t>(v)]) ++c;
            cross_[static_cast<size_t>(v)] = c;
        }
        // vbl(A_v): the matching edges of v and of its non-matching neighbors
        vbl_off_.push_back(0);
        for (int v = 0; v < n; ++v) {
            std::vector<int> vars{vertex_var_[static_cast<size_t>(v)]};
            for (int w : nm_[static_cast<size_t>(v)])
                vars.push_back(vertex_var_[static_cast<size_t>(w)]);
            std::sort(vars.begin(), vars.end());
            vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
            for (int x : vars) vbl_data_.push_back(x);
            vbl_off_.push_back(static_cast<int>(vbl_data_.size()));
        }
    }

    int num_variables() const override { return static_cast<int>(edges_.size()); }
    int num_events() const override { return g_.n(); }
    std::span<const int> vbl(int e) const override {
        return {vbl_data_.data() + vbl_off_[static_cast<size_t>(e)],
                vbl_data_.data() + vbl_off_[static_cast<size_t>(e) + 1]};
    }
    double weight(int) const override { return 1.0 / (d_ + 1.0); } // x(A_v) = 1/(d+1)
    bool holds(int v) const override { return cross_[static_cast<size_t>(v)] < threshold_; }

    void sample_variable(int var, uint64_t key) override {
        char nd = Rng(key).next_bool() ? 1 : 0;
        if (nd == dir_[static_cast<size_t>(var)]) return;
        dir_[static_cast<size_t>(var)] = nd;
        EdgeEnds e = g_.ends(edges_[static_cast<size_t>(var)]);
        flip_class(e.u);
        flip_class(e.v);
    }

    bool vertex_out(int v) const { return is_out_[static_cast<size_t>(v)] != 0; }
    int cross_count(int v) const { return cross_[static_cast<size_t>(v)]; }
    const std::vector<int>& matching_edges() const { return edges_; }
    char direction(int var) const { return dir_[static_cast<size_t>(var)]; }

private:
    void flip_class(int v) {
        char neu = is_out_[static_cast<size_t>(v)] ? 0 : 1;
        is_out_[static_cast<size_t>(v)] = neu;
        cross_[static_cast<size_t>(v)] =
            static_cast<int>(nm_[static_cast<size_t>(v)].size()) - cross_[static_cast<size_t>(v)];
        for (int w : nm_[static_cast<size_t>(v)])
            cross_[static_cast<size_t>(w)] += (is_out_[static_cast<size_t>(w)] != neu) ? 1 : -1;
    }

    const Graph& g_;
    int threshold_;
    int d_;
    std::vector<int> edges_;      // matching edge id per variable
    std::vector<char> dir_;       // 1 = ends.u is the tail
    std::vector<int> vertex_var_; // variable covering vertex v
    std::vector<std::vector<int>> nm_;
    std::vector<char> is_out_;
    std::vector<int> cross_;
    std::vector<int> vbl_data_;
    std::vector<int> vbl_off_;
};

} // namespace

OrientationResult orient_matching_lll(const Graph& g, const GraphMatching& m, uint64_t seed,
                                      int threshold, int algorithm, long long resample_cap) {
    if (!m.perfect(g)) fail(errc::parameter, "orient", "matching is not perfect");
    int d = -1;
    for (int v = 0; v < g.n(); ++v) {
        int nm = g.degree(v) - 1;
        if (d < 0) d = nm;
        else if (d != nm)
            fail(errc::parameter, "orient", "non-matching degree is not uniform");
    }
    if (threshold < 0) threshold = (2 * d + 4) / 5; // ceil(2d/5)
    if (!orientation_condition_holds(d))
        fail(errc::parameter, "orient",
             "orientation condition (1-x)^d * x > e^{-d^2/200} fails at d=" + std::to_string(d));
    if (threshold > d)
        fail(errc::parameter, "orient", "threshold exceeds non-matching degree");

    OrientationInstance inst(g, m, threshold, d);

    lll::RunStats stats;
    if (algorithm == 1) {
        lll::EngineLimits limits;
        limits.resample_cap = resample_cap;
        stats = lll::run_algorithm1(inst, lll::Selection::first_violated, seed, limits);
    } else {
        lll::ScheduleConfig cfg;
        cfg.seed = seed;
        cfg.seq = lll::ScheduleConfig::Seq::geometric;
        stats = lll::run_algorithm2(inst, cfg);
    }

    OrientationResult result;
    result.matching_edges = inst.matching_edges();
    result.edge_forward.resize(result.matching_edges.size());
    for (size_t i = 0; i < result.matching_edges.size(); ++i)
        result.edge_forward[i] = inst.direction(static_cast<int>(i));
    result.is_out.resize(static_cast<size_t>(g.n()));
    for (int v = 0; v < g.n(); ++v) result.is_out[static_cast<size_t>(v)] = inst.vertex_out(v);
    result.nonmatching_degree = d;
    result.threshold = threshold;
    result.stats = std::move(stats);

    // exact output scan, independent of the incremental counters
    for (int v = 0; v < g.n(); ++v) {
        int c = 0;
        for (int id : g.incident(v)) {
            if (id == m.edge_of[static_cast<size_t>(v)]) continue;
            int w = g.other(id, v);
            if (result.is_out[static_cast<size_t>(w)] != result.is_out[static_cast<size_t>(v)]) ++c;
        }
        if (c < threshold)
            fail(errc::verification, "orient", "output scan found a vertex below threshold");
    }
    return result;
}

ZActionReport build_z_action(const Graph& g, const GraphMatching& m, uint64_t seed,
                             int threshold) {
    OrientationResult orient = orient_matching_lll(g, m, key_mix(seed, 1), threshold);
    ZActionReport report;
    report.threshold = orient.threshold;

    // out/in bipartite graph over the non-matching cross edges
    std::vector<int> out_index(static_cast<size_t>(g.n()), -1), in_index(static_cast<size_t>(g.n()), -1);
    std::vector<int> outs, ins;
    for (int v = 0; v < g.n(); ++v) {
        if (orient.is_out[static_cast<size_t>(v)]) {
            out_index[static_cast<size_t>(v)] = static_cast<int>(outs.size());
            outs.push_back(v);
        } else {
            in_index[static_cast<size_t>(v)] = static_cast<int>(ins.size());
            ins.push_back(v);
        }
    }
    if (outs.size() != ins.size())
        fail(errc::internal, "zaction", "orientation did not split vertices evenly");
    BipartiteGraph cross(static_cast<int>(outs.size()), static_cast<int>(ins.size()));
    for (int id : g.alive_edges()) {
        EdgeEnds e = g.ends(id);
        if (m.edge_of[static_cast<size_t>(e.u)] == id) continue; // matching edge
        bool u_out = orient.is_out[static_cast<size_t>(e.u)];
        bool v_out = orient.is_out[static_cast<size_t>(e.v)];
        if (u_out == v_out) continue;
        int a = u_out ? e.u : e.v;
        int b = u_out ? e.v : e.u;
        cross.add_edge(out_index[static_cast<size_t>(a)], in_index[static_cast<size_t>(b)]);
    }

    // Lemma-15 style pre-flight: sampled expansion check is the operative
    // gate; the 50*rho < 1 spectral flag is recorded as advisory
    try {
        SpectralReport sr = spectral_report(g);
        report.rho = sr.rho;
        report.rho_converged = true;
        report.rho_flag = 50.0 * sr.rho < 1.0;
    } catch (const error&) {
        report.rho_converged = false;
    }
    std::vector<int> side_a(cross.na);
    for (int i = 0; i < cross.na; ++i) side_a[static_cast<size_t>(i)] = i;
    ExpansionReport exp = expansion_check(cross.to_graph(), side_a, Rational(3, 2),
                                          key_mix(seed, 2));
    report.expansion_ok = exp.ok;
    report.expansion_sets_checked = exp.sets_checked;
    if (!exp.ok)
        fail(errc::precondition, "zaction-expansion",
             "cross bipartite graph failed the 3/2 expansion check");

    MatchStats stats2;
    Matching m2 = match_to_completion(cross, key_mix(seed, 3), &stats2);
    report.second_matching_deficiency = stats2.deficiency;
    if (!m2.perfect(cross))
        fail(errc::stuck, "zaction-second-matching",
             "second matching imperfect, deficiency " + std::to_string(stats2.deficiency));

    report.successor.assign(static_cast<size_t>(g.n()), -1);
    for (int v = 0; v < g.n(); ++v) {
        if (orient.is_out[static_cast<size_t>(v)]) {
            report.successor[static_cast<size_t>(v)] = m.partner[static_cast<size_t>(v)];
        } else {
            int b = in_index[static_cast<size_t>(v)];
            int a = m2.partner_of_b(cross, b);
            report.successor[static_cast<size_t>(v)] = outs[static_cast<size_t>(a)];
        }
    }
    // verify bijection
    std::vector<char> seen(static_cast<size_t>(g.n()), 0);
    for (int v = 0; v < g.n(); ++v) {
        int w = report.successor[static_cast<size_t>(v)];
        if (w < 0 || seen[static_cast<size_t>(w)])
            fail(errc::verification, "zaction", "successor map is not a bijection");
        seen[static_cast<size_t>(w)] = 1;
    }
    return report;
}

} // namespace lgs

// ---- file io ------------------------------------------------------------------

namespace lgs {

BipartiteGraph parse_bipartite(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long long a = -1, b = -1, m = -1;
    BipartiteGraph g;
    long long seen = 0;
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        if (a < 0) {
            if (!(ls >> a >> b >> m) || a < 0 || b < 0 || m < 0)
                fail(errc::io, "bip-io", "bad header, expected \"a b m\"");
            g = BipartiteGraph(static_cast<int>(a), static_cast<int>(b));
            continue;
        }
        long long u, v;
        if (!(ls >> u >> v) || u < 0 || u >= a || v < 0 || v >= b)
            fail(errc::io, "bip-io", "bad edge line: " + line);
        g.add_edge(static_cast<int>(u), static_cast<int>(v));
        ++seen;
    }
    if (a < 0) fail(errc::io, "bip-io", "empty file");
    if (seen != m) fail(errc::io, "bip-io", "edge count mismatch");
    return g;
}

BipartiteGraph read_bipartite(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "bip-io", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_bipartite(ss.str());
}

std::string format_bipartite(const BipartiteGraph& g) {
    std::vector<std::pair<int, int>> edges = g.edges;
    std::sort(edges.begin(), edges.end());
    std::ostringstream out;
    out << g.na << ' ' << g.nb << ' ' << g.m() << '\n';
    for (auto& [u, v] : edges) out << u << ' ' << v << '\n';
    return out.str();
}

void write_bipartite(const std::string& path, const BipartiteGraph& g) {
    std::ofstream out(path);
    if (!out) fail(errc::io, "bip-io", "cannot write " + path);
    out << format_bipartite(g);
}

std::string format_matching(const BipartiteGraph& g, const Matching& m) {
    std::ostringstream out;
    for (int a = 0; a < g.na; ++a) {
        int e = m.a_edge[static_cast<size_t>(a)];
        if (e < 0) continue;
        out << a << ' ' << g.edges[static_cast<size_t>(e)].second << '\n';
    }
    return out.str();
}

Matching parse_matching(const BipartiteGraph& g, const std::string& text) {
    Matching m = Matching::empty(g);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u >> v) || u < 0 || u >= g.na || v < 0 || v >= g.nb)
            fail(errc::io, "matching-io", "bad pair line: " + line);
        if (m.a_edge[static_cast<size_t>(u)] >= 0 || m.b_edge[static_cast<size_t>(v)] >= 0)
            fail(errc::verification, "matching-io", "vertex covered twice: " + line);
        int found = -1;
        for (int id : g.adj_a[static_cast<size_t>(u)])
            if (g.edges[static_cast<size_t>(id)].second == static_cast<int>(v)) {
                found = id;
                break;
            }
        if (found < 0) fail(errc::verification, "matching-io", "pair is not an edge: " + line);
        m.a_edge[static_cast<size_t>(u)] = found;
        m.b_edge[static_cast<size_t>(v)] = found;
        ++m.size;
    }
    return m;
}

std::string format_graph_matching(const Graph& g, const GraphMatching& m) {
    std::ostringstream out;
    for (int v = 0; v < g.n(); ++v) {
        int p = m.partner[static_cast<size_t>(v)];
        if (p > v) out << v << ' ' << p << '\n';
    }
    return out.str();
}

GraphMatching parse_graph_matching(const Graph& g, const std::string& text) {
    GraphMatching m;
    m.partner.assign(static_cast<size_t>(g.n()), -1);
    m.edge_of.assign(static_cast<size_t>(g.n()), -1);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u >> v) || u < 0 || u >= g.n() || v < 0 || v >= g.n() || u == v)
            fail(errc::io, "matching-io", "bad pair line: " + line);
        if (m.partner[static_cast<size_t>(u)] >= 0 || m.partner[static_cast<size_t>(v)] >= 0)
            fail(errc::verification, "matching-io", "vertex covered twice: " + line);
        std::vector<int> ids = g.edges_between(static_cast<int>(u), static_cast<int>(v));
        if (ids.empty()) fail(errc::verification, "matching-io", "pair is not an edge: " + line);
        m.partner[static_cast<size_t>(u)] = static_cast<int>(v);
        m.partner[static_cast<size_t>(v)] = static_cast<int>(u);
        m.edge_of[static_cast<size_t>(u)] = ids.front();
        m.edge_of[static_cast<size_t>(v)] = ids.front();
    }
    return m;
}

} // namespace lgs
