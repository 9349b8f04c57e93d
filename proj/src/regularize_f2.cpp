#include "lgs/regularize_f2.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "lgs/error.hpp"
#include "lgs/matching.hpp"
#include "lgs/rng.hpp"

#include "json.hpp"

namespace lgs {

std::vector<int> peel_cycles(const Graph& g, uint64_t seed) {
    Graph w = g;
    Rng rng(key_mix(seed, 0x7065656cULL));
    std::vector<int> order(static_cast<size_t>(g.n()));
    for (int i = 0; i < g.n(); ++i) order[static_cast<size_t>(i)] = i;
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.next_below(i)]);

    std::vector<int> parent_edge(static_cast<size_t>(g.n())), parent_vertex(static_cast<size_t>(g.n()));
    std::vector<char> visited(static_cast<size_t>(g.n()));
    struct Frame {
        int v;
        size_t i;
    };
    while (true) {
        std::fill(visited.begin(), visited.end(), 0);
        std::vector<int> cycle_edges;
        for (int root : order) {
            if (visited[static_cast<size_t>(root)]) continue;
            visited[static_cast<size_t>(root)] = 1;
            parent_edge[static_cast<size_t>(root)] = -1;
            parent_vertex[static_cast<size_t>(root)] = -1;
            std::vector<Frame> stack{{root, 0}};
            while (!stack.empty() && cycle_edges.empty()) {
                Frame& f = stack.back();
                const std::vector<int>& inc = w.incident(f.v);
                if (f.i >= inc.size()) {
                    stack.pop_back();
                    continue;
                }
                int id = inc[f.i++];
                if (id == parent_edge[static_cast<size_t>(f.v)]) continue;
                int u = w.other(id, f.v);
                if (!visited[static_cast<size_t>(u)]) {
                    visited[static_cast<size_t>(u)] = 1;
                    parent_edge[static_cast<size_t>(u)] = id;
                    parent_vertex[static_cast<size_t>(u)] = f.v;
                    stack.push_back({u, 0});
                } else {
                    // back edge to an ancestor: close the cycle
                    cycle_edges.push_back(id);
                    int x = f.v;
                    while (x != u) {
                        cycle_edges.push_back(parent_edge[static_cast<size_t>(x)]);
                        x = parent_vertex[static_cast<size_t>(x)];
                    }
                }
            }
            if (!cycle_edges.empty()) break;
        }
        if (cycle_edges.empty()) break;
        for (int id : cycle_edges) w.remove_edge(id);
    }
    return w.alive_edges();
}

SurgeryState SurgeryState::init(const WitnessedSubgraph& ws, int delta, uint64_t seed) {
    SurgeryState st;
    st.work = ws;
    st.delta = delta;
    st.in_forest.assign(static_cast<size_t>(ws.g.edge_slots()), 0);
    for (int id : peel_cycles(ws.g, seed)) st.in_forest[static_cast<size_t>(id)] = 1;
    st.special.assign(static_cast<size_t>(ws.n), 0);
    st.matched.assign(static_cast<size_t>(ws.n), 0);
    for (int v = 0; v < ws.n; ++v)
        if (ws.g.degree(v) == delta + 1) st.special[static_cast<size_t>(v)] = 1;
    st.chord.assign(static_cast<size_t>(ws.g.edge_slots()), 0);
    return st;
}

int SurgeryState::forest_degree(int v) const {
    int c = 0;
    for (int id : work.g.incident(v))
        if (in_forest[static_cast<size_t>(id)]) ++c;
    return c;
}

std::vector<int> SurgeryState::unmatched_specials() const {
    std::vector<int> out;
    for (int v = 0; v < work.n; ++v)
        if (special[static_cast<size_t>(v)] && !matched[static_cast<size_t>(v)]) out.push_back(v);
    return out;
}

namespace {

std::vector<int> oriented_witness(const WitnessedSubgraph& ws, int edge_id, int from) {
    const std::vector<int>& w = ws.witness[static_cast<size_t>(edge_id)];
    std::vector<int> out(w.begin(), w.end());
    if (out.front() != from) std::reverse(out.begin(), out.end());
    if (out.front() != from)
        fail(errc::internal, "surgery", "witness does not reach the requested endpoint");
    return out;
}

} // namespace

void surgery_on_path(SurgeryState& state, const std::vector<int>& verts,
                     const std::vector<int>& edges) {
    size_t k = edges.size();
    auto bad = [&](const std::string& why) {
        fail(errc::precondition, "surgery", why + " (state unchanged)");
    };
    if (verts.size() != k + 1 || k < 3) bad("path needs at least 3 edges and two distinct specials");
    for (size_t i = 0; i < k; ++i) {
        if (!state.work.g.edge_alive(edges[i])) bad("path edge not alive");
        EdgeEnds e = state.work.g.ends(edges[i]);
        bool fits = (e.u == verts[i] && e.v == verts[i + 1]) ||
                    (e.v == verts[i] && e.u == verts[i + 1]);
        if (!fits) bad("edge does not join consecutive path vertices");
        for (size_t j = i + 1; j < k; ++j)
            if (edges[i] == edges[j]) bad("repeated edge on path");
    }
    int s1 = verts[1], s2 = verts[k - 1];
    if (s1 == s2) bad("the two special endpoints must be distinct");
    for (int s : {s1, s2}) {
        if (!state.special[static_cast<size_t>(s)]) bad("path endpoint is not special");
        if (state.matched[static_cast<size_t>(s)]) bad("special already matched");
    }
    for (int end_edge : {edges[0], edges[k - 1]}) {
        if (state.in_forest[static_cast<size_t>(end_edge)]) bad("end edge lies in the forest");
        if (state.chord[static_cast<size_t>(end_edge)]) bad("end edge is in the used-edge ledger");
    }
    if (verts[0] == verts[2] || verts[k] == verts[k - 2]) bad("skip chord would be a loop");

    std::vector<int> before(verts.size());
    for (size_t i = 0; i < verts.size(); ++i)
        before[i] = state.work.g.degree(verts[i]);

    // glue chord witnesses before touching the graph
    std::vector<std::vector<int>> chord_wit(k - 1);
    for (size_t i = 0; i + 2 <= k; ++i) {
        std::vector<int> w1 = oriented_witness(state.work, edges[i], verts[i]);
        std::vector<int> w2 = oriented_witness(state.work, edges[i + 1], verts[i + 1]);
        w1.insert(w1.end(), w2.begin() + 1, w2.end());
        chord_wit[i] = std::move(w1);
    }

    for (size_t i = 0; i < k; ++i) {
        state.work.g.remove_edge(edges[i]);
        state.in_forest[static_cast<size_t>(edges[i])] = 0;
    }
    for (size_t i = 0; i + 2 <= k; ++i) {
        int id = state.work.g.add_edge(verts[i], verts[i + 2]);
        state.work.witness.resize(static_cast<size_t>(state.work.g.edge_slots()));
        state.work.witness[static_cast<size_t>(id)] = std::move(chord_wit[i]);
        state.in_forest.resize(static_cast<size_t>(state.work.g.edge_slots()), 0);
        state.chord.resize(static_cast<size_t>(state.work.g.edge_slots()), 0);
        state.chord[static_cast<size_t>(id)] = 1;
    }
    state.matched[static_cast<size_t>(s1)] = 1;
    state.matched[static_cast<size_t>(s2)] = 1;

    // degree accounting: exactly the two specials drop, each by one
    for (size_t i = 0; i < verts.size(); ++i) {
        int expect = before[i];
        if (verts[i] == s1 || verts[i] == s2) expect -= 1;
        // a vertex may appear several times (extension endpoint on the path);
        // only check each occurrence once
        bool first = true;
        for (size_t j = 0; j < i; ++j)
            if (verts[j] == verts[i]) first = false;
        if (first && state.work.g.degree(verts[i]) != expect)
            fail(errc::internal, "surgery", "degree accounting failed at vertex " +
                                                std::to_string(verts[i]));
    }
}

void surgery_on_path(SurgeryState& state, const std::vector<int>& verts) {
    if (verts.size() < 4) fail(errc::precondition, "surgery", "path too short (state unchanged)");
    std::vector<int> edges;
    std::vector<char> taken(static_cast<size_t>(state.work.g.edge_slots()), 0);
    for (size_t i = 0; i + 1 < verts.size(); ++i) {
        // prefer forest edges for the interior, any unused edge otherwise
        int pick = -1;
        for (int id : state.work.g.incident(verts[i])) {
            if (taken[static_cast<size_t>(id)]) continue;
            if (state.work.g.other(id, verts[i]) != verts[i + 1]) continue;
            bool interior = i > 0 && i + 2 < verts.size();
            if (interior && state.in_forest[static_cast<size_t>(id)]) {
                pick = id;
                break;
            }
            if (pick < 0) pick = id;
        }
        if (pick < 0)
            fail(errc::precondition, "surgery", "consecutive vertices are not adjacent");
        taken[static_cast<size_t>(pick)] = 1;
        edges.push_back(pick);
    }
    surgery_on_path(state, verts, edges);
}

namespace {

struct ForestView {
    const SurgeryState& st;
    std::vector<int> deg;

    explicit ForestView(const SurgeryState& s) : st(s) {
        deg.assign(static_cast<size_t>(s.work.n), 0);
        for (int id : s.work.g.alive_edges())
            if (s.in_forest[static_cast<size_t>(id)]) {
                EdgeEnds e = s.work.g.ends(id);
                ++deg[static_cast<size_t>(e.u)];
                ++deg[static_cast<size_t>(e.v)];
            }
    }

    void forest_neighbors(int v, std::vector<std::pair<int, int>>& out) const {
        out.clear();
        for (int id : st.work.g.incident(v))
            if (st.in_forest[static_cast<size_t>(id)])
                out.emplace_back(st.work.g.other(id, v), id);
        std::sort(out.begin(), out.end());
    }
};

// leaf-to-leaf forest path through at most one branch vertex, found from the
// deepest branch vertex of the component containing `start`
struct LeafPair {
    std::vector<int> verts; // x_1 .. x_{k-1}
    std::vector<int> edges;
};

LeafPair find_leaf_pair(const SurgeryState& st, const ForestView& fv, int start) {
    // map the component
    std::vector<int> comp;
    std::vector<int> parent_v(static_cast<size_t>(st.work.n), -2),
        parent_e(static_cast<size_t>(st.work.n), -1), depth(static_cast<size_t>(st.work.n), 0);
    std::deque<int> queue{start};
    parent_v[static_cast<size_t>(start)] = -1;
    std::vector<std::pair<int, int>> nbr;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        comp.push_back(v);
        fv.forest_neighbors(v, nbr);
        for (auto [w, id] : nbr) {
            if (parent_v[static_cast<size_t>(w)] != -2) continue;
            parent_v[static_cast<size_t>(w)] = v;
            parent_e[static_cast<size_t>(w)] = id;
            depth[static_cast<size_t>(w)] = depth[static_cast<size_t>(v)] + 1;
            queue.push_back(w);
        }
    }
    // re-root at a leaf for well-defined child directions
    int root = -1;
    for (int v : comp)
        if (fv.deg[static_cast<size_t>(v)] == 1 && (root < 0 || v < root)) root = v;
    if (root < 0) fail(errc::stuck, "regularize", "component has no forest leaf");
    if (root != start) {
        for (int v : comp) parent_v[static_cast<size_t>(v)] = -2;
        queue = {root};
        parent_v[static_cast<size_t>(root)] = -1;
        depth[static_cast<size_t>(root)] = 0;
        std::vector<int> comp2;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            comp2.push_back(v);
            fv.forest_neighbors(v, nbr);
            for (auto [w, id] : nbr) {
                if (parent_v[static_cast<size_t>(w)] != -2) continue;
                parent_v[static_cast<size_t>(w)] = v;
                parent_e[static_cast<size_t>(w)] = id;
                depth[static_cast<size_t>(w)] = depth[static_cast<size_t>(v)] + 1;
                queue.push_back(w);
            }
        }
        comp = std::move(comp2);
    }

    int branch = -1;
    for (int v : comp) {
        if (fv.deg[static_cast<size_t>(v)] < 3) continue;
        if (branch < 0 || depth[static_cast<size_t>(v)] > depth[static_cast<size_t>(branch)] ||
            (depth[static_cast<size_t>(v)] == depth[static_cast<size_t>(branch)] && v < branch))
            branch = v;
    }

    LeafPair out;
    if (branch < 0) {
        // the component is a bare path: connect its two leaves
        int other_leaf = -1;
        for (int v : comp)
            if (v != root && fv.deg[static_cast<size_t>(v)] == 1) other_leaf = v;
        if (other_leaf < 0) fail(errc::stuck, "regularize", "path component with one leaf");
        int x = other_leaf;
        std::vector<int> rv, re;
        while (x != root) {
            rv.push_back(x);
            re.push_back(parent_e[static_cast<size_t>(x)]);
            x = parent_v[static_cast<size_t>(x)];
        }
        rv.push_back(root);
        out.verts = std::move(rv); // leaf .. root
        out.edges = std::move(re);
        return out;
    }

    // two pendant directions below the deepest branch vertex
    fv.forest_neighbors(branch, nbr);
    std::vector<std::vector<std::pair<int, int>>> pendants; // (vertex, edge) walks
    for (auto [child, id] : nbr) {
        if (parent_e[static_cast<size_t>(child)] != id) continue; // only true child edges
        std::vector<std::pair<int, int>> walk{{child, id}};
        int cur = child;
        std::vector<std::pair<int, int>> cn;
        while (fv.deg[static_cast<size_t>(cur)] == 2) {
            fv.forest_neighbors(cur, cn); // exactly two entries
            int ne = (cn[0].second == walk.back().second) ? cn[1].second : cn[0].second;
            int nxt = st.work.g.other(ne, cur);
            walk.emplace_back(nxt, ne);
            cur = nxt;
        }
        if (fv.deg[static_cast<size_t>(cur)] != 1)
            fail(errc::internal, "regularize", "pendant path below the deepest branch hit a branch");
        pendants.push_back(std::move(walk));
        if (pendants.size() == 2) break;
    }
    if (pendants.size() < 2) fail(errc::stuck, "regularize", "branch vertex lacks two pendant paths");

    // path: leaf1 .. branch .. leaf2
    std::vector<int>& verts = out.verts;
    std::vector<int>& edges = out.edges;
    const auto& p1 = pendants[0];
    for (size_t i = p1.size(); i-- > 0;) {
        verts.push_back(p1[i].first);
        edges.push_back(p1[i].second);
    }
    verts.push_back(branch);
    for (const auto& [v, id] : pendants[1]) {
        edges.push_back(id);
        verts.push_back(v);
    }
    return out;
}

int pick_extension(const SurgeryState& st, int leaf, int avoid_vertex,
                   const std::vector<int>& path_edges, int avoid_edge) {
    int best = -1;
    for (int id : st.work.g.incident(leaf)) {
        if (st.in_forest[static_cast<size_t>(id)]) continue;
        if (st.chord[static_cast<size_t>(id)]) continue;
        if (id == avoid_edge) continue;
        if (std::find(path_edges.begin(), path_edges.end(), id) != path_edges.end()) continue;
        if (st.work.g.other(id, leaf) == avoid_vertex) continue;
        if (best < 0 || id < best) best = id;
    }
    return best;
}

} // namespace

WitnessedSubgraph regularize(const WitnessedSubgraph& ws, int delta, uint64_t seed,
                             RegularizeReport* report) {
    for (int v = 0; v < ws.n; ++v) {
        int d = ws.g.degree(v);
        if (d != delta && d != delta + 1)
            fail(errc::parameter, "regularize",
                 "degrees must lie in {delta, delta+1}, vertex " + std::to_string(v) + " has " +
                     std::to_string(d));
    }
    for (int id : ws.g.alive_edges()) {
        EdgeEnds e = ws.g.ends(id);
        if (ws.g.degree(e.u) == delta + 1 && ws.g.degree(e.v) == delta + 1)
            fail(errc::precondition, "regularize", "adjacent special vertices");
    }

    RegularizeReport local;
    RegularizeReport& rep = report ? *report : local;
    rep.girth_in = girth(ws.g);

    SurgeryState st = SurgeryState::init(ws, delta, seed);
    rep.specials = static_cast<int>(st.unmatched_specials().size());
    if (rep.specials % 2 != 0)
        fail(errc::stuck, "regularize",
             "odd number of special vertices (" + std::to_string(rep.specials) +
                 "), parity obstruction");

    // peeling preserves degree parity at every vertex
    for (int v = 0; v < ws.n; ++v)
        if ((st.forest_degree(v) - ws.g.degree(v)) % 2 != 0)
            fail(errc::internal, "regularize", "cycle peeling changed a degree parity");

    int guard = rep.specials / 2 + 4;
    while (true) {
        std::vector<int> todo = st.unmatched_specials();
        if (todo.empty()) break;
        if (--guard < 0)
            fail(errc::stuck, "regularize", "surgery loop exceeded its budget");

        ForestView fv(st);
        for (int s : todo)
            if (fv.deg[static_cast<size_t>(s)] % 2 == 0)
                fail(errc::stuck, "regularize",
                     "unmatched special " + std::to_string(s) + " lost forest parity");

        LeafPair pair = find_leaf_pair(st, fv, todo.front());
        // the interior path runs x_1 .. x_{k-1}; extend one edge at each end
        int leaf1 = pair.verts.front(), leaf2 = pair.verts.back();
        int e0 = pick_extension(st, leaf1, pair.verts.size() > 1 ? pair.verts[1] : -1,
                                pair.edges, -1);
        if (e0 < 0)
            fail(errc::stuck, "regularize",
                 "no extension edge at special " + std::to_string(leaf1));
        int ek = pick_extension(st, leaf2, pair.verts[pair.verts.size() - 2], pair.edges, e0);
        if (ek < 0)
            fail(errc::stuck, "regularize",
                 "no extension edge at special " + std::to_string(leaf2));

        std::vector<int> verts;
        verts.push_back(st.work.g.other(e0, leaf1));
        verts.insert(verts.end(), pair.verts.begin(), pair.verts.end());
        verts.push_back(st.work.g.other(ek, leaf2));
        std::vector<int> edges;
        edges.push_back(e0);
        edges.insert(edges.end(), pair.edges.begin(), pair.edges.end());
        edges.push_back(ek);
        surgery_on_path(st, verts, edges);
        ++rep.surgeries;
    }

    WitnessedSubgraph out = std::move(st.work);
    out.bound = 3 * ws.bound;

    auto dr = out.g.regular_degree();
    if (!dr || *dr != delta)
        fail(errc::verification, "regularize", "output is not delta-regular");
    rep.max_witness = out.max_witness_length();
    if (rep.max_witness > out.bound)
        fail(errc::verification, "regularize", "witness exceeds 3x the input bound");
    rep.girth_out = girth(out.g);
    if (rep.girth_in && rep.girth_out && 3LL * *rep.girth_out < *rep.girth_in)
        fail(errc::verification, "regularize", "output girth below a third of the input girth");
    if (rep.girth_in && !rep.girth_out)
        ; // acyclic output from cyclic input is fine
    return out;
}

MatchSpecialsReport local_match_specials(const WitnessedSubgraph& ws, int delta, uint64_t seed,
                                         int rounds) {
    if (delta % 2 == 0)
        fail(errc::parameter, "match-specials", "delta must be odd (specials have even degree)");
    const Graph& g = ws.g;
    MatchSpecialsReport rep;
    std::vector<char> special(static_cast<size_t>(g.n()), 0), matched(static_cast<size_t>(g.n()), 0);
    for (int v = 0; v < g.n(); ++v)
        if (g.degree(v) == delta + 1) {
            special[static_cast<size_t>(v)] = 1;
            ++rep.specials_total;
        }
    std::vector<char> used(static_cast<size_t>(g.edge_slots()), 0);

    struct Candidate {
        std::vector<int> verts;
        std::vector<int> edges;
    };

    auto enumerate = [&](int k) {
        std::vector<Candidate> out;
        std::vector<int> verts, edges;
        std::vector<char> on_path(static_cast<size_t>(g.n()), 0);
        auto dfs = [&](auto&& self, int v) -> void {
            if (static_cast<int>(edges.size()) == k) {
                int t = verts.back();
                if (t > verts.front() && special[static_cast<size_t>(t)] &&
                    !matched[static_cast<size_t>(t)])
                    out.push_back({verts, edges});
                return;
            }
            for (int id : g.incident(v)) {
                if (used[static_cast<size_t>(id)]) continue;
                if (std::find(edges.begin(), edges.end(), id) != edges.end()) continue;
                int w = g.other(id, v);
                if (on_path[static_cast<size_t>(w)]) continue;
                on_path[static_cast<size_t>(w)] = 1;
                verts.push_back(w);
                edges.push_back(id);
                self(self, w);
                on_path[static_cast<size_t>(w)] = 0;
                verts.pop_back();
                edges.pop_back();
            }
        };
        for (int s = 0; s < g.n(); ++s) {
            if (!special[static_cast<size_t>(s)] || matched[static_cast<size_t>(s)]) continue;
            verts = {s};
            edges.clear();
            on_path[static_cast<size_t>(s)] = 1;
            dfs(dfs, s);
            on_path[static_cast<size_t>(s)] = 0;
        }
        return out;
    };

    for (int k = 1; k <= rounds; ++k) {
        for (int substep = 0; substep < 1000; ++substep) {
            std::vector<Candidate> cands = enumerate(k);
            if (cands.empty()) break;
            std::vector<std::pair<double, int>> best(static_cast<size_t>(g.n()), {-1.0, -1});
            auto pri = [&](int i) {
                return keyed_uniform(key_mix(seed, static_cast<uint64_t>(k),
                                             static_cast<uint64_t>(substep),
                                             static_cast<uint64_t>(i)));
            };
            for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
                std::pair<double, int> p{pri(i), i};
                for (int v : cands[static_cast<size_t>(i)].verts)
                    best[static_cast<size_t>(v)] = std::max(best[static_cast<size_t>(v)], p);
            }
            for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
                std::pair<double, int> p{pri(i), i};
                bool keep = true;
                for (int v : cands[static_cast<size_t>(i)].verts)
                    if (best[static_cast<size_t>(v)] != p) {
                        keep = false;
                        break;
                    }
                if (!keep) continue;
                matched[static_cast<size_t>(cands[static_cast<size_t>(i)].verts.front())] = 1;
                matched[static_cast<size_t>(cands[static_cast<size_t>(i)].verts.back())] = 1;
                for (int id : cands[static_cast<size_t>(i)].edges) used[static_cast<size_t>(id)] = 1;
                rep.paths.push_back(cands[static_cast<size_t>(i)].verts);
            }
        }
        int unmatched = 0;
        std::vector<int> um;
        for (int v = 0; v < g.n(); ++v)
            if (special[static_cast<size_t>(v)] && !matched[static_cast<size_t>(v)]) {
                ++unmatched;
                um.push_back(v);
            }
        rep.unmatched_after_round.push_back(unmatched);
        // distance guarantee: no unmatched pair within distance k
        bool ok = true;
        for (int v : um) {
            std::vector<int> dist = distances_from(g, v, k);
            for (int w : um)
                if (w != v && dist[static_cast<size_t>(w)] >= 0) ok = false;
        }
        rep.no_close_pair_after_round.push_back(ok ? 1 : 0);
    }
    return rep;
}

TwoFactors two_factorize(const Graph& g4, uint64_t seed) {
    auto dr = g4.regular_degree();
    if (!dr || *dr != 4) fail(errc::parameter, "two-factorize", "input must be 4-regular");

    std::vector<char> forward = euler_orient(g4, key_mix(seed, 0x3266ULL));
    BipartiteGraph out_in(g4.n(), g4.n());
    std::vector<int> bip_to_g;
    for (int id : g4.alive_edges()) {
        EdgeEnds e = g4.ends(id);
        int tail = forward[static_cast<size_t>(id)] ? e.u : e.v;
        int head = forward[static_cast<size_t>(id)] ? e.v : e.u;
        out_in.add_edge(tail, head);
        bip_to_g.push_back(id);
    }
    Matching bm = match_to_completion(out_in, key_mix(seed, 0x3267ULL));
    if (!bm.perfect(out_in))
        fail(errc::internal, "two-factorize", "2-regular bipartite graph had no perfect matching");

    TwoFactors tf;
    std::vector<char> in_f1(static_cast<size_t>(g4.edge_slots()), 0);
    for (int a = 0; a < out_in.na; ++a)
        in_f1[static_cast<size_t>(bip_to_g[static_cast<size_t>(bm.a_edge[static_cast<size_t>(a)])])] = 1;
    tf.f1 = Graph(g4.n());
    tf.f2 = Graph(g4.n());
    for (int id : g4.alive_edges()) {
        EdgeEnds e = g4.ends(id);
        if (in_f1[static_cast<size_t>(id)]) {
            tf.factor1_ids.push_back(id);
            tf.f1.add_edge(e.u, e.v);
        } else {
            tf.factor2_ids.push_back(id);
            tf.f2.add_edge(e.u, e.v);
        }
    }
    for (const Graph* f : {&tf.f1, &tf.f2}) {
        auto fr = f->regular_degree();
        if (!fr || *fr != 2)
            fail(errc::internal, "two-factorize", "factor is not 2-regular");
    }
    return tf;
}

std::vector<int> euler_orient_2regular(const Graph& f) {
    auto dr = f.regular_degree();
    if (!dr || *dr != 2) fail(errc::parameter, "euler-2regular", "input must be 2-regular");
    std::vector<int> succ(static_cast<size_t>(f.n()), -1);
    std::vector<char> visited(static_cast<size_t>(f.n()), 0);
    for (int v0 = 0; v0 < f.n(); ++v0) {
        if (visited[static_cast<size_t>(v0)]) continue;
        // orient the lowest-id vertex toward its lower-id neighbor
        const std::vector<int>& inc = f.incident(v0);
        int e0 = inc[0], e1 = inc[1];
        int n0 = f.other(e0, v0), n1 = f.other(e1, v0);
        int first_edge = (n0 < n1 || (n0 == n1 && e0 < e1)) ? e0 : e1;
        int prev_edge = first_edge;
        int cur = f.other(first_edge, v0);
        visited[static_cast<size_t>(v0)] = 1;
        succ[static_cast<size_t>(v0)] = cur;
        while (cur != v0) {
            visited[static_cast<size_t>(cur)] = 1;
            const std::vector<int>& ci = f.incident(cur);
            int next_edge = (ci[0] == prev_edge) ? ci[1] : ci[0];
            int nxt = f.other(next_edge, cur);
            succ[static_cast<size_t>(cur)] = nxt;
            prev_edge = next_edge;
            cur = nxt;
        }
    }
    return succ;
}

PermutationPair parse_permutation_pair(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<int>> rows;
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        std::vector<int> row;
        long long x;
        while (ls >> x) row.push_back(static_cast<int>(x));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.size() != 2 || rows[0].size() != rows[1].size() || rows[0].empty())
        fail(errc::io, "perm-io", "expected two lines of n images");
    PermutationPair p;
    p.alpha = std::move(rows[0]);
    p.beta = std::move(rows[1]);
    int n = static_cast<int>(p.alpha.size());
    for (const std::vector<int>* perm : {&p.alpha, &p.beta})
        for (int x : *perm)
            if (x < 0 || x >= n) fail(errc::io, "perm-io", "image out of range");
    return p;
}

PermutationPair read_permutation_pair(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "perm-io", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_permutation_pair(ss.str());
}

std::string format_permutation_pair(const PermutationPair& p) {
    std::ostringstream out;
    for (const std::vector<int>* perm : {&p.alpha, &p.beta}) {
        for (size_t i = 0; i < perm->size(); ++i)
            out << (i ? " " : "") << (*perm)[i];
        out << '\n';
    }
    return out.str();
}

void write_permutation_pair(const std::string& path, const PermutationPair& p) {
    std::ofstream out(path);
    if (!out) fail(errc::io, "perm-io", "cannot write " + path);
    out << format_permutation_pair(p);
}

namespace {

std::vector<int> invert_permutation(const std::vector<int>& p, const char* who) {
    std::vector<int> inv(p.size(), -1);
    for (size_t i = 0; i < p.size(); ++i) {
        int x = p[i];
        if (x < 0 || x >= static_cast<int>(p.size()) || inv[static_cast<size_t>(x)] >= 0)
            fail(errc::parameter, "word-check", std::string(who) + " is not a bijection");
        inv[static_cast<size_t>(x)] = static_cast<int>(i);
    }
    return inv;
}

} // namespace

WordReport word_check(const PermutationPair& p, int max_len) {
    if (max_len < 1) fail(errc::parameter, "word-check", "max_len must be >= 1");
    int n = static_cast<int>(p.alpha.size());
    std::vector<std::vector<int>> gens{p.alpha, invert_permutation(p.alpha, "alpha"), p.beta,
                                       invert_permutation(p.beta, "beta")};
    const char* names = "aAbB";

    WordReport rep;
    rep.words_per_length.assign(static_cast<size_t>(max_len) + 1, 0);
    std::vector<char> violated(static_cast<size_t>(max_len) + 1, 0);
    int first_violation_len = max_len + 1;

    // composed[d][x] = w(x) for the current word of length d; appending a
    // generator g maps it to composed[d][g[x]]
    std::vector<std::vector<int>> composed(static_cast<size_t>(max_len) + 1,
                                           std::vector<int>(static_cast<size_t>(n)));
    for (int x = 0; x < n; ++x) composed[0][static_cast<size_t>(x)] = x;

    std::vector<int> word;
    auto dfs = [&](auto&& self, int depth) -> void {
        if (depth == max_len) return;
        for (int gidx = 0; gidx < 4; ++gidx) {
            if (!word.empty() && (word.back() ^ 1) == gidx) continue; // reduced words only
            word.push_back(gidx);
            const std::vector<int>& gen = gens[static_cast<size_t>(gidx)];
            for (int x = 0; x < n; ++x)
                composed[static_cast<size_t>(depth) + 1][static_cast<size_t>(x)] =
                    composed[static_cast<size_t>(depth)][static_cast<size_t>(gen[static_cast<size_t>(x)])];
            int len = depth + 1;
            ++rep.words_per_length[static_cast<size_t>(len)];
            long long fixed = 0;
            for (int x = 0; x < n; ++x)
                if (composed[static_cast<size_t>(len)][static_cast<size_t>(x)] == x) ++fixed;
            if (fixed > 0) {
                violated[static_cast<size_t>(len)] = 1;
                if (len < first_violation_len) {
                    first_violation_len = len;
                    rep.fixed_points = fixed;
                    rep.violating_word.clear();
                    for (int gi : word) rep.violating_word += names[gi];
                }
            }
            self(self, depth + 1);
            word.pop_back();
        }
    };
    dfs(dfs, 0);

    rep.free_up_to = max_len;
    for (int len = 1; len <= max_len; ++len)
        if (violated[static_cast<size_t>(len)]) {
            rep.free_up_to = len - 1;
            break;
        }
    for (long long c : rep.words_per_length) rep.words_checked += c;
    return rep;
}

namespace {

int displacement(const Graph& host, int x, int target, int cap) {
    if (x == target) return 0;
    std::vector<int> dist = distances_from(host, x, cap);
    int d = dist[static_cast<size_t>(target)];
    return d < 0 ? cap + 1 : d;
}

} // namespace

F2Result build_f2(const Graph& g, const Rational& lambda, int g_target, uint64_t seed,
                  const F2Options& opts) {
    auto dr = g.regular_degree();
    if (!dr) fail(errc::parameter, "f2", "input graph is not regular");

    LipschitzOptions lo = opts.lipschitz;
    LipschitzResult lip = lipschitz_extract(g, lambda, 4, g_target, key_mix(seed, 0xf2a1), lo);

    RegularizeReport rr;
    WitnessedSubgraph reg = regularize(lip.h, 4, key_mix(seed, 0xf2a2), &rr);

    TwoFactors tf = two_factorize(reg.g, key_mix(seed, 0xf2a3));
    F2Result result;
    result.perms.alpha = euler_orient_2regular(tf.f1);
    result.perms.beta = euler_orient_2regular(tf.f2);
    result.perms.displacement_bound = reg.bound;
    result.regular4 = std::move(reg);

    int max_a = 0, max_b = 0;
    for (int x = 0; x < g.n(); ++x) {
        max_a = std::max(max_a,
                         displacement(g, x, result.perms.alpha[static_cast<size_t>(x)],
                                      result.perms.displacement_bound));
        max_b = std::max(max_b,
                         displacement(g, x, result.perms.beta[static_cast<size_t>(x)],
                                      result.perms.displacement_bound));
    }
    if (max_a > result.perms.displacement_bound || max_b > result.perms.displacement_bound)
        fail(errc::verification, "f2", "displacement exceeds the declared bound");

    WordReport wr = word_check(result.perms, opts.word_len_cap);
    int required = std::min<long long>(g_target / result.perms.displacement_bound - 1,
                                       opts.word_len_cap);
    if (required < 0) required = 0;
    if (wr.free_up_to < required)
        fail(errc::verification, "f2",
             "fixed-point-free guarantee failed below length " + std::to_string(required));

    result.cert.n = g.n();
    result.cert.d = *dr;
    result.cert.g_target = g_target;
    result.cert.L = result.perms.displacement_bound;
    result.cert.L_lipschitz = lip.cert.L;
    result.cert.max_displacement_alpha = max_a;
    result.cert.max_displacement_beta = max_b;
    result.cert.free_up_to = wr.free_up_to;
    result.cert.required_free_length = required;
    result.cert.words_checked = wr.words_checked;
    result.cert.seed = seed;
    return result;
}

std::string F2Certificate::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["d"] = d;
    j["g_target"] = g_target;
    j["L"] = L;
    j["L_lipschitz"] = L_lipschitz;
    j["max_displacement_alpha"] = max_displacement_alpha;
    j["max_displacement_beta"] = max_displacement_beta;
    j["free_up_to"] = free_up_to;
    j["required_free_length"] = required_free_length;
    j["words_checked"] = words_checked;
    j["seed"] = seed;
    return j.dump();
}

} // namespace lgs
