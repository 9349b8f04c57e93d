#include "lgs/verify.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"

namespace lgs::verify {

std::string Report::to_json() const {
    nlohmann::json j;
    j["ok"] = ok;
    j["failures"] = failures;
    return j.dump();
}

Report subgraph(const Graph& host, const Graph& sub, int delta, int g) {
    Report r;
    r.check(sub.n() == host.n(), "vertex count differs from host (not spanning)");
    // multiset containment of edges
    std::map<std::pair<int, int>, int> have;
    for (int id : host.alive_edges()) {
        EdgeEnds e = host.ends(id);
        ++have[std::minmax(e.u, e.v)];
    }
    for (int id : sub.alive_edges()) {
        EdgeEnds e = sub.ends(id);
        auto key = std::minmax(e.u, e.v);
        auto it = have.find(key);
        if (it == have.end() || it->second == 0) {
            r.check(false, "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                               ") is not available in the host");
        } else {
            --it->second;
        }
    }
    r.check(sub.min_degree() >= delta, "minimum degree " + std::to_string(sub.min_degree()) +
                                           " below " + std::to_string(delta));
    std::optional<int> gf = girth(sub);
    r.check(!gf || *gf >= g, "girth " + (gf ? std::to_string(*gf) : "inf") + " below " +
                                 std::to_string(g));
    return r;
}

Report witnessed(const Graph& host, const WitnessedSubgraph& ws, int delta, int g_target) {
    Report r;
    r.check(ws.n == host.n(), "vertex count differs from host");
    for (int id : ws.g.alive_edges()) {
        EdgeEnds e = ws.g.ends(id);
        const std::vector<int>& w = ws.witness[static_cast<size_t>(id)];
        if (w.size() < 2) {
            r.check(false, "edge " + std::to_string(id) + " has no witness");
            continue;
        }
        bool endpoints_ok = (w.front() == e.u && w.back() == e.v) ||
                            (w.front() == e.v && w.back() == e.u);
        r.check(endpoints_ok, "witness endpoints mismatch on edge " + std::to_string(id));
        bool walk_ok = true;
        for (size_t i = 0; i + 1 < w.size(); ++i)
            if (!host.adjacent(w[i], w[i + 1])) walk_ok = false;
        r.check(walk_ok, "witness of edge " + std::to_string(id) + " is not a walk in the host");
        r.check(static_cast<int>(w.size()) - 1 <= ws.bound,
                "witness of edge " + std::to_string(id) + " exceeds the declared bound");
        // independent BFS distance check
        std::vector<int> dist = distances_from(host, e.u, ws.bound);
        r.check(dist[static_cast<size_t>(e.v)] >= 0,
                "host distance of edge " + std::to_string(id) + " exceeds the bound");
        if (!r.ok && r.failures.size() > 16) return r; // enough evidence
    }
    if (delta >= 0) {
        r.check(ws.g.min_degree() >= delta, "minimum degree below delta");
        r.check(ws.g.max_degree() <= delta + 1, "maximum degree above delta+1");
    }
    if (g_target >= 0) {
        std::optional<int> gf = girth(ws.g);
        r.check(!gf || static_cast<long long>(*gf) * ws.bound >= g_target,
                "girth times bound falls below the target");
    }
    return r;
}

Report permutations(const Graph& host, const PermutationPair& p, int max_disp, int word_len,
                    int require_free) {
    Report r;
    int n = host.n();
    r.check(static_cast<int>(p.alpha.size()) == n && static_cast<int>(p.beta.size()) == n,
            "permutation size differs from host");
    if (!r.ok) return r;
    for (const auto& [perm, name] :
         {std::pair<const std::vector<int>*, const char*>{&p.alpha, "alpha"},
          {&p.beta, "beta"}}) {
        std::vector<char> seen(static_cast<size_t>(n), 0);
        bool bij = true;
        for (int x : *perm) {
            if (x < 0 || x >= n || seen[static_cast<size_t>(x)]) {
                bij = false;
                break;
            }
            seen[static_cast<size_t>(x)] = 1;
        }
        r.check(bij, std::string(name) + " is not a bijection");
    }
    if (!r.ok) return r;
    for (int x = 0; x < n; ++x) {
        std::vector<int> dist = distances_from(host, x, max_disp);
        for (const auto& [perm, name] :
             {std::pair<const std::vector<int>*, const char*>{&p.alpha, "alpha"},
              {&p.beta, "beta"}}) {
            int y = (*perm)[static_cast<size_t>(x)];
            if (x == y) continue;
            if (dist[static_cast<size_t>(y)] < 0) {
                r.check(false, std::string(name) + " displaces vertex " + std::to_string(x) +
                                   " beyond " + std::to_string(max_disp));
                if (r.failures.size() > 16) return r;
            }
        }
    }
    if (word_len > 0) {
        WordReport wr = word_check(p, word_len);
        r.check(wr.free_up_to >= require_free,
                "fixed point at word length " + std::to_string(wr.free_up_to + 1) + " (word " +
                    wr.violating_word + ")");
    }
    return r;
}

Report bip_matching(const BipartiteGraph& host, const Matching& m, bool require_perfect) {
    Report r;
    // the parse step already guarantees edges exist and no vertex repeats;
    // recompute coverage from scratch anyway
    std::vector<int> cover_a(static_cast<size_t>(host.na), 0), cover_b(static_cast<size_t>(host.nb), 0);
    for (int a = 0; a < host.na; ++a) {
        int e = m.a_edge[static_cast<size_t>(a)];
        if (e < 0) continue;
        r.check(e >= 0 && e < host.m(), "matching references a bad edge id");
        auto [ea, eb] = host.edges[static_cast<size_t>(e)];
        r.check(ea == a, "matching edge endpoint mismatch");
        ++cover_a[static_cast<size_t>(ea)];
        ++cover_b[static_cast<size_t>(eb)];
    }
    for (int a = 0; a < host.na; ++a)
        r.check(cover_a[static_cast<size_t>(a)] <= 1, "A vertex covered twice");
    for (int b = 0; b < host.nb; ++b)
        r.check(cover_b[static_cast<size_t>(b)] <= 1, "B vertex covered twice");
    if (require_perfect)
        r.check(m.size == host.na && m.size == host.nb,
                "matching is not perfect, size " + std::to_string(m.size));
    return r;
}

Report orientation(const Graph& host, const std::vector<std::pair<int, int>>& arrows,
                   int threshold) {
    Report r;
    int n = host.n();
    std::vector<int> partner(static_cast<size_t>(n), -1);
    std::vector<int> medge(static_cast<size_t>(n), -1);
    std::vector<char> is_out(static_cast<size_t>(n), 0);
    for (auto& [tail, head] : arrows) {
        if (tail < 0 || tail >= n || head < 0 || head >= n || tail == head) {
            r.check(false, "bad arrow");
            return r;
        }
        if (partner[static_cast<size_t>(tail)] >= 0 || partner[static_cast<size_t>(head)] >= 0) {
            r.check(false, "vertex covered twice by the matching");
            return r;
        }
        std::vector<int> ids = host.edges_between(tail, head);
        if (ids.empty()) {
            r.check(false, "arrow is not a host edge");
            return r;
        }
        partner[static_cast<size_t>(tail)] = head;
        partner[static_cast<size_t>(head)] = tail;
        medge[static_cast<size_t>(tail)] = ids.front();
        medge[static_cast<size_t>(head)] = ids.front();
        is_out[static_cast<size_t>(tail)] = 1;
    }
    for (int v = 0; v < n; ++v)
        if (partner[static_cast<size_t>(v)] < 0) {
            r.check(false, "matching is not perfect");
            return r;
        }
    for (int v = 0; v < n; ++v) {
        int cross = 0;
        for (int id : host.incident(v)) {
            if (id == medge[static_cast<size_t>(v)]) continue;
            int w = host.other(id, v);
            if (is_out[static_cast<size_t>(w)] != is_out[static_cast<size_t>(v)]) ++cross;
        }
        if (cross < threshold) {
            r.check(false, "vertex " + std::to_string(v) + " has only " + std::to_string(cross) +
                               " opposite-class neighbors");
            if (r.failures.size() > 16) return r;
        }
    }
    return r;
}

} // namespace lgs::verify
