#include "lgs/graph.hpp"

#include <algorithm>

#include "lgs/error.hpp"

namespace lgs {

Graph::Graph(int n) : n_(n) {
    if (n < 0) fail(errc::parameter, "graph", "negative vertex count");
    inc_.resize(static_cast<size_t>(n));
}

int Graph::add_edge(int u, int v) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
        fail(errc::parameter, "graph", "edge endpoint out of range");
    if (u == v) fail(errc::parameter, "graph", "loops are not allowed");
    int id = static_cast<int>(edges_.size());
    edges_.push_back({u, v});
    inc_[static_cast<size_t>(u)].push_back(id);
    inc_[static_cast<size_t>(v)].push_back(id);
    ++alive_;
    return id;
}

void Graph::remove_edge(int id) {
    if (!edge_alive(id)) fail(errc::parameter, "graph", "removing dead edge id");
    EdgeEnds e = edges_[static_cast<size_t>(id)];
    for (int w : {e.u, e.v}) {
        auto& lst = inc_[static_cast<size_t>(w)];
        lst.erase(std::find(lst.begin(), lst.end(), id));
    }
    edges_[static_cast<size_t>(id)] = {-1, -1};
    --alive_;
}

EdgeEnds Graph::ends(int id) const {
    if (!edge_alive(id)) fail(errc::parameter, "graph", "dead edge id");
    return edges_[static_cast<size_t>(id)];
}

int Graph::other(int id, int v) const {
    EdgeEnds e = ends(id);
    if (e.u == v) return e.v;
    if (e.v == v) return e.u;
    fail(errc::parameter, "graph", "vertex not on edge");
}

const std::vector<int>& Graph::incident(int v) const {
    if (v < 0 || v >= n_) fail(errc::parameter, "graph", "vertex out of range");
    return inc_[static_cast<size_t>(v)];
}

int Graph::min_degree() const {
    int best = n_ == 0 ? 0 : degree(0);
    for (int v = 1; v < n_; ++v) best = std::min(best, degree(v));
    return best;
}

int Graph::max_degree() const {
    int best = 0;
    for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
    return best;
}

std::optional<int> Graph::regular_degree() const {
    if (n_ == 0) return 0;
    int d = degree(0);
    for (int v = 1; v < n_; ++v)
        if (degree(v) != d) return std::nullopt;
    return d;
}

std::vector<int> Graph::alive_edges() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(alive_));
    for (int id = 0; id < edge_slots(); ++id)
        if (edges_[static_cast<size_t>(id)].u >= 0) out.push_back(id);
    return out;
}

std::vector<int> Graph::neighbors(int v) const {
    std::vector<int> out;
    out.reserve(incident(v).size());
    for (int id : incident(v)) out.push_back(other(id, v));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> Graph::edges_between(int u, int v) const {
    std::vector<int> out;
    for (int id : incident(u))
        if (other(id, u) == v) out.push_back(id);
    return out;
}

bool Graph::adjacent(int u, int v) const {
    const std::vector<int>& a = incident(u);
    const std::vector<int>& b = incident(v);
    const std::vector<int>& shorter = a.size() <= b.size() ? a : b;
    int from = a.size() <= b.size() ? u : v;
    int to = a.size() <= b.size() ? v : u;
    for (int id : shorter)
        if (other(id, from) == to) return true;
    return false;
}

bool Graph::has_parallel_edges() const {
    for (int v = 0; v < n_; ++v) {
        std::vector<int> nb;
        nb.reserve(incident(v).size());
        for (int id : incident(v)) nb.push_back(other(id, v));
        std::sort(nb.begin(), nb.end());
        if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) return true;
    }
    return false;
}

} // namespace lgs
