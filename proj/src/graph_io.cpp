#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

#include "lgs/error.hpp"
#include "lgs/graph.hpp"

namespace lgs {

Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long long n = -1, m = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        if (n < 0) {
            if (!(ls >> n >> m) || n < 0 || m < 0)
                fail(errc::io, "graph-io", "bad header, expected \"n m\"");
            continue;
        }
        long long u, v;
        if (!(ls >> u >> v)) fail(errc::io, "graph-io", "bad edge line: " + line);
        if (u < 0 || u >= n || v < 0 || v >= n)
            fail(errc::io, "graph-io", "edge endpoint out of range: " + line);
        if (u == v) fail(errc::io, "graph-io", "loop edge rejected: " + line);
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    if (n < 0) fail(errc::io, "graph-io", "empty graph file");
    if (static_cast<long long>(edges.size()) != m)
        fail(errc::io, "graph-io", "edge count mismatch: header says " + std::to_string(m) +
                                       ", found " + std::to_string(edges.size()));
    Graph g(static_cast<int>(n));
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

Graph read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "graph-io", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

std::string format_graph(const Graph& g) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<size_t>(g.m()));
    for (int id : g.alive_edges()) {
        EdgeEnds e = g.ends(id);
        edges.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    }
    std::sort(edges.begin(), edges.end());
    std::ostringstream out;
    out << g.n() << ' ' << g.m() << '\n';
    for (auto& [u, v] : edges) out << u << ' ' << v << '\n';
    return out.str();
}

void write_graph(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) fail(errc::io, "graph-io", "cannot write " + path);
    out << format_graph(g);
}

} // namespace lgs
