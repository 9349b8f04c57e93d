#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lgs/graph.hpp"
#include "lgs/lll.hpp"

namespace lgs {

struct BipartiteGraph {
    int na = 0;
    int nb = 0;
    std::vector<std::pair<int, int>> edges; // (a, b); edge id = index
    std::vector<std::vector<int>> adj_a;    // edge ids per A vertex
    std::vector<std::vector<int>> adj_b;

    BipartiteGraph() = default;
    BipartiteGraph(int a, int b);
    int add_edge(int a, int b);
    int m() const { return static_cast<int>(edges.size()); }
    // As a plain graph: A = 0..na-1, B = na..na+nb-1.
    Graph to_graph() const;
};

BipartiteGraph random_bipartite_regular(int n_side, int d, uint64_t seed, int max_rounds = 200);

// Bipartite file format: header "a b m", then m lines "u v" with u indexed
// within A and v within B; '#' starts a comment.
BipartiteGraph parse_bipartite(const std::string& text);
BipartiteGraph read_bipartite(const std::string& path);
std::string format_bipartite(const BipartiteGraph& g);
void write_bipartite(const std::string& path, const BipartiteGraph& g);

struct Matching {
    std::vector<int> a_edge; // matched edge id per A vertex, -1 if unmatched
    std::vector<int> b_edge;
    int size = 0;

    static Matching empty(const BipartiteGraph& g);
    bool perfect(const BipartiteGraph& g) const {
        return size == g.na && size == g.nb;
    }
    int partner_of_a(const BipartiteGraph& g, int a) const {
        return a_edge[static_cast<size_t>(a)] < 0
                   ? -1
                   : g.edges[static_cast<size_t>(a_edge[static_cast<size_t>(a)])].second;
    }
    int partner_of_b(const BipartiteGraph& g, int b) const {
        return b_edge[static_cast<size_t>(b)] < 0
                   ? -1
                   : g.edges[static_cast<size_t>(b_edge[static_cast<size_t>(b)])].first;
    }
    std::vector<int> unmatched_a(const BipartiteGraph& g) const;
    std::vector<int> unmatched_b(const BipartiteGraph& g) const;
};

// Maximal set of vertex-disjoint shortest augmenting paths of edge-length
// <= max_len (alternating layered BFS + greedy DFS). Paths are edge-id
// sequences of odd length, both endpoints unmatched.
std::vector<std::vector<int>> find_augmenting_paths(const BipartiteGraph& g, const Matching& m,
                                                    int max_len);

// Switch matching and non-matching edges along an augmenting path.
void flip_augmenting_path(const BipartiteGraph& g, Matching& m, const std::vector<int>& path);

struct MatchStats {
    long long iterations = 0;
    std::map<int, long long> path_length_histogram;
    int deficiency = 0;
    std::vector<int> deficiency_witness; // A-side Hall violator when imperfect
    std::vector<int> unmatched_history;  // |U cap A| after each phase
    std::vector<int> max_len_history;    // length bound used per phase
    // batches whose disjoint paths covered fewer than a quarter of the
    // unmatched vertices; an expansion anomaly, never an error
    int quarter_anomalies = 0;
    std::string to_json() const;
};

// Phased augmentation: path-length bound starts at 1 and doubles whenever no
// path within the bound exists; a final unbounded sweep guarantees a maximum
// matching. Reports a Hall-violator witness when no perfect matching exists.
Matching match_to_completion(const BipartiteGraph& g, uint64_t seed, MatchStats* stats = nullptr);

struct LayerAudit {
    bool ok = true;
    bool short_augmenting_found = false;
    int violating_layer = -1;
    std::vector<long long> s_sizes; // A-rooted chain
    std::vector<long long> t_sizes; // B-rooted chain
};

// Rebuilds the alternating-neighborhood chains S_1, S_2, ... from the
// unmatched sets and asserts |S_{k+1}| >= min(3|B|/4, 3|S_k|/2) while the
// chain stays below 3|B|/4 and fully matched.
LayerAudit layer_growth_audit(const BipartiteGraph& g, const Matching& m);

// ---- matchings and orientations on plain graphs -----------------------------

struct GraphMatching {
    std::vector<int> partner; // -1 if unmatched
    std::vector<int> edge_of; // matching edge id per vertex, -1 if unmatched

    bool perfect(const Graph& g) const;
};

// Matching file: lines "u v" of matched pairs. The bipartite variant indexes
// u within A and v within B; the plain-graph variant uses vertex ids.
std::string format_matching(const BipartiteGraph& g, const Matching& m);
Matching parse_matching(const BipartiteGraph& g, const std::string& text);
std::string format_graph_matching(const Graph& g, const GraphMatching& m);
GraphMatching parse_graph_matching(const Graph& g, const std::string& text);

struct PerfectMatchingResult {
    GraphMatching matching;
    int attempts = 0;
};

// Euler-orient, select one out-edge per vertex through a bipartite perfect
// matching, and take alternate edges of the resulting 2-regular graph.
// Retries with fresh randomness while the 2-regular base has odd cycles.
PerfectMatchingResult perfect_matching_even_regular(const Graph& g, uint64_t seed,
                                                    int attempt_cap = 2000);

// Per-edge direction flags for an Eulerian orientation (in-degree equals
// out-degree at every vertex). flag true orients ends(id).u -> ends(id).v.
std::vector<char> euler_orient(const Graph& g, uint64_t seed);

struct OrientationResult {
    std::vector<char> edge_forward; // per matching edge index, tail = .u when true
    std::vector<char> is_out;       // per vertex class
    std::vector<int> matching_edges;
    int nonmatching_degree = 0;
    int threshold = 0;
    lll::RunStats stats;
};

// Lov\'asz-local-lemma orientation of a perfect matching: every vertex ends
// with at least `threshold` of its non-matching neighbors in the other class.
// threshold < 0 selects ceil(2d/5) for the uniform non-matching degree d.
OrientationResult orient_matching_lll(const Graph& g, const GraphMatching& m, uint64_t seed,
                                      int threshold = -1, int algorithm = 1,
                                      long long resample_cap = 100000000);

// Numeric gate for the orientation lemma: (1 - 1/(d+1))^d / (d+1) > e^{-d^2/200}.
bool orientation_condition_holds(int d);

struct ZActionReport {
    std::vector<int> successor;
    int threshold = 0;
    double rho = -1.0;
    bool rho_converged = false;
    bool rho_flag = false; // 50*rho < 1
    bool expansion_ok = false;
    long long expansion_sets_checked = 0;
    int second_matching_deficiency = 0;
};

// Compose the oriented matching with a second matching on the out/in
// bipartite graph into a 2-regular Eulerian subgraph, i.e. a permutation.
ZActionReport build_z_action(const Graph& g, const GraphMatching& m, uint64_t seed,
                             int threshold = -1);

} // namespace lgs
