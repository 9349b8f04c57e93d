#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgs/rational.hpp"

namespace lgs {

struct EdgeEnds {
    int u = -1;
    int v = -1;
};

// Finite undirected multigraph. Parallel edges are allowed, loops are not.
// Edge identifiers are stable under removal (removed ids are never reused).
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);

    int add_edge(int u, int v);
    void remove_edge(int id);

    int n() const { return n_; }
    int m() const { return alive_; }
    // One past the largest edge id ever issued; dead ids below this are gaps.
    int edge_slots() const { return static_cast<int>(edges_.size()); }

    bool edge_alive(int id) const { return id >= 0 && id < edge_slots() && edges_[id].u >= 0; }
    EdgeEnds ends(int id) const;
    int other(int id, int v) const;

    const std::vector<int>& incident(int v) const;
    int degree(int v) const { return static_cast<int>(incident(v).size()); }
    int min_degree() const;
    int max_degree() const;
    // degree if regular, nullopt otherwise
    std::optional<int> regular_degree() const;

    std::vector<int> alive_edges() const;
    // sorted unique neighbor list (parallel edges collapsed)
    std::vector<int> neighbors(int v) const;
    // edge ids joining u and v
    std::vector<int> edges_between(int u, int v) const;
    bool adjacent(int u, int v) const;
    bool has_parallel_edges() const;

private:
    int n_ = 0;
    int alive_ = 0;
    std::vector<EdgeEnds> edges_;
    std::vector<std::vector<int>> inc_;
};

// ---- generators ------------------------------------------------------------

Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph complete_bipartite(int a, int b);
// Configuration model repaired to a simple graph by edge switches.
Graph random_regular(int n, int d, uint64_t seed, int max_rounds = 200);
// Configuration model allowing parallel edges; loops repaired by switches.
Graph random_regular_multigraph(int n, int d, uint64_t seed, int max_rounds = 200);

// ---- file io ---------------------------------------------------------------
// Text format: "n m" header, then m lines "u v"; '#' starts a comment line.
// Writers emit edges sorted by (min endpoint, max endpoint, occurrence).

Graph read_graph(const std::string& path);
Graph parse_graph(const std::string& text);
std::string format_graph(const Graph& g);
void write_graph(const std::string& path, const Graph& g);

// ---- structural queries ----------------------------------------------------

// Length of the shortest cycle; nullopt for forests. A pair of parallel
// edges counts as a 2-cycle.
std::optional<int> girth(const Graph& g);

// BFS distances from x, truncated at radius; -1 marks unreached vertices.
std::vector<int> distances_from(const Graph& g, int x, int radius);

// Per-vertex short-cycle counts and the deduplicated cycle list.
// counts(x, k) is weighted by parallel-edge multiplicity: a listed cycle on
// vertices v_1..v_k stands for prod_i mult(v_i, v_{i+1}) distinct edge
// realizations (for k = 2, C(mult, 2) parallel pairs).
struct CyclesProfile {
    int g_target = 0;
    int n = 0;
    // realization counts, indexed [k - 2][vertex] for 2 <= k < g_target
    std::vector<std::vector<long long>> counts;
    // flat cycle list: vertex sequences, canonical (min vertex first)
    std::vector<int> cyc_data;
    std::vector<int> cyc_off;       // size = cycles + 1
    std::vector<long long> cyc_mult;

    long long count(int x, int k) const {
        if (k < 2 || k >= g_target) return 0;
        return counts[static_cast<size_t>(k) - 2][static_cast<size_t>(x)];
    }
    int cycle_count() const { return static_cast<int>(cyc_mult.size()); }
    std::span<const int> cycle(int i) const {
        return {cyc_data.data() + cyc_off[i], cyc_data.data() + cyc_off[i + 1]};
    }
    long long realizations(int i) const { return cyc_mult[i]; }
    long long total_realizations() const;
    std::optional<int> min_cycle_length() const;
};

CyclesProfile count_short_cycles(const Graph& g, int g_target, long long cycle_cap = 10000000);

struct HypothesisReport {
    bool ok = true;
    int worst_vertex = -1;
    int worst_k = 0;
    long long worst_count = 0;
    double worst_bound = 0.0;
};

// ok iff counts(x,k) <= base^k for all x and all listed k. Exact arithmetic.
HypothesisReport check_hypothesis(const CyclesProfile& profile, const Rational& base);

// Smallest base b with counts(x,k) <= b^k everywhere, i.e. max_k (max_x c)^{1/k}.
double measured_base(const CyclesProfile& profile);

// ---- spectra ---------------------------------------------------------------

struct SpectralReport {
    double rho = 0.0;        // largest |eigenvalue| of P(A/dmax)P, P = I - J/n
    std::string method;      // "dense" or "iterative"
    double residual = 0.0;
    int iterations = 0;
};

// Dense symmetric eigensolve for n <= 512, power iteration (relative
// residual <= 1e-8) beyond that. Disconnected or bipartite graphs report
// rho = 1 by this convention.
SpectralReport spectral_report(const Graph& g, bool force_iterative = false);

// ---- vertex expansion ------------------------------------------------------

struct ExpansionReport {
    bool ok = true;
    bool exact = false;       // exhaustive over all subsets vs sampled
    long long sets_checked = 0;
    std::vector<int> witness; // a violating S, if found
};

// Checks |N(S)| >= ratio*|S| for S inside either side, |S| <= side/2.
// Exhaustive when the side has at most 16 vertices, sampled otherwise.
ExpansionReport expansion_check(const Graph& g, const std::vector<int>& side_a,
                                const Rational& ratio, uint64_t seed = 0,
                                int samples = 2000);

} // namespace lgs
