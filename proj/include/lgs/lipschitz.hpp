#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgs/girth_subgraph.hpp"
#include "lgs/graph.hpp"

namespace lgs {

// Subgraph whose edges each carry a witness walk in the host graph,
// certifying dist_host(u, v) <= bound for every edge (u, v).
struct WitnessedSubgraph {
    int n = 0;
    int bound = 1;
    Graph g;                                // its own edge-id space
    std::vector<std::vector<int>> witness;  // indexed by edge id; host vertex walk u..v

    std::span<const int> witness_of(int edge_id) const {
        return witness[static_cast<size_t>(edge_id)];
    }
    int max_witness_length() const;
};

// Unit witnesses: every edge certifies itself with the walk (u, v).
WitnessedSubgraph make_witnessed(const Graph& g, int bound = 1);

// File format: header "n m L", then per edge "u v k p_0 ... p_k" with
// p_0 = u, p_k = v the witness walk.
WitnessedSubgraph parse_witnessed(const std::string& text);
WitnessedSubgraph read_witnessed(const std::string& path);
std::string format_witnessed(const WitnessedSubgraph& ws);
void write_witnessed(const std::string& path, const WitnessedSubgraph& ws);

// L = max{ 2*floor(log(12 delta) / -log(lambda)) + 2,
//          2*floor(log(delta) / (2 log d)) + 2 }, an even integer >= 2.
int compute_L(const Rational& lambda, int delta, int d);

// Walk-power multigraph: one edge per length-half_L walk with distinct
// endpoints, each carrying its witness walk. Closed walks are dropped and
// counted, so degrees come out at d^half_L minus the per-vertex closed count.
struct PowerGraph {
    Graph g;
    int half_L = 1;
    std::vector<int> wit_data; // flat, half_L + 1 vertices per edge
    std::vector<long long> closed_walks;

    std::span<const int> witness(int edge_id) const {
        return {wit_data.data() + static_cast<size_t>(edge_id) * (half_L + 1),
                wit_data.data() + static_cast<size_t>(edge_id + 1) * (half_L + 1)};
    }
};

PowerGraph power_graph(const Graph& base, int half_L, long long walk_cap = 200000000,
                       int jobs = 1);

// Stage 1: iterated random-priority deletion of edges joining two vertices of
// degree > delta. Keeps minimum degree >= delta; ends with no adjacent
// over-degree pair.
Graph tame_degrees_stage1(const Graph& g, int delta, uint64_t seed, int round_cap = 10000);

// Stage 2: for each remaining over-degree vertex, replace paired spoke edges
// with chords between the paired neighbors (witnesses glued through the hub).
WitnessedSubgraph tame_degrees_stage2(const WitnessedSubgraph& g1, int delta);
WitnessedSubgraph tame_degrees_stage2(const Graph& g1, int delta);

struct LipschitzCertificate {
    int n = 0;
    int d = 0;
    int delta = 0;
    int g_target = 0;
    double lambda = 0.0;
    int L = 0;
    int half_L = 0;
    int power_girth_target = 0;
    std::optional<int> girth_found;
    int min_degree = 0;
    int max_degree = 0;
    int max_witness = 0;
    long long power_edges = 0;
    long long closed_walks_dropped = 0;
    long long events = 0;
    long long resamples = 0;
    double condition_slack = 0.0;
    int retries = 0;
    uint64_t seed = 0;
    std::string to_json() const;
};

struct LipschitzResult {
    WitnessedSubgraph h;
    LipschitzCertificate cert;
};

struct LipschitzOptions {
    int algorithm = 1;
    int jobs = 1;
    int max_retries = 3; // L += 2 per retry when verification fails
    long long walk_cap = 200000000;
    long long event_cap = 5000000;
};

// Full witness pipeline: power graph, extraction on it, both taming stages,
// then verification of min/max degree, witness bounds and the girth target.
LipschitzResult lipschitz_extract(const Graph& g, const Rational& lambda, int delta,
                                  int g_target, uint64_t seed,
                                  const LipschitzOptions& opts = {});

} // namespace lgs
