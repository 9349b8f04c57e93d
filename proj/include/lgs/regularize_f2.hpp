#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgs/lipschitz.hpp"

namespace lgs {

// Edge ids that remain after iteratively removing cycles; degree parity is
// preserved at every vertex.
std::vector<int> peel_cycles(const Graph& g, uint64_t seed);

struct SurgeryState {
    WitnessedSubgraph work;
    std::vector<char> in_forest; // by work edge id
    std::vector<char> special;
    std::vector<char> matched;
    std::vector<char> chord; // used-edge ledger: edges created by surgeries
    int delta = 0;

    static SurgeryState init(const WitnessedSubgraph& ws, int delta, uint64_t seed);
    int forest_degree(int v) const;
    std::vector<int> unmatched_specials() const;
};

// Path surgery on x_0..x_k: delete the k path edges, add skip chords
// (x_i, x_{i+2}) with glued witnesses. x_1 and x_{k-1} must be distinct
// unmatched specials; the end edges must be outside the forest and the chord
// ledger. Exactly the two specials' degrees drop, each by one.
void surgery_on_path(SurgeryState& state, const std::vector<int>& path_vertices,
                     const std::vector<int>& path_edges);
// Convenience overload resolving edges from the vertex sequence.
void surgery_on_path(SurgeryState& state, const std::vector<int>& path_vertices);

struct RegularizeReport {
    int surgeries = 0;
    int specials = 0;
    std::optional<int> girth_in;
    std::optional<int> girth_out;
    int max_witness = 0;
};

// Forest-guided surgeries lowering every degree-(delta+1) vertex to delta.
// Output is delta-regular, its witnesses stay within 3x the input bound and
// its girth within a third of the input girth.
WitnessedSubgraph regularize(const WitnessedSubgraph& ws, int delta, uint64_t seed,
                             RegularizeReport* report = nullptr);

struct MatchSpecialsReport {
    std::vector<std::vector<int>> paths; // vertex sequences
    std::vector<int> unmatched_after_round;
    std::vector<char> no_close_pair_after_round; // no unmatched pair within distance k
    int specials_total = 0;
};

// Round-k random-priority selection of length-k paths between unmatched
// specials (vertices of degree delta+1). Within each round the local-maxima
// sub-step repeats until no eligible path remains; selected paths are
// edge-disjoint overall and each special ends up on at most one path.
MatchSpecialsReport local_match_specials(const WitnessedSubgraph& ws, int delta, uint64_t seed,
                                         int rounds);

struct TwoFactors {
    std::vector<int> factor1_ids; // edge ids of the input graph
    std::vector<int> factor2_ids;
    Graph f1;
    Graph f2;
};

// Split a 4-regular multigraph into two 2-regular spanning subgraphs via an
// Eulerian orientation and a perfect matching on the out/in incidence graph.
TwoFactors two_factorize(const Graph& g4, uint64_t seed);

// Orient every cycle of a 2-regular graph consistently (lowest-id vertex
// toward its lower-id neighbor) and return the successor permutation.
std::vector<int> euler_orient_2regular(const Graph& f);

struct PermutationPair {
    std::vector<int> alpha;
    std::vector<int> beta;
    int displacement_bound = 0;
};

// Permutation file: two lines of n space-separated images.
PermutationPair parse_permutation_pair(const std::string& text);
PermutationPair read_permutation_pair(const std::string& path);
std::string format_permutation_pair(const PermutationPair& p);
void write_permutation_pair(const std::string& path, const PermutationPair& p);

struct WordReport {
    int free_up_to = 0; // largest L with no fixed-point word of length <= L
    std::string violating_word;
    long long fixed_points = 0; // of the first violating word
    std::vector<long long> words_per_length;
    long long words_checked = 0;
};

// Enumerates all reduced words over {a, a^-1, b, b^-1} up to max_len and
// looks for fixed points. Reduced-word counts per length are 4 * 3^(k-1).
WordReport word_check(const PermutationPair& p, int max_len);

struct F2Certificate {
    int n = 0;
    int d = 0;
    int g_target = 0;
    int L = 0;        // displacement bound: 3x the Lipschitz stage bound
    int L_lipschitz = 0;
    int max_displacement_alpha = 0;
    int max_displacement_beta = 0;
    int free_up_to = 0;
    int required_free_length = 0;
    long long words_checked = 0;
    uint64_t seed = 0;
    std::string to_json() const;
};

struct F2Result {
    PermutationPair perms;
    F2Certificate cert;
    WitnessedSubgraph regular4; // the 4-regular stage, for verification
};

struct F2Options {
    int word_len_cap = 6;
    LipschitzOptions lipschitz;
};

// End-to-end bijection-pair pipeline: Lipschitz extraction with delta = 4,
// regularization, 2-factorization, Eulerian orientations.
F2Result build_f2(const Graph& g, const Rational& lambda, int g_target, uint64_t seed,
                  const F2Options& opts = {});

} // namespace lgs
