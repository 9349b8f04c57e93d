#pragma once

#include <string>
#include <vector>

#include "lgs/lipschitz.hpp"
#include "lgs/matching.hpp"
#include "lgs/regularize_f2.hpp"

// Independent certificate checking. Everything here recomputes the certified
// properties from the raw artifacts; nothing is taken from producer state.
namespace lgs::verify {

struct Report {
    bool ok = true;
    std::vector<std::string> failures;

    void check(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            failures.push_back(what);
        }
    }
    std::string to_json() const;
};

// edge subset of the host, spanning, min degree >= delta, girth >= g
Report subgraph(const Graph& host, const Graph& sub, int delta, int g);

// witness walks are genuine host walks within the declared bound; BFS
// re-verification of every edge distance. delta >= 0 adds the degree window
// [delta, delta+1]; g_target >= 0 adds girth * L >= g_target.
Report witnessed(const Graph& host, const WitnessedSubgraph& ws, int delta = -1,
                 int g_target = -1);

// both maps bijections; displacements within max_disp; optional word check
Report permutations(const Graph& host, const PermutationPair& p, int max_disp,
                    int word_len = 0, int require_free = 0);

Report bip_matching(const BipartiteGraph& host, const Matching& m, bool require_perfect);

// directed matching pairs (tail, head): perfect matching of the host whose
// induced classes give every vertex >= threshold opposite-class non-matching
// neighbors
Report orientation(const Graph& host, const std::vector<std::pair<int, int>>& arrows,
                   int threshold);

} // namespace lgs::verify
