#include "lgs/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "lgs/error.hpp"
#include "lgs/rng.hpp"

#include "json.hpp"

namespace lgs {

int WitnessedSubgraph::max_witness_length() const {
    int best = 0;
    for (int id : g.alive_edges())
        best = std::max(best, static_cast<int>(witness[static_cast<size_t>(id)].size()) - 1);
    return best;
}

WitnessedSubgraph make_witnessed(const Graph& g, int bound) {
    WitnessedSubgraph ws;
    ws.n = g.n();
    ws.bound = bound;
    ws.g = g;
    ws.witness.resize(static_cast<size_t>(g.edge_slots()));
    for (int id : g.alive_edges()) {
        EdgeEnds e = g.ends(id);
        ws.witness[static_cast<size_t>(id)] = {e.u, e.v};
    }
    return ws;
}

WitnessedSubgraph parse_witnessed(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long long n = -1, m = -1, bound = -1;
    WitnessedSubgraph ws;
    long long edges_seen = 0;
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        if (n < 0) {
            if (!(ls >> n >> m >> bound) || n < 0 || m < 0 || bound < 1)
                fail(errc::io, "ws-io", "bad header, expected \"n m L\"");
            ws.n = static_cast<int>(n);
            ws.bound = static_cast<int>(bound);
            ws.g = Graph(ws.n);
            continue;
        }
        long long u, v, k;
        if (!(ls >> u >> v >> k) || k < 1) fail(errc::io, "ws-io", "bad edge line: " + line);
        std::vector<int> walk(static_cast<size_t>(k) + 1);
        for (long long i = 0; i <= k; ++i) {
            long long p;
            if (!(ls >> p) || p < 0 || p >= n) fail(errc::io, "ws-io", "bad witness: " + line);
            walk[static_cast<size_t>(i)] = static_cast<int>(p);
        }
        if (walk.front() != u || walk.back() != v)
            fail(errc::io, "ws-io", "witness endpoints do not match edge: " + line);
        int id = ws.g.add_edge(static_cast<int>(u), static_cast<int>(v));
        ws.witness.resize(static_cast<size_t>(ws.g.edge_slots()));
        ws.witness[static_cast<size_t>(id)] = std::move(walk);
        ++edges_seen;
    }
    if (n < 0) fail(errc::io, "ws-io", "empty file");
    if (edges_seen != m) fail(errc::io, "ws-io", "edge count mismatch");
    return ws;
}

WitnessedSubgraph read_witnessed(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "ws-io", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_witnessed(ss.str());
}

std::string format_witnessed(const WitnessedSubgraph& ws) {
    std::ostringstream out;
    out << ws.n << ' ' << ws.g.m() << ' ' << ws.bound << '\n';
    std::vector<int> ids = ws.g.alive_edges();
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
        EdgeEnds ea = ws.g.ends(a), eb = ws.g.ends(b);
        auto ka = std::minmax(ea.u, ea.v), kb = std::minmax(eb.u, eb.v);
        return ka < kb;
    });
    for (int id : ids) {
        EdgeEnds e = ws.g.ends(id);
        std::span<const int> w = ws.witness_of(id);
        out << e.u << ' ' << e.v << ' ' << (w.size() - 1);
        for (int p : w) out << ' ' << p;
        out << '\n';
    }
    return out.str();
}

void write_witnessed(const std::string& path, const WitnessedSubgraph& ws) {
    std::ofstream out(path);
    if (!out) fail(errc::io, "ws-io", "cannot write " + path);
    out << format_witnessed(ws);
}

int compute_L(const Rational& lambda, int delta, int d) {
    if (!(lambda.num > 0 && lambda.num < lambda.den))
        fail(errc::parameter, "compute-L", "lambda must lie in (0,1)");
    if (delta < 1 || d < 2) fail(errc::parameter, "compute-L", "need delta >= 1, d >= 2");
    long double lam = static_cast<long double>(lambda.num) / static_cast<long double>(lambda.den);
    long double t1 = std::log(12.0L * delta) / -std::log(lam);
    long double t2 = std::log(static_cast<long double>(delta)) /
                     (2.0L * std::log(static_cast<long double>(d)));
    // the 1e-9 nudge keeps exact ratios like log(36)/log(6) = 2 on the
    // intended side of the floor
    long long f1 = static_cast<long long>(std::floor(t1 + 1e-9L));
    long long f2 = static_cast<long long>(std::floor(t2 + 1e-9L));
    long long L = std::max({2 * f1 + 2, 2 * f2 + 2, 2LL});
    return static_cast<int>(L);
}

namespace {

struct WalkBuffer {
    std::vector<int> data; // flat walks, (half_L + 1) vertices each
    long long closed = 0;
};

// all walks of length half_L from source, keeping those that end at a vertex
// greater than source (each undirected power edge is found from its smaller
// endpoint; the reverse walk is its mirror)
void enumerate_walks(const Graph& g, int source, int half_L, WalkBuffer& out,
                     std::vector<long long>& closed_at, long long walk_cap) {
    std::vector<int> walk(static_cast<size_t>(half_L) + 1);
    walk[0] = source;
    // iterative DFS over incident-edge indices
    std::vector<size_t> idx(static_cast<size_t>(half_L) + 1, 0);
    int depth = 0;
    while (depth >= 0) {
        if (depth == half_L) {
            int endv = walk[static_cast<size_t>(depth)];
            if (endv == source) {
                ++out.closed;
                ++closed_at[static_cast<size_t>(source)];
            } else if (endv > source) {
                if (static_cast<long long>(out.data.size()) >
                    walk_cap * (half_L + 1))
                    fail(errc::resource, "power-graph", "walk cap exceeded");
                out.data.insert(out.data.end(), walk.begin(), walk.end());
            }
            --depth;
            continue;
        }
        int v = walk[static_cast<size_t>(depth)];
        const std::vector<int>& inc = g.incident(v);
        if (idx[static_cast<size_t>(depth)] >= inc.size()) {
            idx[static_cast<size_t>(depth)] = 0;
            --depth;
            continue;
        }
        int id = inc[idx[static_cast<size_t>(depth)]++];
        walk[static_cast<size_t>(depth) + 1] = g.other(id, v);
        ++depth;
        // note: idx at the new depth is left where the previous visit reset it
    }
}

} // namespace

PowerGraph power_graph(const Graph& base, int half_L, long long walk_cap, int jobs) {
    if (half_L < 1) fail(errc::parameter, "power-graph", "half_L must be >= 1");
    PowerGraph pg;
    pg.half_L = half_L;
    pg.closed_walks.assign(static_cast<size_t>(base.n()), 0);

    int n = base.n();
    jobs = std::max(1, std::min(jobs, n));
    std::vector<WalkBuffer> buffers(static_cast<size_t>(jobs));
    std::vector<std::vector<long long>> closed(static_cast<size_t>(jobs),
                                               std::vector<long long>(static_cast<size_t>(n), 0));
    auto work = [&](int t) {
        for (int v = t; v < n; v += jobs)
            enumerate_walks(base, v, half_L, buffers[static_cast<size_t>(t)],
                            closed[static_cast<size_t>(t)], walk_cap);
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t) threads.emplace_back(work, t);
        for (auto& th : threads) th.join();
    }

    // deterministic merge: edges sorted by witness walk
    long long total_walks = 0;
    for (auto& b : buffers) total_walks += static_cast<long long>(b.data.size()) / (half_L + 1);
    pg.g = Graph(n);
    pg.wit_data.reserve(static_cast<size_t>(total_walks) * (half_L + 1));
    std::vector<std::span<const int>> walks;
    walks.reserve(static_cast<size_t>(total_walks));
    for (auto& b : buffers)
        for (size_t off = 0; off + half_L < b.data.size(); off += static_cast<size_t>(half_L) + 1)
            walks.push_back({b.data.data() + off, b.data.data() + off + half_L + 1});
    std::sort(walks.begin(), walks.end(), [](std::span<const int> a, std::span<const int> b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    for (std::span<const int> w : walks) {
        pg.g.add_edge(w.front(), w.back());
        pg.wit_data.insert(pg.wit_data.end(), w.begin(), w.end());
    }
    for (int t = 0; t < jobs; ++t)
        for (int v = 0; v < n; ++v)
            pg.closed_walks[static_cast<size_t>(v)] += closed[static_cast<size_t>(t)][static_cast<size_t>(v)];
    return pg;
}

Graph tame_degrees_stage1(const Graph& g, int delta, uint64_t seed, int round_cap) {
    if (g.min_degree() < delta)
        fail(errc::precondition, "tame-stage1", "minimum degree below delta");
    Graph w = g;
    for (int round = 0; round < round_cap; ++round) {
        std::vector<int> conflicted;
        for (int id : w.alive_edges()) {
            EdgeEnds e = w.ends(id);
            if (w.degree(e.u) > delta && w.degree(e.v) > delta) conflicted.push_back(id);
        }
        if (conflicted.empty()) return w;
        // local priority maxima among conflicted edges sharing an endpoint
        std::vector<std::pair<double, int>> best(static_cast<size_t>(w.n()), {-1.0, -1});
        auto pri = [&](int id) {
            return keyed_uniform(key_mix(seed, 0x74616d6531ULL, static_cast<uint64_t>(round),
                                         static_cast<uint64_t>(id)));
        };
        for (int id : conflicted) {
            std::pair<double, int> p{pri(id), id};
            EdgeEnds e = w.ends(id);
            best[static_cast<size_t>(e.u)] = std::max(best[static_cast<size_t>(e.u)], p);
            best[static_cast<size_t>(e.v)] = std::max(best[static_cast<size_t>(e.v)], p);
        }
        for (int id : conflicted) {
            std::pair<double, int> p{pri(id), id};
            EdgeEnds e = w.ends(id);
            if (best[static_cast<size_t>(e.u)] == p && best[static_cast<size_t>(e.v)] == p)
                w.remove_edge(id);
        }
    }
    fail(errc::non_termination, "tame-stage1", "round cap exceeded");
}

namespace {

std::vector<int> oriented_witness(const WitnessedSubgraph& ws, int edge_id, int from) {
    std::span<const int> w = ws.witness_of(edge_id);
    std::vector<int> out(w.begin(), w.end());
    if (out.front() != from) std::reverse(out.begin(), out.end());
    if (out.front() != from)
        fail(errc::internal, "witness", "witness does not start at requested endpoint");
    return out;
}

} // namespace

WitnessedSubgraph tame_degrees_stage2(const WitnessedSubgraph& g1, int delta) {
    // no adjacent over-degree pair may remain from stage 1
    for (int id : g1.g.alive_edges()) {
        EdgeEnds e = g1.g.ends(id);
        if (g1.g.degree(e.u) > delta && g1.g.degree(e.v) > delta)
            fail(errc::precondition, "tame-stage2",
                 "adjacent over-degree pair, stage-1 postcondition violated");
    }
    WitnessedSubgraph out = g1;
    struct Op {
        int hub;
        std::vector<int> spokes; // edge ids, paired i with i + pairs
        int pairs;
    };
    std::vector<Op> ops;
    for (int x = 0; x < g1.g.n(); ++x) {
        int deg = g1.g.degree(x);
        if (deg <= delta) continue;
        int pairs = (deg - delta) / 2;
        if (pairs == 0) continue;
        // pick 2*pairs spokes maximizing endpoint diversity, then pair entry
        // i with entry i+pairs of the endpoint-sorted selection; chords stay
        // loop-free as long as no endpoint fills more than half the selection
        std::vector<std::vector<int>> groups;
        {
            std::vector<int> inc = g1.g.incident(x);
            std::sort(inc.begin(), inc.end(), [&](int a, int b) {
                int oa = g1.g.other(a, x), ob = g1.g.other(b, x);
                return oa != ob ? oa < ob : a < b;
            });
            for (size_t i = 0; i < inc.size();) {
                size_t j = i;
                while (j < inc.size() &&
                       g1.g.other(inc[j], x) == g1.g.other(inc[i], x))
                    ++j;
                groups.emplace_back(inc.begin() + static_cast<long>(i),
                                    inc.begin() + static_cast<long>(j));
                i = j;
            }
        }
        // at most `pairs` spokes per endpoint keeps the offset pairing loop-free
        std::stable_sort(groups.begin(), groups.end(),
                         [](const std::vector<int>& a, const std::vector<int>& b) {
                             return a.size() > b.size();
                         });
        std::vector<int> chosen;
        for (const std::vector<int>& grp : groups) {
            int want = std::min<int>({static_cast<int>(grp.size()), pairs,
                                      2 * pairs - static_cast<int>(chosen.size())});
            chosen.insert(chosen.end(), grp.begin(), grp.begin() + want);
            if (static_cast<int>(chosen.size()) == 2 * pairs) break;
        }
        if (static_cast<int>(chosen.size()) < 2 * pairs)
            fail(errc::verification, "tame-stage2",
                 "parallel spokes at vertex " + std::to_string(x) +
                     " cannot be paired without creating a loop");
        std::sort(chosen.begin(), chosen.end(), [&](int a, int b) {
            int oa = g1.g.other(a, x), ob = g1.g.other(b, x);
            return oa != ob ? oa < ob : a < b;
        });
        ops.push_back({x, std::move(chosen), pairs});
    }
    for (const Op& op : ops) {
        for (size_t i = 0; i < static_cast<size_t>(op.pairs); ++i) {
            int e1 = op.spokes[i], e2 = op.spokes[i + static_cast<size_t>(op.pairs)];
            int v1 = out.g.other(e1, op.hub), v2 = out.g.other(e2, op.hub);
            std::vector<int> w1 = oriented_witness(out, e1, v1);
            std::vector<int> w2 = oriented_witness(out, e2, op.hub);
            w1.insert(w1.end(), w2.begin() + 1, w2.end());
            out.g.remove_edge(e1);
            out.g.remove_edge(e2);
            int chord = out.g.add_edge(v1, v2);
            out.witness.resize(static_cast<size_t>(out.g.edge_slots()));
            out.witness[static_cast<size_t>(chord)] = std::move(w1);
        }
    }
    out.bound = std::max(g1.bound, out.max_witness_length());
    return out;
}

WitnessedSubgraph tame_degrees_stage2(const Graph& g1, int delta) {
    return tame_degrees_stage2(make_witnessed(g1, 1), delta);
}

namespace {

long long ipow_checked(int base, int exp) {
    long long v = 1;
    for (int i = 0; i < exp; ++i) {
        if (v > 2000000000000000LL / base)
            fail(errc::resource, "lipschitz", "power-graph degree overflows");
        v *= base;
    }
    return v;
}

} // namespace

LipschitzResult lipschitz_extract(const Graph& g, const Rational& lambda, int delta,
                                  int g_target, uint64_t seed, const LipschitzOptions& opts) {
    auto dr = g.regular_degree();
    if (!dr) fail(errc::parameter, "lipschitz", "input graph is not regular");
    int d = *dr;
    if (!(lambda.num > 0 && lambda.num < lambda.den))
        fail(errc::parameter, "lipschitz", "lambda must lie in (0,1)");
    if (delta < 1) fail(errc::parameter, "lipschitz", "delta must be >= 1");
    if (g_target < 3) fail(errc::parameter, "lipschitz", "g_target must be >= 3");

    // hypothesis: cycle counts below (lambda d)^k for k < g_target
    {
        CyclesProfile profile = count_short_cycles(g, g_target);
        Rational base(lambda.num * d, lambda.den);
        HypothesisReport hyp = check_hypothesis(profile, base);
        if (!hyp.ok)
            fail(errc::precondition, "lipschitz",
                 "cycle-count hypothesis with base (lambda*d) fails at vertex " +
                     std::to_string(hyp.worst_vertex));
    }

    int L = compute_L(lambda, delta, d);
    std::string last_failure;
    for (int retry = 0; retry <= opts.max_retries; ++retry, L += 2) {
        int half = L / 2;
        PowerGraph pg = power_graph(g, half, opts.walk_cap, opts.jobs);
        int g2 = static_cast<int>((2LL * g_target + L - 1) / L); // ceil(2 g / L)
        long long d_pow = ipow_checked(d, half);

        CyclesProfile profile;
        if (g2 >= 3) {
            profile = count_short_cycles(pg.g, g2);
        } else {
            g2 = 2;
            profile.g_target = 2;
            profile.n = pg.g.n();
            profile.cyc_off.push_back(0);
        }
        HypothesisReport hyp = check_hypothesis(profile, Rational(d_pow, 12LL * delta));
        if (!hyp.ok) {
            last_failure = "power-graph cycle hypothesis failed";
            continue;
        }

        ExtractionParams ep;
        ep.delta = delta;
        ep.g = g2;
        ep.seed = key_mix(seed, 0x6c6970ULL, static_cast<uint64_t>(retry));
        ep.algorithm = opts.algorithm;
        ep.allow_irregular = true;
        ep.event_cap = opts.event_cap;
        ExtractResult ex = extract(pg.g, ep, &profile);

        // assemble the witnessed subgraph from the chosen power edges
        WitnessedSubgraph ws;
        ws.n = g.n();
        ws.bound = half;
        ws.g = Graph(g.n());
        ws.witness.reserve(ex.host_edge_ids.size());
        for (int pid : ex.host_edge_ids) {
            EdgeEnds e = pg.g.ends(pid);
            int id = ws.g.add_edge(e.u, e.v);
            ws.witness.resize(static_cast<size_t>(ws.g.edge_slots()));
            std::span<const int> w = pg.witness(pid);
            ws.witness[static_cast<size_t>(id)] = std::vector<int>(w.begin(), w.end());
        }

        Graph tamed = tame_degrees_stage1(ws.g, delta, key_mix(seed, 0x7431ULL, retry));
        // stage-1 removals carry over by edge id
        for (int id : ws.g.alive_edges())
            if (!tamed.edge_alive(id)) ws.g.remove_edge(id);

        WitnessedSubgraph final_ws = tame_degrees_stage2(ws, delta);
        final_ws.bound = L;

        // verify the full output contract
        std::optional<int> girth_found = girth(final_ws.g);
        int min_deg = final_ws.g.min_degree();
        int max_deg = final_ws.g.max_degree();
        int max_wit = final_ws.max_witness_length();
        bool ok = min_deg >= delta && max_deg <= delta + 1 && max_wit <= L &&
                  (!girth_found || static_cast<long long>(*girth_found) * L >= g_target);
        if (!ok) {
            last_failure = "verification failed: min_deg=" + std::to_string(min_deg) +
                           " max_deg=" + std::to_string(max_deg) +
                           " max_witness=" + std::to_string(max_wit);
            continue;
        }

        LipschitzResult result;
        result.h = std::move(final_ws);
        result.cert.n = g.n();
        result.cert.d = d;
        result.cert.delta = delta;
        result.cert.g_target = g_target;
        result.cert.lambda = lambda.to_double();
        result.cert.L = L;
        result.cert.half_L = half;
        result.cert.power_girth_target = g2;
        result.cert.girth_found = girth_found;
        result.cert.min_degree = min_deg;
        result.cert.max_degree = max_deg;
        result.cert.max_witness = max_wit;
        result.cert.power_edges = pg.g.m();
        result.cert.closed_walks_dropped = 0;
        for (long long c : pg.closed_walks) result.cert.closed_walks_dropped += c;
        result.cert.events = ex.cert.events;
        result.cert.resamples = ex.cert.resamples;
        result.cert.condition_slack = ex.cert.condition_slack;
        result.cert.retries = retry;
        result.cert.seed = seed;
        return result;
    }
    fail(errc::verification, "lipschitz",
         "pipeline failed after retries: " + last_failure);
}

std::string LipschitzCertificate::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["d"] = d;
    j["delta"] = delta;
    j["g_target"] = g_target;
    j["lambda"] = lambda;
    j["L"] = L;
    j["half_L"] = half_L;
    j["power_girth_target"] = power_girth_target;
    if (girth_found) j["girth_found"] = *girth_found;
    else j["girth_found"] = nullptr;
    j["min_degree"] = min_degree;
    j["max_degree"] = max_degree;
    j["max_witness"] = max_witness;
    j["power_edges"] = power_edges;
    j["closed_walks_dropped"] = closed_walks_dropped;
    j["events"] = events;
    j["resamples"] = resamples;
    j["condition_slack"] = condition_slack;
    j["retries"] = retries;
    j["seed"] = seed;
    return j.dump();
}

} // namespace lgs
