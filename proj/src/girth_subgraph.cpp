#include "lgs/girth_subgraph.hpp"

#include <algorithm>
#include <cmath>

#include "lgs/error.hpp"
#include "lgs/rng.hpp"

#include "json.hpp"

namespace lgs {

Rational edge_probability(int d, int delta) {
    if (delta < 1 || delta > d) fail(errc::parameter, "edge-probability", "need 1 <= delta <= d");
    // 2*delta/d - delta^2/d^2
    long long num = 2LL * delta * d - static_cast<long long>(delta) * delta;
    return Rational(num, static_cast<long long>(d) * d);
}

namespace {

// one edge-realization event per combination of parallel edges along a cycle
template <typename Emit>
void expand_cycle(const Graph& g, std::span<const int> verts, Emit&& emit) {
    int k = static_cast<int>(verts.size());
    if (k == 2) {
        std::vector<int> ids = g.edges_between(verts[0], verts[1]);
        for (size_t a = 0; a < ids.size(); ++a)
            for (size_t b = a + 1; b < ids.size(); ++b)
                emit(std::vector<int>{ids[a], ids[b]});
        return;
    }
    std::vector<std::vector<int>> options(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i)
        options[static_cast<size_t>(i)] = g.edges_between(verts[static_cast<size_t>(i)],
                                                          verts[static_cast<size_t>((i + 1) % k)]);
    std::vector<int> pick(static_cast<size_t>(k), 0);
    while (true) {
        std::vector<int> edges(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i)
            edges[static_cast<size_t>(i)] =
                options[static_cast<size_t>(i)][static_cast<size_t>(pick[static_cast<size_t>(i)])];
        emit(std::move(edges));
        int i = k - 1;
        while (i >= 0 && pick[static_cast<size_t>(i)] + 1 >=
                             static_cast<int>(options[static_cast<size_t>(i)].size())) {
            pick[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++pick[static_cast<size_t>(i)];
    }
}

} // namespace

ChoiceInstance::ChoiceInstance(const Graph& g, const CyclesProfile& profile, int delta,
                               long long event_cap)
    : g_(g), n_(g.n()), delta_(delta) {
    if (delta < 1) fail(errc::parameter, "choice-instance", "delta must be >= 1");
    if (delta > g.min_degree())
        fail(errc::parameter, "choice-instance",
             "delta " + std::to_string(delta) + " exceeds minimum degree " +
                 std::to_string(g.min_degree()));
    d_nom_ = g.max_degree();
    if (profile.cycle_count() > 0 && 3LL * delta >= d_nom_)
        fail(errc::precondition, "choice-instance",
             "weight (3*delta/d)^k would reach 1: d=" + std::to_string(d_nom_) +
                 ", delta=" + std::to_string(delta) + " is outside the hypothesis regime");

    choice_.assign(static_cast<size_t>(n_) * static_cast<size_t>(delta_), -1);
    chosen_.assign(static_cast<size_t>(g.edge_slots()), 0);

    double x_base = 3.0 * delta / d_nom_;
    int d_min = g.min_degree();
    double bound_base = std::min(1.0, 2.0 * delta / d_min);

    ev_off_.push_back(0);
    ev_eoff_.push_back(0);
    for (int c = 0; c < profile.cycle_count(); ++c) {
        std::span<const int> verts = profile.cycle(c);
        expand_cycle(g_, verts, [&](std::vector<int> edges) {
            if (static_cast<long long>(ev_x_.size()) >= event_cap)
                fail(errc::resource, "choice-instance",
                     "event cap " + std::to_string(event_cap) + " exceeded");
            int k = static_cast<int>(verts.size());
            for (int v : verts) ev_vbl_.push_back(v);
            ev_off_.push_back(static_cast<int>(ev_vbl_.size()));
            for (int id : edges) ev_edges_.push_back(id);
            ev_eoff_.push_back(static_cast<int>(ev_edges_.size()));
            ev_x_.push_back(std::pow(x_base, k));
            ev_bound_.push_back(std::pow(bound_base, k));
        });
    }
}

std::span<const int> ChoiceInstance::vbl(int event) const {
    return {ev_vbl_.data() + ev_off_[static_cast<size_t>(event)],
            ev_vbl_.data() + ev_off_[static_cast<size_t>(event) + 1]};
}

bool ChoiceInstance::holds(int event) const {
    for (int i = ev_eoff_[static_cast<size_t>(event)]; i < ev_eoff_[static_cast<size_t>(event) + 1];
         ++i)
        if (chosen_[static_cast<size_t>(ev_edges_[static_cast<size_t>(i)])] == 0) return false;
    return true;
}

std::span<const int> ChoiceInstance::choices(int v) const {
    return {choice_.data() + static_cast<size_t>(v) * delta_,
            choice_.data() + static_cast<size_t>(v + 1) * delta_};
}

std::span<const int> ChoiceInstance::event_edges(int event) const {
    return {ev_edges_.data() + ev_eoff_[static_cast<size_t>(event)],
            ev_edges_.data() + ev_eoff_[static_cast<size_t>(event) + 1]};
}

void ChoiceInstance::sample_variable(int var, uint64_t key) {
    int* slot = choice_.data() + static_cast<size_t>(var) * delta_;
    for (int j = 0; j < delta_; ++j)
        if (slot[j] >= 0) --chosen_[static_cast<size_t>(slot[j])];
    const std::vector<int>& inc = g_.incident(var);
    Rng rng(key);
    for (int j = 0; j < delta_; ++j) {
        int id;
        bool fresh;
        do {
            id = inc[static_cast<size_t>(rng.next_below(inc.size()))];
            fresh = true;
            for (int t = 0; t < j; ++t)
                if (slot[t] == id) { fresh = false; break; }
        } while (!fresh);
        slot[j] = id;
        ++chosen_[static_cast<size_t>(id)];
    }
}

std::vector<int> ChoiceInstance::chosen_edge_ids() const {
    std::vector<int> out;
    for (size_t id = 0; id < chosen_.size(); ++id)
        if (chosen_[id] > 0) out.push_back(static_cast<int>(id));
    return out;
}

ExtractResult extract(const Graph& g, const ExtractionParams& params,
                      const CyclesProfile* profile_in) {
    if (params.g < 2) fail(errc::parameter, "extract", "girth target must be >= 2");
    std::optional<int> dr = g.regular_degree();
    if (!dr && !params.allow_irregular)
        fail(errc::parameter, "extract", "input graph is not regular");
    int d_nom = dr ? *dr : g.max_degree();
    if (params.delta < 1 || params.delta > g.min_degree())
        fail(errc::parameter, "extract", "need 1 <= delta <= min degree");

    CyclesProfile local;
    const CyclesProfile* profile = profile_in;
    if (!profile) {
        if (params.g >= 3) {
            local = count_short_cycles(g, params.g, params.cycle_cap);
        } else {
            // girth target 2: loops are already excluded, nothing to forbid
            local.g_target = params.g;
            local.n = g.n();
            local.cyc_off.push_back(0);
        }
        profile = &local;
    }

    Rational base(d_nom, 12LL * params.delta);
    HypothesisReport hyp = check_hypothesis(*profile, base);
    if (!hyp.ok && !params.override_hypothesis)
        fail(errc::precondition, "extract",
             "cycle-count hypothesis fails at vertex " + std::to_string(hyp.worst_vertex) +
                 ": c(x," + std::to_string(hyp.worst_k) + ")=" + std::to_string(hyp.worst_count) +
                 " > " + std::to_string(hyp.worst_bound) + " (pass override to proceed)");

    ChoiceInstance inst(g, *profile, params.delta, params.event_cap);
    lll::ConditionReport cond = lll::check_condition(inst, inst.prob_bounds());
    if (!cond.ok && !params.override_hypothesis)
        fail(errc::precondition, "extract",
             "condition (*) fails: slack " + std::to_string(cond.slack) + " at event " +
                 std::to_string(cond.worst_event));

    lll::RunStats stats;
    if (params.algorithm == 1) {
        lll::EngineLimits limits;
        limits.resample_cap = params.resample_cap;
        stats = lll::run_algorithm1(inst, lll::Selection::first_violated, params.seed, limits);
    } else if (params.algorithm == 2) {
        lll::ScheduleConfig cfg;
        cfg.seq = params.seq;
        cfg.round_cap = params.round_cap;
        cfg.seed = params.seed;
        stats = lll::run_algorithm2(inst, cfg);
    } else {
        fail(errc::parameter, "extract", "algorithm must be 1 or 2");
    }

    ExtractResult result;
    result.host_edge_ids = inst.chosen_edge_ids();
    result.subgraph = Graph(g.n());
    for (int id : result.host_edge_ids) {
        EdgeEnds e = g.ends(id);
        result.subgraph.add_edge(e.u, e.v);
    }

    std::optional<int> girth_found = girth(result.subgraph);
    int min_deg = result.subgraph.min_degree();
    if (girth_found && *girth_found < params.g)
        fail(errc::verification, "extract",
             "output girth " + std::to_string(*girth_found) + " below target despite termination");
    if (min_deg < params.delta)
        fail(errc::verification, "extract", "output minimum degree below delta");

    result.cert = ExtractCertificate{g.n(),
                                     d_nom,
                                     params.delta,
                                     params.g,
                                     girth_found,
                                     min_deg,
                                     static_cast<long long>(inst.num_events()),
                                     stats.total_resamples,
                                     params.seed,
                                     base,
                                     hyp.ok,
                                     cond.slack,
                                     cond.method};
    result.stats = std::move(stats);
    return result;
}

MonteCarloReport monotone_cycle_probability_test(const Graph& g, std::span<const int> cycle,
                                                 const ExtractionParams& params,
                                                 long long trials) {
    int k = static_cast<int>(cycle.size());
    if (k < 1) fail(errc::parameter, "monotone-test", "empty cycle");
    std::vector<std::vector<int>> edge_ids(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        int u = cycle[static_cast<size_t>(i)], v = cycle[static_cast<size_t>((i + 1) % k)];
        if (k == 1) fail(errc::parameter, "monotone-test", "cycle of length 1");
        if (k == 2 && i == 1) break; // single edge "cycle": endpoints u,v
        std::vector<int> ids = g.edges_between(u, v);
        if (ids.empty()) fail(errc::parameter, "monotone-test", "cycle edge missing in graph");
        edge_ids[static_cast<size_t>(i)] = std::move(ids);
    }
    int edges = (k == 2) ? 1 : k;

    int d_nom = g.max_degree();
    int delta = params.delta;
    long long hits = 0;
    for (long long t = 0; t < trials; ++t) {
        // sample the cycle vertices' choices only; events read nothing else
        std::vector<std::vector<int>> picks(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) {
            int v = cycle[static_cast<size_t>(i)];
            const std::vector<int>& inc = g.incident(v);
            Rng rng(key_mix(params.seed, static_cast<uint64_t>(t), static_cast<uint64_t>(v)));
            auto& mine = picks[static_cast<size_t>(i)];
            for (int j = 0; j < delta; ++j) {
                int id;
                bool fresh;
                do {
                    id = inc[static_cast<size_t>(rng.next_below(inc.size()))];
                    fresh = std::find(mine.begin(), mine.end(), id) == mine.end();
                } while (!fresh);
                mine.push_back(id);
            }
        }
        bool all_in = true;
        for (int i = 0; i < edges && all_in; ++i) {
            bool found = false;
            for (int id : edge_ids[static_cast<size_t>(i)]) {
                const auto& a = picks[static_cast<size_t>(i)];
                const auto& b = picks[static_cast<size_t>((i + 1) % k)];
                if (std::find(a.begin(), a.end(), id) != a.end() ||
                    std::find(b.begin(), b.end(), id) != b.end()) {
                    found = true;
                    break;
                }
            }
            all_in = found;
        }
        if (all_in) ++hits;
    }

    MonteCarloReport report;
    report.trials = trials;
    report.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    report.bound = std::pow(2.0 * delta / d_nom, edges);
    report.stderr_ =
        std::sqrt(report.estimate * (1.0 - report.estimate) / static_cast<double>(trials));
    report.within_bound_3sigma = report.estimate <= report.bound + 3.0 * report.stderr_;
    return report;
}

std::string ExtractCertificate::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["d"] = d;
    j["delta"] = delta;
    j["g"] = g;
    if (girth_found) j["girth_found"] = *girth_found;
    else j["girth_found"] = nullptr;
    j["min_degree_found"] = min_degree_found;
    j["events"] = events;
    j["resamples"] = resamples;
    j["seed"] = seed;
    j["hypothesis"] = {{"base", hypothesis_base.to_string()}, {"ok", hypothesis_ok}};
    j["condition"] = {{"slack", condition_slack}, {"method", condition_method}};
    return j.dump();
}

} // namespace lgs
