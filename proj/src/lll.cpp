#include "lgs/lll.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgs/error.hpp"
#include "lgs/rng.hpp"

#include "json.hpp"

namespace lgs::lll {

namespace {

constexpr uint64_t kSampleTag = 0x76617273616d70ULL; // variable sampling streams
constexpr uint64_t kRoundTag = 0x726f756e647072ULL;  // per-round event priorities
constexpr uint64_t kPickTag = 0x7069636b73656cULL;   // random-violated selection

// CSR dependency index: variable -> events reading it.
struct DepIndex {
    std::vector<int> off;
    std::vector<int> data;

    explicit DepIndex(const Instance& inst) {
        int nv = inst.num_variables(), ne = inst.num_events();
        off.assign(static_cast<size_t>(nv) + 1, 0);
        for (int e = 0; e < ne; ++e)
            for (int v : inst.vbl(e)) ++off[static_cast<size_t>(v) + 1];
        for (size_t i = 1; i < off.size(); ++i) off[i] += off[i - 1];
        data.resize(static_cast<size_t>(off.back()));
        std::vector<int> cur(off.begin(), off.end() - 1);
        for (int e = 0; e < ne; ++e)
            for (int v : inst.vbl(e)) data[static_cast<size_t>(cur[static_cast<size_t>(v)]++)] = e;
    }

    std::span<const int> events_at(int v) const {
        return {data.data() + off[static_cast<size_t>(v)],
                data.data() + off[static_cast<size_t>(v) + 1]};
    }
};

// Violated-event set with O(1) insert/erase.
struct ViolatedSet {
    std::vector<int> items;
    std::vector<int> pos; // -1 when absent

    explicit ViolatedSet(int ne) : pos(static_cast<size_t>(ne), -1) {}

    bool contains(int e) const { return pos[static_cast<size_t>(e)] >= 0; }
    bool empty() const { return items.empty(); }

    void insert(int e) {
        if (contains(e)) return;
        pos[static_cast<size_t>(e)] = static_cast<int>(items.size());
        items.push_back(e);
    }
    void erase(int e) {
        int p = pos[static_cast<size_t>(e)];
        if (p < 0) return;
        int last = items.back();
        items[static_cast<size_t>(p)] = last;
        pos[static_cast<size_t>(last)] = p;
        items.pop_back();
        pos[static_cast<size_t>(e)] = -1;
    }
    void refresh(const Instance& inst, int e) {
        if (inst.holds(e)) insert(e);
        else erase(e);
    }
};

struct Driver {
    Instance& inst;
    uint64_t seed;
    DepIndex dep;
    ViolatedSet violated;
    RunStats stats;
    std::vector<long long> var_counter;

    Driver(Instance& i, uint64_t s)
        : inst(i), seed(s), dep(i), violated(i.num_events()) {
        stats.per_event_resamples.assign(static_cast<size_t>(i.num_events()), 0);
        stats.per_variable_resamples.assign(static_cast<size_t>(i.num_variables()), 0);
        var_counter.assign(static_cast<size_t>(i.num_variables()), 0);
    }

    void sample(int v) {
        inst.sample_variable(
            v, key_mix(seed, kSampleTag, static_cast<uint64_t>(v),
                       static_cast<uint64_t>(var_counter[static_cast<size_t>(v)]++)));
    }

    void initial_sample() {
        for (int v = 0; v < inst.num_variables(); ++v) sample(v);
        for (int e = 0; e < inst.num_events(); ++e)
            if (inst.holds(e)) violated.insert(e);
    }

    void resample_event(int e) {
        for (int v : inst.vbl(e)) {
            sample(v);
            ++stats.per_variable_resamples[static_cast<size_t>(v)];
        }
        ++stats.per_event_resamples[static_cast<size_t>(e)];
        ++stats.total_resamples;
        for (int v : inst.vbl(e))
            for (int b : dep.events_at(v)) violated.refresh(inst, b);
    }
};

// priority pair (r, id); larger wins
struct Priority {
    double r;
    int id;
    bool operator>(const Priority& o) const { return r != o.r ? r > o.r : id > o.id; }
};

Priority round_priority(uint64_t seed, long long round, int event) {
    uint64_t key = key_mix(seed, kRoundTag, static_cast<uint64_t>(round),
                           static_cast<uint64_t>(event));
    return {keyed_uniform(key), event};
}

// smallest admission round value a with x > 1/a and |vbl| < a
long long admission_threshold(const Instance& inst, int e) {
    double x = inst.weight(e);
    long long from_x = static_cast<long long>(std::floor(1.0 / x)) + 1;
    long long from_vbl = static_cast<long long>(inst.vbl(e).size()) + 1;
    return std::max(from_x, from_vbl);
}

long long triangle_root(long long n) { // largest b with b(b+1)/2 <= n
    auto t = static_cast<long long>(std::sqrt(2.0 * static_cast<double>(n)));
    while (t * (t + 1) / 2 > n) --t;
    while ((t + 1) * (t + 2) / 2 <= n) ++t;
    return t;
}

// first round >= n whose in-block position is >= pos
long long next_round_with_position_at_least(long long n, long long pos) {
    if (pos <= 1) return n;
    long long b = triangle_root(n - 1); // completed blocks before round n
    long long block_start = b * (b + 1) / 2 + 1;
    long long block_len = b + 1;
    if (block_len >= pos) {
        long long candidate = std::max(n, block_start + pos - 1);
        if (candidate <= block_start + block_len - 1) return candidate;
    }
    long long k = std::max(block_len + 1, pos); // first block long enough
    return k * (k + 1) / 2 - k + pos;
}

long long position_needed(ScheduleConfig::Seq seq, long long value) {
    if (seq == ScheduleConfig::Seq::triangular) return value;
    // geometric: a = 2^position
    long long pos = 1;
    long long a = 2;
    while (a < value) {
        a *= 2;
        ++pos;
    }
    return pos;
}

} // namespace

long long a_at(ScheduleConfig::Seq seq, long long n) {
    if (n < 1) fail(errc::parameter, "schedule", "rounds are 1-based");
    long long b = triangle_root(n - 1);
    long long position = n - b * (b + 1) / 2;
    if (seq == ScheduleConfig::Seq::triangular) return position;
    if (position >= 62) return 1LL << 62; // saturate
    return 1LL << position;
}

RunStats run_algorithm1(Instance& inst, Selection sel, uint64_t seed,
                        const EngineLimits& limits) {
    Driver d(inst, seed);
    d.initial_sample();
    Rng pick(key_mix(seed, kPickTag));
    while (!d.violated.empty()) {
        if (d.stats.total_resamples >= limits.resample_cap)
            fail(errc::non_termination, "algorithm1",
                 "resample cap " + std::to_string(limits.resample_cap) + " exceeded with " +
                     std::to_string(d.violated.items.size()) + " events still violated");
        int e;
        if (sel == Selection::first_violated) {
            e = *std::min_element(d.violated.items.begin(), d.violated.items.end());
        } else {
            e = d.violated.items[static_cast<size_t>(pick.next_below(d.violated.items.size()))];
        }
        d.resample_event(e);
    }
    d.stats.terminated = true;
    return d.stats;
}

RunStats run_algorithm2(Instance& inst, const ScheduleConfig& cfg) {
    Driver d(inst, cfg.seed);
    d.initial_sample();
    std::vector<long long> amin(static_cast<size_t>(inst.num_events()));
    for (int e = 0; e < inst.num_events(); ++e) amin[static_cast<size_t>(e)] = admission_threshold(inst, e);

    long long round = 0;
    std::vector<int> selected;
    while (!d.violated.empty()) {
        long long needed = amin[static_cast<size_t>(d.violated.items[0])];
        for (int e : d.violated.items) needed = std::min(needed, amin[static_cast<size_t>(e)]);
        // skip rounds in which no violated event qualifies; keyed priorities
        // make the skipped rounds' draws irrelevant
        long long next = next_round_with_position_at_least(
            round + 1, position_needed(cfg.seq, needed));
        if (next > cfg.round_cap)
            fail(errc::non_termination, "algorithm2",
                 "round cap " + std::to_string(cfg.round_cap) + " exceeded with " +
                     std::to_string(d.violated.items.size()) + " events still violated");
        round = next;
        long long a = a_at(cfg.seq, round);

        selected.clear();
        for (int e : d.violated.items) {
            if (amin[static_cast<size_t>(e)] > a) continue;
            Priority mine = round_priority(cfg.seed, round, e);
            bool is_max = true;
            for (int v : inst.vbl(e)) {
                for (int b : d.dep.events_at(v)) {
                    if (b == e || amin[static_cast<size_t>(b)] > a) continue;
                    if (round_priority(cfg.seed, round, b) > mine) {
                        is_max = false;
                        break;
                    }
                }
                if (!is_max) break;
            }
            if (is_max) selected.push_back(e);
        }
        for (int e : selected) d.resample_event(e);
        d.stats.rounds = round;
    }
    d.stats.terminated = true;
    return d.stats;
}

std::vector<int> round_events(const Instance& inst, const ScheduleConfig& cfg, long long n) {
    long long a = a_at(cfg.seq, n);
    std::vector<int> qualified;
    for (int e = 0; e < inst.num_events(); ++e)
        if (admission_threshold(inst, e) <= a) qualified.push_back(e);
    DepIndex dep(inst);
    std::vector<char> in_s(static_cast<size_t>(inst.num_events()), 0);
    for (int e : qualified) in_s[static_cast<size_t>(e)] = 1;
    std::vector<int> out;
    for (int e : qualified) {
        Priority mine = round_priority(cfg.seed, n, e);
        bool is_max = true;
        for (int v : inst.vbl(e)) {
            for (int b : dep.events_at(v)) {
                if (b == e || !in_s[static_cast<size_t>(b)]) continue;
                if (round_priority(cfg.seed, n, b) > mine) {
                    is_max = false;
                    break;
                }
            }
            if (!is_max) break;
        }
        if (is_max) out.push_back(e);
    }
    return out;
}

ConditionReport check_condition(const Instance& inst, std::span<const double> prob_bounds,
                                long long exact_cost_cap) {
    int ne = inst.num_events();
    if (static_cast<int>(prob_bounds.size()) != ne)
        fail(errc::parameter, "condition", "one probability bound per event required");
    for (int e = 0; e < ne; ++e) {
        double x = inst.weight(e);
        if (!(x > 0.0 && x < 1.0))
            fail(errc::parameter, "condition",
                 "weight x(A) must lie in (0,1), event " + std::to_string(e));
    }
    ConditionReport report;
    if (ne == 0) {
        report.ok = true;
        report.slack = std::numeric_limits<double>::infinity();
        report.method = "exact";
        return report;
    }

    DepIndex dep(inst);
    long long exact_cost = 0;
    for (int e = 0; e < ne; ++e)
        for (int v : inst.vbl(e)) exact_cost += static_cast<long long>(dep.events_at(v).size());

    double min_slack = std::numeric_limits<double>::infinity();
    int worst = -1;

    if (exact_cost <= exact_cost_cap) {
        report.method = "exact";
        std::vector<int> epoch(static_cast<size_t>(ne), -1);
        for (int e = 0; e < ne; ++e) {
            double log_prod = 0.0;
            for (int v : inst.vbl(e)) {
                for (int b : dep.events_at(v)) {
                    if (epoch[static_cast<size_t>(b)] == e) continue;
                    epoch[static_cast<size_t>(b)] = e;
                    log_prod += std::log1p(-inst.weight(b));
                }
            }
            double rhs = inst.weight(e) * std::exp(log_prod);
            double lhs = prob_bounds[static_cast<size_t>(e)];
            double slack = lhs > 0 ? rhs / lhs : std::numeric_limits<double>::infinity();
            if (slack < min_slack) {
                min_slack = slack;
                worst = e;
            }
        }
    } else {
        report.method = "factorized-lower-bound";
        std::vector<double> log_f(static_cast<size_t>(inst.num_variables()), 0.0);
        for (int e = 0; e < ne; ++e) {
            double lx = std::log1p(-inst.weight(e));
            for (int v : inst.vbl(e)) log_f[static_cast<size_t>(v)] += lx;
        }
        for (int e = 0; e < ne; ++e) {
            double log_prod = 0.0;
            for (int v : inst.vbl(e)) log_prod += log_f[static_cast<size_t>(v)];
            double rhs = inst.weight(e) * std::exp(log_prod);
            double lhs = prob_bounds[static_cast<size_t>(e)];
            double slack = lhs > 0 ? rhs / lhs : std::numeric_limits<double>::infinity();
            if (slack < min_slack) {
                min_slack = slack;
                worst = e;
            }
        }
    }
    report.slack = min_slack;
    report.worst_event = worst;
    report.ok = min_slack >= 1.0 - 1e-12;
    return report;
}

std::string RunStats::to_json(const Instance* inst, std::span<const double> prob_bounds) const {
    nlohmann::json j;
    j["rounds"] = rounds;
    j["total_resamples"] = total_resamples;
    j["terminated"] = terminated;
    nlohmann::json per = nlohmann::json::array();
    for (size_t e = 0; e < per_event_resamples.size(); ++e) {
        if (per_event_resamples[e] == 0) continue;
        nlohmann::json entry;
        entry["id"] = e;
        entry["resamples"] = per_event_resamples[e];
        if (inst) entry["x"] = inst->weight(static_cast<int>(e));
        if (e < prob_bounds.size()) entry["bound"] = prob_bounds[e];
        per.push_back(entry);
    }
    j["per_event"] = per;
    return j.dump();
}

} // namespace lgs::lll
