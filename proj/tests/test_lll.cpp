#include "doctest.h"

#include <cmath>
#include <functional>
#include <numeric>

#include "lgs/error.hpp"
#include "lgs/lll.hpp"
#include "lgs/rng.hpp"

using namespace lgs;
using lll::ScheduleConfig;

namespace {

// boolean-variable instance with closure predicates, for engine testing
struct TestInstance final : lll::Instance {
    struct Ev {
        std::vector<int> vars;
        double x;
        std::function<bool(const std::vector<char>&)> pred;
    };
    int nv = 0;
    std::vector<char> value;
    std::vector<Ev> events;

    explicit TestInstance(int n) : nv(n), value(static_cast<size_t>(n), 0) {}

    int num_variables() const override { return nv; }
    int num_events() const override { return static_cast<int>(events.size()); }
    std::span<const int> vbl(int e) const override { return events[static_cast<size_t>(e)].vars; }
    double weight(int e) const override { return events[static_cast<size_t>(e)].x; }
    bool holds(int e) const override { return events[static_cast<size_t>(e)].pred(value); }
    void sample_variable(int v, uint64_t key) override {
        value[static_cast<size_t>(v)] = Rng(key).next_bool() ? 1 : 0;
    }

    void add_all_ones_event(std::vector<int> vars, double x) {
        auto vars_copy = vars;
        events.push_back({std::move(vars),
                          x,
                          [vars_copy](const std::vector<char>& val) {
                              for (int v : vars_copy)
                                  if (!val[static_cast<size_t>(v)]) return false;
                              return true;
                          }});
    }
};

// chain of "four bits all one" events overlapping in one variable; passes
// condition (*): 1/16 <= 1/4 * (3/4)^3
TestInstance chain_instance(int events) {
    TestInstance inst(3 * events + 1);
    for (int j = 0; j < events; ++j)
        inst.add_all_ones_event({3 * j, 3 * j + 1, 3 * j + 2, 3 * j + 3}, 0.25);
    return inst;
}

} // namespace

TEST_CASE("schedule sequences") {
    std::vector<long long> tri, geo;
    for (long long n = 1; n <= 10; ++n) {
        tri.push_back(lll::a_at(ScheduleConfig::Seq::triangular, n));
        geo.push_back(lll::a_at(ScheduleConfig::Seq::geometric, n));
    }
    CHECK(tri == std::vector<long long>{1, 1, 2, 1, 2, 3, 1, 2, 3, 4});
    CHECK(geo == std::vector<long long>{2, 2, 4, 2, 4, 8, 2, 4, 8, 16});

    // every positive integer appears infinitely often: value v shows up once
    // per block of length >= v
    std::vector<int> seen(11, 0);
    for (long long n = 1; n <= 5050; ++n) {
        long long a = lll::a_at(ScheduleConfig::Seq::triangular, n);
        if (a <= 10) ++seen[static_cast<size_t>(a)];
    }
    for (int v = 1; v <= 10; ++v) CHECK(seen[static_cast<size_t>(v)] >= 50);
}

TEST_CASE("round membership arithmetic") {
    // event with x = 0.3 and |vbl| = 2 qualifies exactly when a_n >= 4
    TestInstance inst(2);
    inst.add_all_ones_event({0, 1}, 0.3);
    ScheduleConfig cfg;
    cfg.seed = 5;
    // triangular rounds with a = 3 (n = 6) exclude it, a = 4 (n = 10) admits it
    CHECK(lll::round_events(inst, cfg, 6).empty());
    CHECK(lll::round_events(inst, cfg, 10) == std::vector<int>{0});
    // a_1 = 1 admits nothing: x > 1 is impossible
    CHECK(lll::round_events(inst, cfg, 1).empty());
}

TEST_CASE("rounds emit pairwise variable-disjoint events") {
    TestInstance inst = chain_instance(8);
    ScheduleConfig cfg;
    cfg.seed = 42;
    for (long long n = 1; n <= 300; ++n) {
        std::vector<int> picked = lll::round_events(inst, cfg, n);
        std::vector<char> used(static_cast<size_t>(inst.num_variables()), 0);
        for (int e : picked)
            for (int v : inst.vbl(e)) {
                CHECK_FALSE(used[static_cast<size_t>(v)]);
                used[static_cast<size_t>(v)] = 1;
            }
    }
}

TEST_CASE("algorithm 1: zero events returns the initial sample") {
    TestInstance inst(4);
    lll::RunStats stats = lll::run_algorithm1(inst, lll::Selection::first_violated, 7);
    CHECK(stats.terminated);
    CHECK(stats.total_resamples == 0);
}

TEST_CASE("algorithm 1 terminates with no event holding") {
    TestInstance inst = chain_instance(6);
    lll::RunStats stats = lll::run_algorithm1(inst, lll::Selection::first_violated, 11);
    CHECK(stats.terminated);
    for (int e = 0; e < inst.num_events(); ++e) CHECK_FALSE(inst.holds(e));
}

TEST_CASE("algorithm 1 determinism") {
    TestInstance a = chain_instance(6);
    TestInstance b = chain_instance(6);
    lll::RunStats sa = lll::run_algorithm1(a, lll::Selection::random_violated, 99);
    lll::RunStats sb = lll::run_algorithm1(b, lll::Selection::random_violated, 99);
    CHECK(a.value == b.value);
    CHECK(sa.total_resamples == sb.total_resamples);
    CHECK(sa.per_event_resamples == sb.per_event_resamples);
}

TEST_CASE("algorithm 1 resample cap raises a non-termination error") {
    TestInstance inst(1);
    inst.events.push_back({{0}, 0.5, [](const std::vector<char>&) { return true; }});
    lll::EngineLimits limits;
    limits.resample_cap = 50;
    CHECK_THROWS_AS(lll::run_algorithm1(inst, lll::Selection::first_violated, 1, limits), error);
}

TEST_CASE("moser-tardos resample bound, statistical") {
    // single event: two fair bits both one. Pr = 1/4 = x(1-x) at x = 1/2,
    // condition (*) holds with slack exactly 1; expected resamples <= 1.
    const int runs = 1000;
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < runs; ++r) {
        TestInstance inst(2);
        inst.add_all_ones_event({0, 1}, 0.5);
        lll::RunStats stats =
            lll::run_algorithm1(inst, lll::Selection::first_violated, 1000 + r);
        CHECK(stats.terminated);
        double x = static_cast<double>(stats.per_event_resamples[0]);
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / runs;
    double sd = std::sqrt(std::max(0.0, sumsq / runs - mean * mean));
    double se = sd / std::sqrt(static_cast<double>(runs));
    CHECK(mean <= 1.0 + 3.0 * se); // x/(1-x) = 1
}

TEST_CASE("fair coin example: terminates at tails, mean within 1.5") {
    const int runs = 1000;
    double sum = 0.0;
    for (int r = 0; r < runs; ++r) {
        TestInstance inst(1);
        inst.add_all_ones_event({0}, 0.6);
        lll::RunStats stats = lll::run_algorithm1(inst, lll::Selection::first_violated, 5000 + r);
        CHECK(stats.terminated);
        CHECK(inst.value[0] == 0);
        sum += static_cast<double>(stats.per_event_resamples[0]);
    }
    CHECK(sum / runs <= 1.5); // x/(1-x); the true mean is 1
}

TEST_CASE("algorithm 2: zero events returns after round 0") {
    TestInstance inst(3);
    ScheduleConfig cfg;
    cfg.seed = 3;
    lll::RunStats stats = lll::run_algorithm2(inst, cfg);
    CHECK(stats.terminated);
    CHECK(stats.rounds == 0);
}

TEST_CASE("algorithm 2 terminates and matches algorithm 1's guarantees") {
    for (uint64_t seed : {1, 2, 3, 4, 5}) {
        TestInstance inst = chain_instance(6);
        ScheduleConfig cfg;
        cfg.seed = seed;
        lll::RunStats stats = lll::run_algorithm2(inst, cfg);
        CHECK(stats.terminated);
        CHECK(stats.rounds <= cfg.round_cap);
        for (int e = 0; e < inst.num_events(); ++e) CHECK_FALSE(inst.holds(e));
    }
}

TEST_CASE("algorithm 2 statistical bound on the two-bit instance") {
    const int runs = 200;
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < runs; ++r) {
        TestInstance inst(2);
        inst.add_all_ones_event({0, 1}, 0.5);
        ScheduleConfig cfg;
        cfg.seed = 9000 + static_cast<uint64_t>(r);
        lll::RunStats stats = lll::run_algorithm2(inst, cfg);
        CHECK(stats.terminated);
        double x = static_cast<double>(stats.per_event_resamples[0]);
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / runs;
    double sd = std::sqrt(std::max(0.0, sumsq / runs - mean * mean));
    CHECK(mean <= 1.0 + 3.0 * sd / std::sqrt(static_cast<double>(runs)));
}

TEST_CASE("algorithm 2 round cap raises a non-termination error") {
    TestInstance inst(1);
    inst.events.push_back({{0}, 0.5, [](const std::vector<char>&) { return true; }});
    ScheduleConfig cfg;
    cfg.seed = 1;
    cfg.round_cap = 5;
    CHECK_THROWS_AS(lll::run_algorithm2(inst, cfg), error);
}

TEST_CASE("geometric schedule reaches tiny weights quickly") {
    TestInstance inst(2);
    inst.add_all_ones_event({0, 1}, 1e-4); // admission needs a > 10000
    ScheduleConfig cfg;
    cfg.seed = 12345;
    cfg.seq = ScheduleConfig::Seq::geometric;
    cfg.round_cap = 100000;
    lll::RunStats stats = lll::run_algorithm2(inst, cfg);
    CHECK(stats.terminated);
    CHECK(stats.rounds < 2000);
}

TEST_CASE("condition (*) examples") {
    // single event, Pr bound 1/4, x = 1/2, product over itself only
    TestInstance one(1);
    one.add_all_ones_event({0}, 0.5);
    std::vector<double> bounds{0.25};
    lll::ConditionReport r1 = lll::check_condition(one, bounds);
    CHECK(r1.ok);
    CHECK(r1.slack == doctest::Approx(1.0));

    // two fully-overlapping events, Pr bound 0.4, x = 0.5:
    // RHS = 0.5 * 0.5 * 0.5 = 0.125 < 0.4
    TestInstance two(1);
    two.add_all_ones_event({0}, 0.5);
    two.add_all_ones_event({0}, 0.5);
    std::vector<double> bounds2{0.4, 0.4};
    lll::ConditionReport r2 = lll::check_condition(two, bounds2);
    CHECK_FALSE(r2.ok);
    CHECK(r2.slack == doctest::Approx(0.125 / 0.4));

    // the factorized lower bound coincides here (single shared variable)
    lll::ConditionReport r3 = lll::check_condition(two, bounds2, 0);
    CHECK(r3.method == "factorized-lower-bound");
    CHECK(r3.slack == doctest::Approx(r2.slack));

    // chain instance passes: 1/16 <= 1/4 * (3/4)^3
    TestInstance chain = chain_instance(5);
    std::vector<double> bounds3(5, 1.0 / 16.0);
    lll::ConditionReport r4 = lll::check_condition(chain, bounds3);
    CHECK(r4.ok);
}

TEST_CASE("factorized bound never exceeds the exact product") {
    TestInstance chain = chain_instance(7);
    std::vector<double> bounds(7, 1.0 / 16.0);
    lll::ConditionReport exact = lll::check_condition(chain, bounds);
    lll::ConditionReport lower = lll::check_condition(chain, bounds, 0);
    CHECK(exact.method == "exact");
    CHECK(lower.slack <= exact.slack + 1e-12);
}

TEST_CASE("vbl declarations are honest: outside variables never change a predicate") {
    TestInstance inst = chain_instance(4);
    lll::run_algorithm1(inst, lll::Selection::first_violated, 77);
    Rng rng(123);
    for (int e = 0; e < inst.num_events(); ++e) {
        bool before = inst.holds(e);
        std::vector<char> in_vbl(static_cast<size_t>(inst.num_variables()), 0);
        for (int v : inst.vbl(e)) in_vbl[static_cast<size_t>(v)] = 1;
        for (int trial = 0; trial < 50; ++trial) {
            for (int v = 0; v < inst.num_variables(); ++v)
                if (!in_vbl[static_cast<size_t>(v)]) inst.sample_variable(v, rng.next());
            CHECK(inst.holds(e) == before);
        }
    }
}

TEST_CASE("run stats serialize to the documented json shape") {
    TestInstance inst = chain_instance(3);
    std::vector<double> bounds(3, 1.0 / 16.0);
    lll::RunStats stats = lll::run_algorithm1(inst, lll::Selection::first_violated, 5);
    std::string json = stats.to_json(&inst, bounds);
    CHECK(json.find("\"rounds\"") != std::string::npos);
    CHECK(json.find("\"total_resamples\"") != std::string::npos);
    CHECK(json.find("\"per_event\"") != std::string::npos);
    CHECK(json.find("\"terminated\":true") != std::string::npos);
}
