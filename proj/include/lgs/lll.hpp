#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lgs::lll {

// Variable-based bad-event instance. Concrete instances own the assignment
// and any derived state; the engine only drives sampling order. holds(e) must
// read exactly the variables declared in vbl(e).
class Instance {
public:
    virtual ~Instance() = default;

    virtual int num_variables() const = 0;
    virtual int num_events() const = 0;
    virtual std::span<const int> vbl(int event) const = 0;
    virtual double weight(int event) const = 0; // x(A) in (0,1)
    virtual bool holds(int event) const = 0;    // true = the bad event holds
    // Draw a fresh independent value for one variable from the given stream key.
    virtual void sample_variable(int var, uint64_t key) = 0;
};

// Round schedule for Algorithm 2. Round n admits the event set
// S_n = {A : x(A) > 1/a_n, |vbl(A)| < a_n}.
//   triangular: a = 1,1,2,1,2,3,1,2,3,4,...  (every integer infinitely often)
//   geometric:  a = 2,2,4,2,4,8,...          (powers of two, same pattern)
struct ScheduleConfig {
    enum class Seq { triangular, geometric };
    Seq seq = Seq::triangular;
    long long round_cap = 100000;
    uint64_t seed = 0;
};

long long a_at(ScheduleConfig::Seq seq, long long n); // n is 1-based

struct RunStats {
    long long rounds = 0;
    long long total_resamples = 0; // event resamples
    std::vector<long long> per_event_resamples;
    std::vector<long long> per_variable_resamples;
    bool terminated = false;

    // {rounds, total_resamples, per_event:[{id,resamples,x,bound}], terminated};
    // events never resampled are omitted from per_event.
    std::string to_json(const Instance* inst = nullptr,
                        std::span<const double> prob_bounds = {}) const;
};

enum class Selection { first_violated, random_violated };

struct EngineLimits {
    long long resample_cap = 100000000;
};

// Resample one violated event at a time until none holds.
RunStats run_algorithm1(Instance& inst, Selection sel, uint64_t seed,
                        const EngineLimits& limits = {});

// Round-based variant: per round resample the violated events of the random
// variable-disjoint set I_n.
RunStats run_algorithm2(Instance& inst, const ScheduleConfig& cfg);

// Full I_n for one round (pairwise variable-disjoint). Matches exactly what
// run_algorithm2 uses; intended for inspection and tests.
std::vector<int> round_events(const Instance& inst, const ScheduleConfig& cfg, long long n);

struct ConditionReport {
    bool ok = true;
    double slack = 0.0; // min over events of RHS / Pr-bound
    int worst_event = -1;
    std::string method; // "exact" or "factorized-lower-bound"
};

// Checks Pr[A] <= x(A) * prod_{vbl(B) cap vbl(A) != empty} (1 - x(B)) for
// every event, the product including B = A. prob_bounds supplies the caller's
// analytic Pr[A] upper bounds. Above exact_cost_cap pairwise work the product
// is replaced by the per-variable factorization, a lower bound on the true
// product (so ok=true remains sound).
ConditionReport check_condition(const Instance& inst, std::span<const double> prob_bounds,
                                long long exact_cost_cap = 50000000);

} // namespace lgs::lll
