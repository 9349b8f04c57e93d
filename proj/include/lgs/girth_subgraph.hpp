#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgs/graph.hpp"
#include "lgs/lll.hpp"

namespace lgs {

// Probability that a fixed edge lands in H when every vertex picks delta
// distinct incident edges uniformly: 2*delta/d - delta^2/d^2.
Rational edge_probability(int d, int delta);

struct ExtractionParams {
    int delta = 1;
    int g = 3;
    uint64_t seed = 0;
    int algorithm = 1; // 1 or 2
    bool override_hypothesis = false;
    bool allow_irregular = false; // accept near-regular inputs (power graphs)
    long long cycle_cap = 10000000;
    long long event_cap = 5000000;
    long long resample_cap = 100000000;
    long long round_cap = 100000;
    lll::ScheduleConfig::Seq seq = lll::ScheduleConfig::Seq::triangular;
};

// LLL instance for the subgraph distribution: one variable per vertex
// (a delta-subset of its incident edges), one bad event per short-cycle edge
// realization with weight (3*delta/d)^k. The analytic Pr bound attached per
// event is (2*delta/d_min)^k.
class ChoiceInstance final : public lll::Instance {
public:
    ChoiceInstance(const Graph& g, const CyclesProfile& profile, int delta,
                   long long event_cap = 5000000);

    int num_variables() const override { return n_; }
    int num_events() const override { return static_cast<int>(ev_off_.size()) - 1; }
    std::span<const int> vbl(int event) const override;
    double weight(int event) const override { return ev_x_[static_cast<size_t>(event)]; }
    bool holds(int event) const override;
    void sample_variable(int var, uint64_t key) override;

    const std::vector<double>& prob_bounds() const { return ev_bound_; }
    int nominal_degree() const { return d_nom_; }
    bool edge_chosen(int edge_id) const { return chosen_[static_cast<size_t>(edge_id)] > 0; }
    std::span<const int> choices(int v) const;
    std::span<const int> event_edges(int event) const;
    std::vector<int> chosen_edge_ids() const;

private:
    const Graph& g_;
    int n_;
    int delta_;
    int d_nom_;
    std::vector<int> choice_; // n * delta edge ids
    std::vector<unsigned char> chosen_;
    std::vector<int> ev_edges_;
    std::vector<int> ev_eoff_;
    std::vector<int> ev_vbl_;
    std::vector<int> ev_off_;
    std::vector<double> ev_x_;
    std::vector<double> ev_bound_;
};

struct ExtractCertificate {
    int n = 0;
    int d = 0;
    int delta = 0;
    int g = 0;
    std::optional<int> girth_found;
    int min_degree_found = 0;
    long long events = 0;
    long long resamples = 0;
    uint64_t seed = 0;
    Rational hypothesis_base{1, 1};
    bool hypothesis_ok = false;
    double condition_slack = 0.0;
    std::string condition_method;
    std::string to_json() const;
};

struct ExtractResult {
    Graph subgraph;                  // spanning, same vertex set
    std::vector<int> host_edge_ids;  // subgraph edge i came from host edge id[i]
    ExtractCertificate cert;
    lll::RunStats stats;
};

// Full extraction pipeline: hypothesis gate (base d/(12*delta)), instance build,
// condition (*) audit, resampling run, then independent re-verification of
// girth >= g and min degree >= delta on the output.
ExtractResult extract(const Graph& g, const ExtractionParams& params,
                      const CyclesProfile* profile = nullptr);

struct MonteCarloReport {
    double estimate = 0.0;
    double bound = 0.0;
    double stderr_ = 0.0;
    long long trials = 0;
    bool within_bound_3sigma = false;
};

// Monte Carlo estimate of Pr(all cycle edges land in H) under the
// unresampled distribution, against the (2*delta/d)^k bound.
MonteCarloReport monotone_cycle_probability_test(const Graph& g, std::span<const int> cycle,
                                                 const ExtractionParams& params,
                                                 long long trials);

} // namespace lgs
