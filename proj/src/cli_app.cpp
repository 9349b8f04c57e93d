#include "lgs/cli_app.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lgs/error.hpp"
#include "lgs/girth_subgraph.hpp"
#include "lgs/graph.hpp"
#include "lgs/lipschitz.hpp"
#include "lgs/matching.hpp"
#include "lgs/regularize_f2.hpp"
#include "lgs/rng.hpp"
#include "lgs/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

namespace lgs {

namespace {

void emit(const nlohmann::json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) fail(errc::io, "cli", "cannot write " + out_path);
        out << text;
    }
}

nlohmann::json base_report(const std::string& cmd, uint64_t seed) {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["command"] = cmd;
    j["seed"] = seed;
    return j;
}

Rational parse_ratio(const std::string& text, const char* what) {
    size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            double v = std::stod(text);
            return Rational::approximate(v, 1000000);
        }
        long long num = std::stoll(text.substr(0, slash));
        long long den = std::stoll(text.substr(slash + 1));
        return Rational(num, den);
    } catch (const std::exception&) {
        fail(errc::parameter, "cli", std::string("cannot parse ") + what + ": " + text);
    }
}

Rational lambda_for(const Graph& g, const std::string& lambda_text, int g_target) {
    if (!lambda_text.empty()) return parse_ratio(lambda_text, "lambda");
    auto dr = g.regular_degree();
    if (!dr) fail(errc::parameter, "cli", "lambda measurement needs a regular graph");
    CyclesProfile profile = count_short_cycles(g, g_target);
    double base = measured_base(profile);
    double lam = base > 0 ? base / *dr : 0.5 / *dr;
    // round up a touch so the measured profile passes its own bound
    return Rational::approximate(std::min(0.999, lam * 1.0000001 + 1e-9), 1000000);
}

int exit_code_for(const error& e) {
    switch (e.code()) {
        case errc::parameter:
        case errc::precondition:
            return 2;
        case errc::verification:
            return 3;
        default:
            return 4;
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"large-girth subgraph toolkit"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a graph");
    std::string gen_model = "random-regular", gen_out;
    int gen_n = 0, gen_d = 0, gen_a = 0, gen_b = 0;
    uint64_t gen_seed = 1;
    gen->add_option("--model", gen_model,
                    "random-regular | random-regular-multi | bipartite-regular | cycle | "
                    "complete | complete-bipartite");
    gen->add_option("--n", gen_n);
    gen->add_option("--d", gen_d);
    gen->add_option("--a", gen_a);
    gen->add_option("--b", gen_b);
    gen->add_option("--seed", gen_seed);
    gen->add_option("-o,--out", gen_out)->required();

    // ---- stats ----
    auto* stats = app.add_subcommand("stats", "structural report for a graph file");
    std::string stats_graph, stats_out;
    bool stats_rho = false;
    int stats_girth_cap = 0;
    stats->add_option("--graph", stats_graph)->required();
    stats->add_flag("--rho", stats_rho, "include the spectral report");
    stats->add_option("--count-cycles-below", stats_girth_cap,
                      "also enumerate cycles shorter than this");
    stats->add_option("-o,--out", stats_out);

    // ---- check ----
    auto* check = app.add_subcommand("check", "hypothesis / condition audit");
    std::string check_graph, check_out, check_base, check_lambda;
    int check_g = 5, check_delta = 0;
    check->add_option("--graph", check_graph)->required();
    check->add_option("--g-target", check_g);
    check->add_option("--delta", check_delta, "check base d/(12 delta) and condition (*)");
    check->add_option("--base", check_base, "explicit base as num/den");
    check->add_option("--lambda", check_lambda, "check base lambda*d");
    check->add_option("-o,--out", check_out);

    // ---- extract ----
    auto* extract_cmd = app.add_subcommand("extract", "spanning large-girth subgraph");
    std::string ex_graph, ex_out, ex_cert, ex_schedule = "triangular";
    int ex_delta = 1, ex_g = 5, ex_alg = 1;
    uint64_t ex_seed = 1;
    bool ex_override = false;
    extract_cmd->add_option("--graph", ex_graph)->required();
    extract_cmd->add_option("--delta", ex_delta)->required();
    extract_cmd->add_option("--g", ex_g)->required();
    extract_cmd->add_option("--seed", ex_seed);
    extract_cmd->add_option("--algorithm", ex_alg, "1 or 2");
    extract_cmd->add_option("--schedule", ex_schedule, "triangular | geometric (algorithm 2)");
    extract_cmd->add_flag("--override", ex_override, "proceed past a failed hypothesis check");
    extract_cmd->add_option("-o,--out", ex_out);
    extract_cmd->add_option("--cert", ex_cert);

    // ---- lipschitz ----
    auto* lip = app.add_subcommand("lipschitz", "spanning Lipschitz subgraph pipeline");
    std::string lip_graph, lip_out, lip_cert, lip_lambda;
    int lip_delta = 3, lip_g = 5, lip_jobs = 1, lip_alg = 1;
    uint64_t lip_seed = 1;
    lip->add_option("--graph", lip_graph)->required();
    lip->add_option("--delta", lip_delta)->required();
    lip->add_option("--g-target", lip_g)->required();
    lip->add_option("--lambda", lip_lambda, "num/den; measured from the profile if omitted");
    lip->add_option("--seed", lip_seed);
    lip->add_option("--jobs", lip_jobs, "parallel power-graph construction");
    lip->add_option("--algorithm", lip_alg);
    lip->add_option("-o,--out", lip_out);
    lip->add_option("--cert", lip_cert);

    // ---- f2 ----
    auto* f2 = app.add_subcommand("f2", "bounded-displacement bijection pair");
    std::string f2_graph, f2_out, f2_cert, f2_lambda, f2_ws_out;
    int f2_g = 5, f2_wordcap = 6, f2_jobs = 1;
    uint64_t f2_seed = 1;
    f2->add_option("--graph", f2_graph)->required();
    f2->add_option("--g-target", f2_g)->required();
    f2->add_option("--lambda", f2_lambda);
    f2->add_option("--seed", f2_seed);
    f2->add_option("--word-cap", f2_wordcap);
    f2->add_option("--jobs", f2_jobs);
    f2->add_option("-o,--out", f2_out);
    f2->add_option("--cert", f2_cert);
    f2->add_option("--regular4-out", f2_ws_out, "write the 4-regular stage artifact");

    // ---- match ----
    auto* match = app.add_subcommand("match", "bipartite or even-regular perfect matching");
    std::string match_bip, match_graph, match_out, match_stats;
    uint64_t match_seed = 1;
    match->add_option("--bipartite", match_bip, "bipartite graph file");
    match->add_option("--graph", match_graph, "even-regular plain graph file");
    match->add_option("--seed", match_seed);
    match->add_option("-o,--out", match_out);
    match->add_option("--stats", match_stats);

    // ---- orient ----
    auto* orient = app.add_subcommand("orient", "LLL orientation of a perfect matching");
    std::string or_graph, or_matching, or_out, or_cert;
    int or_threshold = -1, or_alg = 1;
    uint64_t or_seed = 1;
    orient->add_option("--graph", or_graph)->required();
    orient->add_option("--matching", or_matching)->required();
    orient->add_option("--threshold", or_threshold);
    orient->add_option("--algorithm", or_alg);
    orient->add_option("--seed", or_seed);
    orient->add_option("-o,--out", or_out);
    orient->add_option("--cert", or_cert);

    // ---- zaction ----
    auto* za = app.add_subcommand("zaction", "successor permutation from matching composition");
    std::string za_graph, za_matching, za_out, za_cert;
    int za_threshold = -1;
    uint64_t za_seed = 1;
    za->add_option("--graph", za_graph)->required();
    za->add_option("--matching", za_matching)->required();
    za->add_option("--threshold", za_threshold);
    za->add_option("--seed", za_seed);
    za->add_option("-o,--out", za_out);
    za->add_option("--cert", za_cert);

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand("verify", "independent certificate verification");
    std::string vf_kind, vf_artifact, vf_host, vf_out;
    int vf_delta = -1, vf_g = -1, vf_g_target = -1, vf_maxdisp = -1, vf_wordlen = 0,
        vf_require_free = 0, vf_threshold = 0;
    bool vf_perfect = false;
    verify_cmd->add_option("--kind", vf_kind, "subgraph | wsubgraph | perm | matching | orientation")
        ->required();
    verify_cmd->add_option("--artifact", vf_artifact)->required();
    verify_cmd->add_option("--host", vf_host)->required();
    verify_cmd->add_option("--delta", vf_delta);
    verify_cmd->add_option("--g", vf_g);
    verify_cmd->add_option("--g-target", vf_g_target);
    verify_cmd->add_option("--max-disp", vf_maxdisp);
    verify_cmd->add_option("--word-len", vf_wordlen);
    verify_cmd->add_option("--require-free", vf_require_free);
    verify_cmd->add_option("--threshold", vf_threshold);
    verify_cmd->add_flag("--require-perfect", vf_perfect);
    verify_cmd->add_option("-o,--out", vf_out);

    std::vector<std::string> argv(args.begin(), args.end());
    try {
        std::vector<const char*> cargv;
        cargv.push_back("lgs");
        for (const std::string& a : argv) cargv.push_back(a.c_str());
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            if (gen_model == "bipartite-regular") {
                BipartiteGraph g = random_bipartite_regular(gen_n, gen_d, gen_seed);
                write_bipartite(gen_out, g);
                return 0;
            }
            Graph g;
            if (gen_model == "random-regular") g = random_regular(gen_n, gen_d, gen_seed);
            else if (gen_model == "random-regular-multi")
                g = random_regular_multigraph(gen_n, gen_d, gen_seed);
            else if (gen_model == "cycle") g = cycle_graph(gen_n);
            else if (gen_model == "complete") g = complete_graph(gen_n);
            else if (gen_model == "complete-bipartite") g = complete_bipartite(gen_a, gen_b);
            else fail(errc::parameter, "gen", "unknown model " + gen_model);
            write_graph(gen_out, g);
            return 0;
        }

        if (stats->parsed()) {
            Graph g = read_graph(stats_graph);
            nlohmann::json j = base_report("stats", 0);
            j["n"] = g.n();
            j["m"] = g.m();
            j["min_degree"] = g.min_degree();
            j["max_degree"] = g.max_degree();
            j["regular"] = g.regular_degree().has_value();
            j["parallel_edges"] = g.has_parallel_edges();
            std::optional<int> gf = girth(g);
            if (gf) j["girth"] = *gf;
            else j["girth"] = nullptr;
            if (stats_rho) {
                SpectralReport sr = spectral_report(g);
                j["rho"] = sr.rho;
                j["rho_method"] = sr.method;
            }
            if (stats_girth_cap >= 3) {
                CyclesProfile p = count_short_cycles(g, stats_girth_cap);
                j["short_cycles"] = p.cycle_count();
                j["short_cycle_realizations"] = p.total_realizations();
                j["measured_base"] = measured_base(p);
            }
            emit(j, stats_out);
            return 0;
        }

        if (check->parsed()) {
            Graph g = read_graph(check_graph);
            nlohmann::json j = base_report("check", 0);
            j["params"] = {{"g_target", check_g}, {"delta", check_delta}};
            CyclesProfile profile = count_short_cycles(g, check_g);
            auto dr = g.regular_degree();
            int d = dr ? *dr : g.max_degree();
            Rational base(1, 1);
            if (!check_base.empty()) base = parse_ratio(check_base, "base");
            else if (!check_lambda.empty()) {
                Rational lam = parse_ratio(check_lambda, "lambda");
                base = Rational(lam.num * d, lam.den);
            } else if (check_delta > 0) {
                base = Rational(d, 12LL * check_delta);
            } else {
                fail(errc::parameter, "check", "pass --delta, --base or --lambda");
            }
            HypothesisReport hyp = check_hypothesis(profile, base);
            j["hypothesis"] = {{"base", base.to_string()},
                               {"ok", hyp.ok},
                               {"worst_vertex", hyp.worst_vertex},
                               {"worst_k", hyp.worst_k},
                               {"worst_count", hyp.worst_count},
                               {"worst_bound", hyp.worst_bound}};
            if (check_delta > 0) {
                ChoiceInstance inst(g, profile, check_delta);
                lll::ConditionReport cond = lll::check_condition(inst, inst.prob_bounds());
                j["condition"] = {{"ok", cond.ok},
                                  {"slack", cond.slack},
                                  {"worst_event", cond.worst_event},
                                  {"method", cond.method},
                                  {"events", inst.num_events()}};
            }
            emit(j, check_out);
            return 0;
        }

        if (extract_cmd->parsed()) {
            Graph g = read_graph(ex_graph);
            ExtractionParams params;
            params.delta = ex_delta;
            params.g = ex_g;
            params.seed = ex_seed;
            params.algorithm = ex_alg;
            params.override_hypothesis = ex_override;
            params.seq = ex_schedule == "geometric" ? lll::ScheduleConfig::Seq::geometric
                                                    : lll::ScheduleConfig::Seq::triangular;
            ExtractResult res = extract(g, params);
            if (!ex_out.empty()) write_graph(ex_out, res.subgraph);
            nlohmann::json j = base_report("extract", ex_seed);
            j["certificate"] = nlohmann::json::parse(res.cert.to_json());
            j["stats"] = nlohmann::json::parse(res.stats.to_json());
            emit(j, ex_cert);
            return 0;
        }

        if (lip->parsed()) {
            Graph g = read_graph(lip_graph);
            Rational lambda = lambda_for(g, lip_lambda, lip_g);
            LipschitzOptions opts;
            opts.jobs = lip_jobs;
            opts.algorithm = lip_alg;
            LipschitzResult res = lipschitz_extract(g, lambda, lip_delta, lip_g, lip_seed, opts);
            if (!lip_out.empty()) write_witnessed(lip_out, res.h);
            nlohmann::json j = base_report("lipschitz", lip_seed);
            j["lambda"] = lambda.to_string();
            j["certificate"] = nlohmann::json::parse(res.cert.to_json());
            emit(j, lip_cert);
            return 0;
        }

        if (f2->parsed()) {
            Graph g = read_graph(f2_graph);
            Rational lambda = lambda_for(g, f2_lambda, f2_g);
            F2Options opts;
            opts.word_len_cap = f2_wordcap;
            opts.lipschitz.jobs = f2_jobs;
            F2Result res = build_f2(g, lambda, f2_g, f2_seed, opts);
            if (!f2_out.empty()) write_permutation_pair(f2_out, res.perms);
            if (!f2_ws_out.empty()) write_witnessed(f2_ws_out, res.regular4);
            nlohmann::json j = base_report("f2", f2_seed);
            j["lambda"] = lambda.to_string();
            j["certificate"] = nlohmann::json::parse(res.cert.to_json());
            emit(j, f2_cert);
            return 0;
        }

        if (match->parsed()) {
            nlohmann::json j = base_report("match", match_seed);
            if (!match_bip.empty()) {
                BipartiteGraph g = read_bipartite(match_bip);
                MatchStats st;
                Matching m = match_to_completion(g, match_seed, &st);
                if (!match_out.empty()) {
                    std::ofstream out(match_out);
                    if (!out) fail(errc::io, "cli", "cannot write " + match_out);
                    out << format_matching(g, m);
                }
                j["stats"] = nlohmann::json::parse(st.to_json());
                j["perfect"] = m.perfect(g);
            } else if (!match_graph.empty()) {
                Graph g = read_graph(match_graph);
                PerfectMatchingResult res = perfect_matching_even_regular(g, match_seed);
                if (!match_out.empty()) {
                    std::ofstream out(match_out);
                    if (!out) fail(errc::io, "cli", "cannot write " + match_out);
                    out << format_graph_matching(g, res.matching);
                }
                j["attempts"] = res.attempts;
                j["perfect"] = res.matching.perfect(g);
            } else {
                fail(errc::parameter, "match", "pass --bipartite or --graph");
            }
            emit(j, match_stats);
            return 0;
        }

        if (orient->parsed()) {
            Graph g = read_graph(or_graph);
            std::ifstream in(or_matching);
            if (!in) fail(errc::io, "cli", "cannot open " + or_matching);
            std::ostringstream ss;
            ss << in.rdbuf();
            GraphMatching m = parse_graph_matching(g, ss.str());
            OrientationResult res = orient_matching_lll(g, m, or_seed, or_threshold, or_alg);
            if (!or_out.empty()) {
                std::ofstream out(or_out);
                if (!out) fail(errc::io, "cli", "cannot write " + or_out);
                for (size_t i = 0; i < res.matching_edges.size(); ++i) {
                    EdgeEnds e = g.ends(res.matching_edges[i]);
                    int tail = res.edge_forward[i] ? e.u : e.v;
                    int head = res.edge_forward[i] ? e.v : e.u;
                    out << tail << ' ' << head << '\n';
                }
            }
            nlohmann::json j = base_report("orient", or_seed);
            j["threshold"] = res.threshold;
            j["nonmatching_degree"] = res.nonmatching_degree;
            j["stats"] = nlohmann::json::parse(res.stats.to_json());
            emit(j, or_cert);
            return 0;
        }

        if (za->parsed()) {
            Graph g = read_graph(za_graph);
            std::ifstream in(za_matching);
            if (!in) fail(errc::io, "cli", "cannot open " + za_matching);
            std::ostringstream ss;
            ss << in.rdbuf();
            GraphMatching m = parse_graph_matching(g, ss.str());
            ZActionReport res = build_z_action(g, m, za_seed, za_threshold);
            if (!za_out.empty()) {
                std::ofstream out(za_out);
                if (!out) fail(errc::io, "cli", "cannot write " + za_out);
                for (size_t i = 0; i < res.successor.size(); ++i)
                    out << (i ? " " : "") << res.successor[i];
                out << '\n';
            }
            nlohmann::json j = base_report("zaction", za_seed);
            j["threshold"] = res.threshold;
            if (res.rho_converged) j["rho"] = res.rho;
            else j["rho"] = nullptr;
            j["rho_flag_50rho_lt_1"] = res.rho_flag;
            j["expansion_ok"] = res.expansion_ok;
            emit(j, za_cert);
            return 0;
        }

        if (verify_cmd->parsed()) {
            verify::Report report;
            if (vf_kind == "subgraph") {
                Graph host = read_graph(vf_host);
                Graph sub = read_graph(vf_artifact);
                report = verify::subgraph(host, sub, vf_delta < 0 ? 0 : vf_delta,
                                          vf_g < 0 ? 0 : vf_g);
            } else if (vf_kind == "wsubgraph") {
                Graph host = read_graph(vf_host);
                WitnessedSubgraph ws = read_witnessed(vf_artifact);
                report = verify::witnessed(host, ws, vf_delta, vf_g_target);
            } else if (vf_kind == "perm") {
                Graph host = read_graph(vf_host);
                PermutationPair p = read_permutation_pair(vf_artifact);
                report = verify::permutations(host, p, vf_maxdisp < 0 ? host.n() : vf_maxdisp,
                                              vf_wordlen, vf_require_free);
            } else if (vf_kind == "matching") {
                BipartiteGraph host = read_bipartite(vf_host);
                std::ifstream in(vf_artifact);
                if (!in) fail(errc::io, "cli", "cannot open " + vf_artifact);
                std::ostringstream ss;
                ss << in.rdbuf();
                Matching m = parse_matching(host, ss.str());
                report = verify::bip_matching(host, m, vf_perfect);
            } else if (vf_kind == "orientation") {
                Graph host = read_graph(vf_host);
                std::ifstream in(vf_artifact);
                if (!in) fail(errc::io, "cli", "cannot open " + vf_artifact);
                std::vector<std::pair<int, int>> arrows;
                std::string line;
                while (std::getline(in, line)) {
                    size_t pos = line.find_first_not_of(" \t\r");
                    if (pos == std::string::npos || line[pos] == '#') continue;
                    std::istringstream ls(line);
                    int t, h;
                    if (!(ls >> t >> h)) fail(errc::io, "cli", "bad arrow line: " + line);
                    arrows.emplace_back(t, h);
                }
                report = verify::orientation(host, arrows, vf_threshold);
            } else {
                fail(errc::parameter, "verify", "unknown kind " + vf_kind);
            }
            nlohmann::json j = base_report("verify", 0);
            j["kind"] = vf_kind;
            j["report"] = nlohmann::json::parse(report.to_json());
            emit(j, vf_out);
            return report.ok ? 0 : 1;
        }
    } catch (const error& e) {
        nlohmann::json j;
        j["error"] = e.what();
        j["stage"] = e.stage();
        std::cerr << j.dump() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": \"" << e.what() << "\"}\n";
        return 1;
    }
    return 1;
}

} // namespace lgs
