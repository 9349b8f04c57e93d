#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lgs/cli_app.hpp"
#include "lgs/graph.hpp"
#include "lgs/rng.hpp"

using namespace lgs;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path dir;
    TempDir() {
        static uint64_t counter = 0;
        dir = fs::temp_directory_path() /
              ("lgs_cli_test_" + std::to_string(mix64(0xfeedULL + counter++)));
        fs::create_directories(dir);
    }
    ~TempDir() { fs::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

} // namespace

TEST_CASE("gen writes graphs and rejects infeasible parameters") {
    TempDir tmp;
    std::string out = tmp / "c5.txt";
    CHECK(run_cli({"gen", "--model", "cycle", "--n", "5", "-o", out}) == 0);
    Graph g = read_graph(out);
    CHECK(g.n() == 5);
    CHECK(g.m() == 5);

    std::string rr = tmp / "rr.txt";
    CHECK(run_cli({"gen", "--model", "random-regular", "--n", "100", "--d", "8", "--seed", "1",
                   "-o", rr}) == 0);
    std::string header = slurp(rr).substr(0, 9);
    CHECK(header.find("100 400") == 0); // m = n d / 2

    CHECK(run_cli({"gen", "--model", "random-regular", "--n", "5", "--d", "61", "-o",
                   tmp / "bad.txt"}) == 2);
}

TEST_CASE("extract and verify round trip, tampering detected") {
    TempDir tmp;
    std::string host = tmp / "host.txt";
    std::string sub = tmp / "sub.txt";
    std::string cert = tmp / "cert.json";
    // petersen-style: a high-girth small instance via explicit gen
    REQUIRE(run_cli({"gen", "--model", "random-regular", "--n", "60", "--d", "14", "--seed", "4",
                     "-o", host}) == 0);
    int rc = run_cli({"extract", "--graph", host, "--delta", "1", "--g", "4", "--seed", "2",
                      "--override", "-o", sub, "--cert", cert});
    REQUIRE(rc == 0);
    CHECK(slurp(cert).find("\"girth_found\"") != std::string::npos);

    CHECK(run_cli({"verify", "--kind", "subgraph", "--artifact", sub, "--host", host, "--delta",
                   "1", "--g", "4"}) == 0);

    // tamper: rewrite one edge endpoint to break the subset property
    std::string text = slurp(sub);
    size_t nl = text.find('\n');
    std::istringstream header(text.substr(0, nl));
    int n, m;
    header >> n >> m;
    std::string body = text.substr(nl + 1);
    size_t second_nl = body.find('\n');
    std::string tampered = text.substr(0, nl + 1) + "0 1\n" + body.substr(second_nl + 1);
    spit(sub, tampered);
    int verdict = run_cli({"verify", "--kind", "subgraph", "--artifact", sub, "--host", host,
                           "--delta", "1", "--g", "4"});
    // either the edit broke a certified property (exit 1) or it happened to
    // name a real host edge; re-check the properties directly in that case
    if (verdict == 0) {
        Graph h = read_graph(host);
        Graph s = read_graph(sub);
        CHECK(s.min_degree() >= 1);
        auto gf = girth(s);
        CHECK((!gf || *gf >= 4));
    } else {
        CHECK(verdict == 1);
    }
}

TEST_CASE("lipschitz artifact verifies; corrupted witnesses are rejected") {
    TempDir tmp;
    std::string host = tmp / "host.txt";
    std::string ws = tmp / "ws.txt";
    REQUIRE(run_cli({"gen", "--model", "random-regular", "--n", "120", "--d", "10", "--seed", "6",
                     "-o", host}) == 0);
    REQUIRE(run_cli({"lipschitz", "--graph", host, "--delta", "3", "--g-target", "4", "--seed",
                     "9", "-o", ws}) == 0);
    CHECK(run_cli({"verify", "--kind", "wsubgraph", "--artifact", ws, "--host", host, "--delta",
                   "3", "--g-target", "4"}) == 0);

    // shorten one witness inconsistently: drop an interior vertex
    std::string text = slurp(ws);
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    std::getline(in, line);
    out << line << '\n';
    bool corrupted = false;
    while (std::getline(in, line)) {
        if (!corrupted) {
            std::istringstream ls(line);
            int u, v, k;
            ls >> u >> v >> k;
            if (k >= 2) {
                std::vector<int> walk(static_cast<size_t>(k) + 1);
                for (int i = 0; i <= k; ++i) ls >> walk[static_cast<size_t>(i)];
                out << u << ' ' << v << ' ' << (k - 1);
                for (int i = 0; i <= k; ++i)
                    if (i != 1) out << ' ' << walk[static_cast<size_t>(i)];
                out << '\n';
                corrupted = true;
                continue;
            }
        }
        out << line << '\n';
    }
    REQUIRE(corrupted);
    spit(ws, out.str());
    CHECK(run_cli({"verify", "--kind", "wsubgraph", "--artifact", ws, "--host", host, "--delta",
                   "3", "--g-target", "4"}) != 0);
}

TEST_CASE("permutation verification flags repeated images") {
    TempDir tmp;
    std::string host = tmp / "host.txt";
    std::string perm = tmp / "perm.txt";
    REQUIRE(run_cli({"gen", "--model", "cycle", "--n", "8", "-o", host}) == 0);
    spit(perm, "1 2 3 4 5 6 7 0\n2 3 4 5 6 7 0 1\n");
    CHECK(run_cli({"verify", "--kind", "perm", "--artifact", perm, "--host", host, "--max-disp",
                   "2"}) == 0);
    spit(perm, "1 2 3 4 5 6 7 1\n2 3 4 5 6 7 0 1\n"); // repeated image
    CHECK(run_cli({"verify", "--kind", "perm", "--artifact", perm, "--host", host, "--max-disp",
                   "2"}) == 1);
}

TEST_CASE("bipartite match subcommand") {
    TempDir tmp;
    std::string bip = tmp / "bip.txt";
    std::string mat = tmp / "matching.txt";
    REQUIRE(run_cli({"gen", "--model", "bipartite-regular", "--n", "50", "--d", "6", "--seed",
                     "3", "-o", bip}) == 0);
    REQUIRE(run_cli({"match", "--bipartite", bip, "--seed", "5", "-o", mat}) == 0);
    CHECK(run_cli({"verify", "--kind", "matching", "--artifact", mat, "--host", bip,
                   "--require-perfect"}) == 0);

    // drop one pair: still a valid matching, no longer perfect
    std::string text = slurp(mat);
    spit(mat, text.substr(text.find('\n') + 1));
    CHECK(run_cli({"verify", "--kind", "matching", "--artifact", mat, "--host", bip}) == 0);
    CHECK(run_cli({"verify", "--kind", "matching", "--artifact", mat, "--host", bip,
                   "--require-perfect"}) == 1);
}

TEST_CASE("orientation pipeline through the cli") {
    TempDir tmp;
    std::string host = tmp / "host.txt";
    std::string mat = tmp / "matching.txt";
    std::string arrows = tmp / "orient.txt";
    REQUIRE(run_cli({"gen", "--model", "random-regular", "--n", "120", "--d", "32", "--seed",
                     "8", "-o", host}) == 0);
    REQUIRE(run_cli({"match", "--graph", host, "--seed", "2", "-o", mat}) == 0);
    REQUIRE(run_cli({"orient", "--graph", host, "--matching", mat, "--seed", "4", "--threshold",
                     "8", "-o", arrows}) == 0);
    CHECK(run_cli({"verify", "--kind", "orientation", "--artifact", arrows, "--host", host,
                   "--threshold", "8"}) == 0);

    // flipping one arrow to a non-edge must be caught
    std::string text = slurp(arrows);
    size_t nl = text.find('\n');
    std::istringstream first(text.substr(0, nl));
    int t, h;
    first >> t >> h;
    Graph g = read_graph(host);
    int bad = -1;
    for (int w = 0; w < g.n(); ++w)
        if (w != t && !g.adjacent(t, w)) {
            bad = w;
            break;
        }
    REQUIRE(bad >= 0);
    spit(arrows, std::to_string(t) + " " + std::to_string(bad) + "\n" + text.substr(nl + 1));
    CHECK(run_cli({"verify", "--kind", "orientation", "--artifact", arrows, "--host", host,
                   "--threshold", "8"}) == 1);
}

TEST_CASE("stats reports the documented fields") {
    TempDir tmp;
    std::string host = tmp / "host.txt";
    std::string rep = tmp / "stats.json";
    REQUIRE(run_cli({"gen", "--model", "complete", "--n", "6", "-o", host}) == 0);
    REQUIRE(run_cli({"stats", "--graph", host, "--rho", "--count-cycles-below", "5", "-o",
                     rep}) == 0);
    std::string text = slurp(rep);
    for (const char* key : {"\"n\"", "\"m\"", "\"girth\"", "\"rho\"", "\"tool_version\"",
                            "\"short_cycles\""})
        CHECK(text.find(key) != std::string::npos);
}

TEST_CASE("single-line fuzz: mutations are caught or provably benign") {
    TempDir tmp;
    std::string host = tmp / "host.txt";
    std::string sub = tmp / "sub.txt";
    REQUIRE(run_cli({"gen", "--model", "random-regular", "--n", "40", "--d", "12", "--seed",
                     "11", "-o", host}) == 0);
    REQUIRE(run_cli({"extract", "--graph", host, "--delta", "2", "--g", "4", "--seed", "3",
                     "--override", "-o", sub}) == 0);
    std::string original = slurp(sub);
    Rng rng(424242);
    int caught = 0, benign = 0;
    for (int trial = 0; trial < 20; ++trial) {
        // mutate one random digit
        std::string mutated = original;
        std::vector<size_t> digit_positions;
        for (size_t i = 0; i < mutated.size(); ++i)
            if (isdigit(static_cast<unsigned char>(mutated[i]))) digit_positions.push_back(i);
        size_t pos = digit_positions[static_cast<size_t>(rng.next_below(digit_positions.size()))];
        char replacement = static_cast<char>('0' + rng.next_below(10));
        if (mutated[pos] == replacement) continue;
        mutated[pos] = replacement;
        spit(sub, mutated);
        int rc = run_cli({"verify", "--kind", "subgraph", "--artifact", sub, "--host", host,
                          "--delta", "2", "--g", "4"});
        if (rc == 0) {
            // benign only if the mutated file still satisfies every property
            Graph h = read_graph(host);
            Graph s = read_graph(sub);
            CHECK(s.n() == h.n());
            CHECK(s.min_degree() >= 2);
            auto gf = girth(s);
            CHECK((!gf || *gf >= 4));
            ++benign;
        } else {
            ++caught;
        }
    }
    CHECK(caught + benign > 0);
    CHECK(caught > 0); // at least some mutations must be detected
}
