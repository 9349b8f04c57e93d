#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "lgs/error.hpp"
#include "lgs/graph.hpp"
#include "lgs/rng.hpp"

namespace lgs {

namespace {

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n) {
    auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-22) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = at(p, q);
                if (std::abs(apq) < 1e-15) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<size_t>(i)] = at(i, i);
    return eig;
}

// y = P (A/dmax) P x  with P = I - (1/n) J
void apply_operator(const Graph& g, double dmax, const std::vector<double>& x,
                    std::vector<double>& y) {
    int n = g.n();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    std::vector<double> px(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) px[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] - mean;
    std::fill(y.begin(), y.end(), 0.0);
    for (int v = 0; v < n; ++v) {
        double acc = 0.0;
        for (int id : g.incident(v)) acc += px[static_cast<size_t>(g.other(id, v))];
        y[static_cast<size_t>(v)] = acc / dmax;
    }
    mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    for (double& v : y) v -= mean;
}

double norm2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

} // namespace

SpectralReport spectral_report(const Graph& g, bool force_iterative) {
    if (g.n() == 0) fail(errc::parameter, "spectral", "empty graph");
    SpectralReport report;
    int n = g.n();
    double dmax = std::max(1, g.max_degree());

    if (n <= 512 && !force_iterative) {
        // dense eigensolve of P(A/dmax)P
        std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
        for (int id : g.alive_edges()) {
            EdgeEnds e = g.ends(id);
            a[static_cast<size_t>(e.u) * n + e.v] += 1.0 / dmax;
            a[static_cast<size_t>(e.v) * n + e.u] += 1.0 / dmax;
        }
        // project both sides: PAP = A - (1/n)(JA + AJ) + (1/n^2) J A J
        std::vector<double> row(static_cast<size_t>(n), 0.0), col(static_cast<size_t>(n), 0.0);
        double total = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = a[static_cast<size_t>(i) * n + j];
                row[static_cast<size_t>(i)] += v;
                col[static_cast<size_t>(j)] += v;
                total += v;
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a[static_cast<size_t>(i) * n + j] +=
                    -row[static_cast<size_t>(i)] / n - col[static_cast<size_t>(j)] / n +
                    total / (static_cast<double>(n) * n);
        std::vector<double> eig = jacobi_eigenvalues(std::move(a), n);
        double rho = 0.0;
        for (double v : eig) rho = std::max(rho, std::abs(v));
        report.rho = rho;
        report.method = "dense";
        return report;
    }

    // power iteration on M = (P(A/dmax)P)^2; rho = sqrt of dominant eigenvalue
    Rng rng(key_mix(0x9a9a5b5bULL, static_cast<uint64_t>(n)));
    std::vector<double> v(static_cast<size_t>(n)), t(static_cast<size_t>(n)),
        w(static_cast<size_t>(n));
    for (double& x : v) x = rng.next_double() - 0.5;
    double nv = norm2(v);
    for (double& x : v) x /= nv;
    const int cap = 20000;
    double rel = 1.0;
    for (int it = 1; it <= cap; ++it) {
        apply_operator(g, dmax, v, t);
        apply_operator(g, dmax, t, w); // w = M v, |v| = 1
        double theta = 0.0;
        for (int i = 0; i < n; ++i) theta += v[static_cast<size_t>(i)] * w[static_cast<size_t>(i)];
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = w[static_cast<size_t>(i)] - theta * v[static_cast<size_t>(i)];
            res += r * r;
        }
        res = std::sqrt(res);
        rel = res / std::max(std::abs(theta), 1e-30);
        double nw = norm2(w);
        if (nw < 1e-300) { // operator annihilates the vector: rho 0
            report.rho = 0.0;
            report.method = "iterative";
            report.iterations = it;
            return report;
        }
        if (rel <= 1e-8) {
            report.rho = std::sqrt(std::max(0.0, theta));
            report.method = "iterative";
            report.residual = rel;
            report.iterations = it;
            return report;
        }
        for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] / nw;
    }
    report.residual = rel;
    fail(errc::numeric, "spectral",
         "power iteration did not converge, relative residual " + std::to_string(rel));
}

ExpansionReport expansion_check(const Graph& g, const std::vector<int>& side_a,
                                const Rational& ratio, uint64_t seed, int samples) {
    std::vector<char> in_a(static_cast<size_t>(g.n()), 0);
    for (int v : side_a) {
        if (v < 0 || v >= g.n()) fail(errc::parameter, "expansion", "side vertex out of range");
        in_a[static_cast<size_t>(v)] = 1;
    }
    for (int id : g.alive_edges()) {
        EdgeEnds e = g.ends(id);
        if (in_a[static_cast<size_t>(e.u)] == in_a[static_cast<size_t>(e.v)])
            fail(errc::precondition, "expansion", "graph is not bipartite with the given side");
    }
    std::vector<int> side_b;
    for (int v = 0; v < g.n(); ++v)
        if (!in_a[static_cast<size_t>(v)]) side_b.push_back(v);

    ExpansionReport report;
    std::vector<char> seen(static_cast<size_t>(g.n()), 0);
    auto neighborhood_size = [&](const std::vector<int>& s) {
        int count = 0;
        for (int v : s)
            for (int id : g.incident(v)) {
                int w = g.other(id, v);
                if (!seen[static_cast<size_t>(w)]) {
                    seen[static_cast<size_t>(w)] = 1;
                    ++count;
                }
            }
        for (int v : s)
            for (int id : g.incident(v)) seen[static_cast<size_t>(g.other(id, v))] = 0;
        return count;
    };
    auto check_set = [&](const std::vector<int>& s) {
        ++report.sets_checked;
        int ns = neighborhood_size(s);
        if (!Rational::ge_scaled(ns, ratio, static_cast<long long>(s.size()))) {
            report.ok = false;
            report.witness = s;
            return false;
        }
        return true;
    };

    for (const std::vector<int>* side : {&side_a, static_cast<const std::vector<int>*>(&side_b)}) {
        int half = static_cast<int>(side->size()) / 2;
        if (half == 0) continue;
        if (side->size() <= 16) {
            report.exact = true;
            for (uint32_t mask = 1; mask < (1u << side->size()); ++mask) {
                if (static_cast<int>(std::popcount(mask)) > half) continue;
                std::vector<int> s;
                for (size_t i = 0; i < side->size(); ++i)
                    if (mask & (1u << i)) s.push_back((*side)[i]);
                if (!check_set(s)) return report;
            }
        } else {
            report.exact = false;
            for (int v : *side)
                if (!check_set({v})) return report;
            // BFS-ball subsets around a few roots
            Rng rng(key_mix(seed, 0x657870616eULL));
            for (int trial = 0; trial < 32; ++trial) {
                int root = (*side)[rng.next_below(side->size())];
                for (int radius = 2; radius <= 4; radius += 2) {
                    std::vector<int> dist = distances_from(g, root, radius);
                    std::vector<int> s;
                    for (int v : *side)
                        if (dist[static_cast<size_t>(v)] >= 0 &&
                            static_cast<int>(s.size()) < half)
                            s.push_back(v);
                    if (!s.empty() && !check_set(s)) return report;
                }
            }
            // uniform random subsets
            for (int trial = 0; trial < samples; ++trial) {
                int size = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(half)));
                std::vector<int> pool = *side;
                for (int i = 0; i < size; ++i) {
                    size_t j = i + static_cast<size_t>(rng.next_below(pool.size() - i));
                    std::swap(pool[static_cast<size_t>(i)], pool[j]);
                }
                pool.resize(static_cast<size_t>(size));
                if (!check_set(pool)) return report;
            }
        }
    }
    return report;
}

} // namespace lgs
