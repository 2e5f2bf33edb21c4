#include "stats.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace sb {

std::vector<double> pagerank(const Graph& g, const PageRankOptions& opt) {
    int n = g.n;
    if (n == 0) return {};
    const double d = opt.damping;
    std::vector<double> x(n, 1.0 / n), next(n);
    for (int it = 0; it < opt.max_iters; ++it) {
        double dangling = 0.0;
        for (int v = 0; v < n; ++v)
            if (g.degree(v) == 0) dangling += x[v];
        double base = (1.0 - d) / n + d * dangling / n;
        std::fill(next.begin(), next.end(), base);
        for (int v = 0; v < n; ++v) {
            if (g.degree(v) == 0) continue;
            double share = d * x[v] / g.degree(v);
            for (int u : g.adj[v]) next[u] += share;
        }
        double resid = 0.0;
        for (int v = 0; v < n; ++v) resid += std::abs(next[v] - x[v]);
        x.swap(next);
        if (resid < opt.tol) break;
    }
    return x;
}

namespace {

// single-source Brandes dependency accumulation
void brandes_source(const Graph& g, int s, std::vector<double>& acc,
                    std::vector<int>& order, std::vector<int>& dist,
                    std::vector<double>& sigma, std::vector<double>& delta) {
    int n = g.n;
    order.clear();
    dist.assign(n, -1);
    sigma.assign(n, 0.0);
    delta.assign(n, 0.0);
    dist[s] = 0;
    sigma[s] = 1.0;
    std::vector<int> q{s};
    for (size_t head = 0; head < q.size(); ++head) {
        int v = q[head];
        order.push_back(v);
        for (int w : g.adj[v]) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
            if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int w = *it;
        for (int v : g.adj[w])
            if (dist[v] == dist[w] - 1)
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        if (w != s) acc[w] += delta[w];
    }
}

} // namespace

std::vector<double> betweenness(const Graph& g, int jobs) {
    int n = g.n;
    std::vector<double> bc(n, 0.0);
    jobs = resolve_jobs(jobs);
    const int block = 64;
    std::vector<std::vector<double>> partial;
    for (int lo = 0; lo < n; lo += block) {
        int hi = std::min(n, lo + block);
        partial.assign(hi - lo, {});
        parallel_for(hi - lo, jobs, [&](int i) {
            std::vector<double> acc(n, 0.0);
            std::vector<int> order, dist;
            std::vector<double> sigma, delta;
            brandes_source(g, lo + i, acc, order, dist, sigma, delta);
            partial[i] = std::move(acc);
        });
        for (int i = 0; i < hi - lo; ++i)
            for (int v = 0; v < n; ++v) bc[v] += partial[i][v];
    }
    // each unordered pair was counted from both endpoints
    for (double& b : bc) b /= 2.0;
    return bc;
}

std::vector<long long> triangle_counts(const Graph& g) {
    std::vector<long long> tri(g.n, 0);
    for (auto [u, v] : g.edges) {
        const auto& a = g.adj[u];
        const auto& b = g.adj[v];
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) {
                ++tri[a[i]];
                ++tri[u];
                ++tri[v];
                ++i;
                ++j;
            } else if (a[i] < b[j]) {
                ++i;
            } else {
                ++j;
            }
        }
    }
    // every triangle got counted once per incident edge, i.e. 3x per corner
    for (auto& t : tri) t /= 3;
    return tri;
}

std::vector<double> clustering_coefficients(const Graph& g) {
    auto tri = triangle_counts(g);
    std::vector<double> cc(g.n, 0.0);
    for (int v = 0; v < g.n; ++v) {
        long long d = g.degree(v);
        if (d >= 2) cc[v] = 2.0 * tri[v] / (d * (d - 1.0));
    }
    return cc;
}

NodeStats compute_stats(const Graph& g, int jobs) {
    NodeStats s;
    s.degree.resize(g.n);
    for (int v = 0; v < g.n; ++v) s.degree[v] = g.degree(v);
    s.pagerank = pagerank(g);
    s.betweenness = betweenness(g, jobs);
    s.triangles = triangle_counts(g);
    s.clustering.resize(g.n, 0.0);
    for (int v = 0; v < g.n; ++v) {
        long long d = s.degree[v];
        if (d >= 2) s.clustering[v] = 2.0 * s.triangles[v] / (d * (d - 1.0));
    }
    return s;
}

} // namespace sb
