#include "embed.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace sb {

EmbeddingMatrix degree_k_embed(const Graph& g, int k, int d_max_override) {
    if (k < 0) throw ConfigError("degree_k_embed: k must be >= 0");
    if (d_max_override < 0) throw ConfigError("degree_k_embed: bad d_max override");
    EmbeddingMatrix E;
    E.n = g.n;
    if (k == 0) {
        E.dim = 1;
        E.rows.resize(g.n);
        for (int v = 0; v < g.n; ++v) E.rows[v] = {static_cast<double>(g.degree(v))};
        return E;
    }
    int d_max = d_max_override > 0 ? d_max_override : g.max_degree();
    if (g.max_degree() > d_max)
        throw DataError("degree_k_embed: node degree exceeds d_max override");
    E.dim = k * d_max;
    E.rows.assign(g.n, std::vector<double>(E.dim, 0.0));
    for (int v = 0; v < g.n; ++v)
        for (int h = 1; h <= k; ++h)
            for (int u : k_hop_nodes(g, v, h)) {
                int d = g.degree(u); // >= 1, it has a path to v
                E.rows[v][(h - 1) * d_max + (d - 1)] += 1.0;
            }
    return E;
}

EmbeddingMatrix graphwave_embed(const Graph& g, const GraphWaveOptions& opt) {
    if (g.n == 0) throw DataError("graphwave: empty graph");
    if (g.n > opt.node_cap)
        throw ResourceRefused("graphwave: graph has " + std::to_string(g.n) +
                              " nodes, dense cap is " + std::to_string(opt.node_cap));
    if (opt.num_samples < 1 || opt.t_max < 0)
        throw ConfigError("graphwave: bad sampling settings");
    int n = g.n;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (int v = 0; v < n; ++v) {
        L(v, v) = g.degree(v);
        for (int u : g.adj[v]) L(v, u) = -1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    if (es.info() != Eigen::Success) throw DataError("graphwave: eigendecomposition failed");
    const Eigen::VectorXd& lam = es.eigenvalues(); // ascending
    const Eigen::MatrixXd& U = es.eigenvectors();

    std::vector<double> scales = opt.scales;
    if (scales.empty()) {
        double lam_max = lam(n - 1);
        double zero_tol = 1e-9 * std::max(1.0, lam_max);
        double lam2 = 0.0;
        for (int i = 0; i < n; ++i)
            if (lam(i) > zero_tol) {
                lam2 = lam(i);
                break;
            }
        if (lam2 > 0.0) {
            double geo = std::sqrt(lam2 * lam_max);
            scales = {-std::log(0.95) / geo, -std::log(0.85) / geo};
        } else {
            scales = {1.0, 1.0}; // edgeless: the kernel is I at every scale
        }
    }

    int ns = opt.num_samples;
    EmbeddingMatrix E;
    E.n = n;
    E.dim = static_cast<int>(scales.size()) * ns * 2;
    E.rows.assign(n, std::vector<double>(E.dim));
    std::vector<double> ts(ns);
    for (int j = 0; j < ns; ++j)
        ts[j] = ns == 1 ? 0.0 : opt.t_max * j / (ns - 1);

    int off = 0;
    for (double s : scales) {
        Eigen::VectorXd decay = (-s * lam.array()).exp();
        Eigen::MatrixXd psi = U * decay.asDiagonal() * U.transpose();
        parallel_for(n, opt.jobs, [&](int a) {
            for (int j = 0; j < ns; ++j) {
                double re = 0, im = 0;
                for (int m = 0; m < n; ++m) {
                    double x = ts[j] * psi(m, a);
                    re += std::cos(x);
                    im += std::sin(x);
                }
                E.rows[a][off + 2 * j] = re / n;
                E.rows[a][off + 2 * j + 1] = im / n;
            }
        });
        off += 2 * ns;
    }
    return E;
}

namespace {

std::vector<std::vector<double>> xnetmf_features(const Graph& g, const XnetmfOptions& opt) {
    int d_max = opt.d_max_override > 0 ? opt.d_max_override : g.max_degree();
    if (g.max_degree() > d_max) throw DataError("xnetmf: node degree exceeds d_max override");
    int nbins = d_max > 0 ? static_cast<int>(std::floor(std::log2(d_max))) + 1 : 0;
    std::vector<std::vector<double>> f(g.n, std::vector<double>(nbins, 0.0));
    for (int v = 0; v < g.n; ++v) {
        double w = 1.0;
        for (int h = 1; h <= opt.max_hop; ++h) {
            for (int u : k_hop_nodes(g, v, h)) {
                int b = static_cast<int>(std::floor(std::log2(g.degree(u))));
                f[v][b] += w;
            }
            w *= opt.discount;
        }
    }
    return f;
}

} // namespace

EmbeddingMatrix xnetmf_embed(const Graph& g, const XnetmfOptions& opt) {
    if (g.n == 0) throw DataError("xnetmf: empty graph");
    if (opt.max_hop < 1 || opt.dim < 1 || opt.gamma <= 0)
        throw ConfigError("xnetmf: bad options");
    int n = g.n;
    auto f = xnetmf_features(g, opt);

    int p = n;
    if (n > 1) {
        long long want = std::llround(10.0 * std::log2(static_cast<double>(n)));
        p = static_cast<int>(std::clamp<long long>(want, 1, n));
    }
    Rng rng(opt.seed);
    auto landmarks = rng.sample_without_replacement(n, p);
    std::sort(landmarks.begin(), landmarks.end());

    Eigen::MatrixXd C(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) {
            double d2 = 0;
            const auto& a = f[i];
            const auto& b = f[landmarks[j]];
            for (std::size_t t = 0; t < a.size(); ++t) {
                double diff = a[t] - b[t];
                d2 += diff * diff;
            }
            C(i, j) = std::exp(-opt.gamma * d2);
        }
    Eigen::MatrixXd W(p, p);
    for (int i = 0; i < p; ++i) W.row(i) = C.row(landmarks[i]);

    // pseudoinverse factor: W = V diag(lam) V^T, keep the well-conditioned
    // part, embed with C V diag(1/sqrt(lam))
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
    if (es.info() != Eigen::Success) throw DataError("xnetmf: factorization failed");
    double lam_top = es.eigenvalues().cwiseAbs().maxCoeff();
    std::vector<int> keep;
    for (int i = 0; i < p; ++i)
        if (es.eigenvalues()(i) > 1e-12 * lam_top) keep.push_back(i);
    if (keep.empty()) throw DataError("xnetmf: similarity matrix is numerically zero");
    // ascending eigenvalue order = descending pseudoinverse singular values
    int d = std::min<int>(static_cast<int>(keep.size()), opt.dim);
    Eigen::MatrixXd fac(p, d);
    for (int c = 0; c < d; ++c) {
        int i = keep[c];
        fac.col(c) = es.eigenvectors().col(i) / std::sqrt(es.eigenvalues()(i));
    }
    Eigen::MatrixXd Y = C * fac;

    EmbeddingMatrix E;
    E.n = n;
    E.dim = d;
    E.rows.assign(n, std::vector<double>(d));
    for (int i = 0; i < n; ++i) {
        double norm = Y.row(i).norm();
        for (int c = 0; c < d; ++c) E.rows[i][c] = norm > 0 ? Y(i, c) / norm : Y(i, c);
    }
    return E;
}

void export_embeddings(const EmbeddingMatrix& E, const std::vector<std::string>& id_of_node,
                       const std::string& path) {
    if (static_cast<int>(id_of_node.size()) != E.n)
        throw DataError("export_embeddings: id map size mismatch");
    std::ofstream out(path);
    if (!out) throw DataError("export_embeddings: cannot write " + path);
    out << E.n << ' ' << E.dim << '\n';
    out.precision(17);
    for (int v = 0; v < E.n; ++v) {
        out << id_of_node[v];
        for (double x : E.rows[v]) out << ' ' << x;
        out << '\n';
    }
    if (!out) throw DataError("export_embeddings: write failed on " + path);
}

EmbeddingMatrix ingest_embeddings(const std::string& path,
                                  const std::unordered_map<std::string, int>& node_of_id) {
    std::ifstream in(path);
    if (!in) throw DataError("ingest_embeddings: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    long long file_n;
    int dim;
    {
        std::istringstream hs(line);
        std::string extra;
        if (!(hs >> file_n >> dim) || (hs >> extra))
            throw DataError(path + ":1: bad header, expected \"n dim\"");
        if (file_n < 0 || dim < 1) throw DataError(path + ":1: bad header values");
    }
    EmbeddingMatrix E;
    E.n = static_cast<int>(node_of_id.size());
    E.dim = dim;
    E.rows.assign(E.n, {});
    int line_no = 1, seen = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string id;
        if (!(ls >> id)) continue; // blank line
        auto it = node_of_id.find(id);
        if (it == node_of_id.end())
            throw DataError(path + ":" + std::to_string(line_no) + ": unknown node id \"" + id +
                            "\"");
        if (!E.rows[it->second].empty())
            throw DataError(path + ":" + std::to_string(line_no) + ": duplicate node id \"" + id +
                            "\"");
        std::vector<double> row(dim);
        for (int c = 0; c < dim; ++c) {
            std::string tok;
            if (!(ls >> tok))
                throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                                std::to_string(dim) + " values");
            std::size_t used = 0;
            try {
                row[c] = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size())
                throw DataError(path + ":" + std::to_string(line_no) + ": bad number \"" + tok +
                                "\"");
            if (!std::isfinite(row[c]))
                throw DataError(path + ":" + std::to_string(line_no) + ": non-finite value");
        }
        std::string extra;
        if (ls >> extra)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(dim) + " values, got more");
        E.rows[it->second] = std::move(row);
        ++seen;
    }
    if (seen < E.n) {
        std::string missing;
        int shown = 0, total = 0;
        for (auto& [id, v] : node_of_id)
            if (E.rows[v].empty()) {
                ++total;
                if (shown < 5) {
                    missing += (shown ? ", " : "") + id;
                    ++shown;
                }
            }
        throw DataError(path + ": missing " + std::to_string(total) +
                        " node(s), e.g. " + missing);
    }
    return E;
}

} // namespace sb
