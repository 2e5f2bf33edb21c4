#include "eval_single.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "common.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace sb {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

void check_embedding(const EmbeddingMatrix& E, int expected_n) {
    if (E.n != expected_n) throw DataError("embedding node count does not match");
    if (E.n == 0 || E.dim == 0) throw DataError("empty embedding");
}

// Row norms squared; a zero row cannot take part in cosine comparisons.
std::vector<double> cosine_norms(const Rows& X) {
    std::vector<double> q(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        q[i] = dot(X[i], X[i]);
        if (q[i] == 0.0) throw DataError("cosine distance undefined for a zero-vector row");
    }
    return q;
}

// Indices of the k nearest rows to row v (self excluded), ties by index.
std::vector<int> nearest_rows(const Rows& X, const std::vector<double>& cosq, int v, int k,
                              Dist dist) {
    int n = static_cast<int>(X.size());
    std::vector<std::pair<double, int>> cand;
    cand.reserve(n - 1);
    for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        double d = dist == Dist::euclidean ? sq_dist(X[v], X[u])
                                           : 1.0 - dot(X[v], X[u]) / std::sqrt(cosq[v] * cosq[u]);
        cand.emplace_back(d, u);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    std::vector<int> out(k);
    for (int i = 0; i < k; ++i) out[i] = cand[i].second;
    return out;
}

int checked_classes(const std::vector<int>& labels, std::size_t n) {
    if (labels.size() != n) throw DataError("label count does not match node count");
    int top = -1;
    for (int c : labels) {
        if (c < 0) throw DataError("negative class label");
        top = std::max(top, c);
    }
    std::set<int> uniq(labels.begin(), labels.end());
    if (uniq.size() < 2) throw DataError("need at least two classes");
    return top + 1;
}

std::vector<int> fit_predict(const Rows& Xtr, const std::vector<int>& ytr, const Rows& Xte,
                             const ExtrinsicOptions& opt) {
    switch (opt.classifier) {
        case Classifier::logreg:
            return linear_predict(logreg_fit(Xtr, ytr, LogRegOptions{opt.logreg_c, false}), Xte);
        case Classifier::logreg_ovr:
            return linear_predict(logreg_fit(Xtr, ytr, LogRegOptions{opt.logreg_c, true}), Xte);
        case Classifier::svm:
            return linear_predict(svm_fit(Xtr, ytr, SvmOptions{opt.svm_c}), Xte);
        case Classifier::knn:
            return knn_classify(Xtr, ytr, Xte,
                                std::min<int>(opt.knn_k, static_cast<int>(Xtr.size())));
    }
    throw ConfigError("unknown classifier");
}

// Out-of-fold predictions for every node; nodes in folds that could not be
// scored (empty test side or single-class training side) stay unpredicted.
struct OofPredictions {
    std::vector<int> pred;
    std::vector<char> have;
    std::vector<int> fold;
    std::vector<std::string> warnings;
};

OofPredictions out_of_fold(const Rows& X, const std::vector<int>& labels,
                           const ExtrinsicOptions& opt) {
    int n = static_cast<int>(X.size());
    OofPredictions out;
    out.pred.assign(n, -1);
    out.have.assign(n, 0);
    out.fold = stratified_folds(labels, opt.folds, opt.seed, &out.warnings);
    for (int f = 0; f < opt.folds; ++f) {
        std::vector<int> tr, te;
        for (int i = 0; i < n; ++i) (out.fold[i] == f ? te : tr).push_back(i);
        if (te.empty()) {
            out.warnings.push_back("fold " + std::to_string(f) + " is empty, skipped");
            continue;
        }
        std::set<int> train_classes;
        for (int i : tr) train_classes.insert(labels[i]);
        if (train_classes.size() < 2) {
            out.warnings.push_back("fold " + std::to_string(f) +
                                   " leaves a single-class training set, skipped");
            continue;
        }
        Rows Xtr, Xte;
        std::vector<int> ytr;
        for (int i : tr) {
            Xtr.push_back(X[i]);
            ytr.push_back(labels[i]);
        }
        for (int i : te) Xte.push_back(X[i]);
        auto pred = fit_predict(Xtr, ytr, Xte, opt);
        for (std::size_t j = 0; j < te.size(); ++j) {
            out.pred[te[j]] = pred[j];
            out.have[te[j]] = 1;
        }
    }
    return out;
}

} // namespace

Summary summarize(const std::vector<double>& values) {
    if (values.empty()) throw DataError("summarize: no values");
    Summary s;
    s.values = values;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    double var = 0;
    for (double v : values) var += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(var / values.size());
    return s;
}

PropertyCorrelation property_correlation(const Graph& g, const EmbeddingMatrix& E, int k,
                                         Dist dist, int jobs) {
    check_embedding(E, g.n);
    if (k < 1) throw ConfigError("property_correlation: k must be >= 1");
    if (g.n < 2) throw DataError("property_correlation: need at least two nodes");
    PropertyCorrelation out;
    if (dist == Dist::cosine && E.dim == 1) {
        out.applicable = false;
        return out;
    }
    std::vector<double> cosq;
    if (dist == Dist::cosine) cosq = cosine_norms(E.rows);
    int k_eff = std::min(k, g.n - 1);
    auto stats = compute_stats(g, jobs);
    std::map<std::string, std::vector<double>> props;
    props["degree"].assign(stats.degree.begin(), stats.degree.end());
    props["pagerank"] = stats.pagerank;
    props["betweenness"] = stats.betweenness;
    props["clustering"] = stats.clustering;
    std::vector<std::vector<int>> nbrs(g.n);
    parallel_for(g.n, jobs,
                 [&](int v) { nbrs[v] = nearest_rows(E.rows, cosq, v, k_eff, dist); });
    for (auto& [name, vals] : props) {
        std::vector<double> nbr_mean(g.n);
        for (int v = 0; v < g.n; ++v) {
            double s = 0;
            for (int u : nbrs[v]) s += vals[u];
            nbr_mean[v] = s / k_eff;
        }
        out.by_property[name] = pearson(vals, nbr_mean);
    }
    return out;
}

Summary degree_rmse(const Graph& g, const EmbeddingMatrix& E, int k, int folds,
                    std::uint64_t seed) {
    check_embedding(E, g.n);
    if (k < 1) throw ConfigError("degree_rmse: k must be >= 1");
    if (folds < 2) throw ConfigError("degree_rmse: need at least two folds");
    if (g.n < folds) throw DataError("degree_rmse: more folds than nodes");
    std::vector<int> perm(g.n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    rng.shuffle(perm);
    std::vector<int> fold(g.n);
    for (int i = 0; i < g.n; ++i) fold[perm[i]] = i % folds;
    std::vector<double> deg(g.n);
    for (int v = 0; v < g.n; ++v) deg[v] = g.degree(v);
    std::vector<double> errs;
    for (int f = 0; f < folds; ++f) {
        // the small side trains, everything else is scored
        Rows Xtr, Xte;
        std::vector<double> ytr, yte;
        for (int v = 0; v < g.n; ++v) {
            if (fold[v] == f) {
                Xtr.push_back(E.rows[v]);
                ytr.push_back(deg[v]);
            } else {
                Xte.push_back(E.rows[v]);
                yte.push_back(deg[v]);
            }
        }
        auto pred = knn_regress(Xtr, ytr, Xte, std::min<int>(k, static_cast<int>(Xtr.size())));
        errs.push_back(rmse(yte, pred));
    }
    return summarize(errs);
}

RankCorrelation equivalence_rank_correlation(const EmbeddingMatrix& E, const Matrix& S,
                                             Dist dist, int jobs) {
    int n = E.n;
    if (n == 0 || E.dim == 0) throw DataError("empty embedding");
    if (static_cast<int>(S.size()) != n) throw DataError("similarity matrix does not match");
    for (auto& row : S)
        if (static_cast<int>(row.size()) != n)
            throw DataError("similarity matrix is not square");
    RankCorrelation out;
    if (dist == Dist::cosine && E.dim == 1) {
        out.applicable = false;
        return out;
    }
    if (n < 3) throw DataError("equivalence_rank_correlation: need at least three nodes");
    std::vector<double> cosq, cosr;
    if (dist == Dist::cosine) {
        cosq = cosine_norms(E.rows);
        cosr.resize(n);
        for (int v = 0; v < n; ++v) cosr[v] = std::sqrt(cosq[v]);
    }
    std::vector<std::optional<double>> taus(n);
    parallel_for(n, jobs, [&](int v) {
        std::vector<double> x, y;
        x.reserve(n - 1);
        y.reserve(n - 1);
        for (int u = 0; u < n; ++u) {
            if (u == v) continue;
            double sim = dist == Dist::euclidean
                             ? -std::sqrt(sq_dist(E.rows[v], E.rows[u]))
                             : dot(E.rows[v], E.rows[u]) / (cosr[v] * cosr[u]);
            x.push_back(sim);
            y.push_back(S[v][u]);
        }
        taus[v] = kendall_tau(x, y);
    });
    std::vector<double> defined;
    for (int v = 0; v < n; ++v)
        if (taus[v])
            defined.push_back(*taus[v]);
        else
            ++out.undefined_nodes;
    out.defined_nodes = static_cast<int>(defined.size());
    if (!defined.empty()) out.tau = summarize(defined);
    return out;
}

ExtrinsicResult extrinsic_eval(const EmbeddingMatrix& E, const std::vector<int>& labels,
                               const ExtrinsicOptions& opt) {
    if (E.n == 0 || E.dim == 0) throw DataError("empty embedding");
    int classes = checked_classes(labels, E.rows.size());
    ExtrinsicResult out;
    out.task = opt.task;
    if (opt.task == Task::cluster) {
        auto km = kmeans(E.rows, classes, opt.kmeans_restarts, opt.seed, opt.jobs);
        out.nmi = nmi(km.labels, labels);
        out.purity = purity(km.labels, labels);
        return out;
    }
    if (opt.folds < 2) throw ConfigError("extrinsic_eval: need at least two folds");
    auto fold = stratified_folds(labels, opt.folds, opt.seed, &out.warnings);
    std::vector<double> accs, f1s;
    for (int f = 0; f < opt.folds; ++f) {
        std::vector<int> tr, te;
        for (std::size_t i = 0; i < labels.size(); ++i)
            (fold[i] == f ? te : tr).push_back(static_cast<int>(i));
        if (te.empty()) {
            out.warnings.push_back("fold " + std::to_string(f) + " is empty, skipped");
            continue;
        }
        std::set<int> train_classes;
        for (int i : tr) train_classes.insert(labels[i]);
        if (train_classes.size() < 2) {
            out.warnings.push_back("fold " + std::to_string(f) +
                                   " leaves a single-class training set, skipped");
            continue;
        }
        Rows Xtr, Xte;
        std::vector<int> ytr, yte;
        for (int i : tr) {
            Xtr.push_back(E.rows[i]);
            ytr.push_back(labels[i]);
        }
        for (int i : te) {
            Xte.push_back(E.rows[i]);
            yte.push_back(labels[i]);
        }
        auto pred = fit_predict(Xtr, ytr, Xte, opt);
        accs.push_back(accuracy(yte, pred));
        f1s.push_back(macro_f1(yte, pred));
    }
    if (accs.empty()) throw DataError("extrinsic_eval: no usable folds");
    out.accuracy = summarize(accs);
    out.macro_f1 = summarize(f1s);
    return out;
}

std::vector<int> label_binning(const std::vector<double>& values, BinScheme scheme) {
    std::size_t n = values.size();
    if (n == 0) throw DataError("label_binning: no values");
    for (double v : values)
        if (!std::isfinite(v)) throw DataError("label_binning: non-finite value");
    if (scheme == BinScheme::quartile) {
        if (n < 4) throw DataError("label_binning: quartile binning needs at least 4 values");
        std::vector<std::pair<double, int>> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = {values[i], static_cast<int>(i)};
        std::sort(order.begin(), order.end());
        std::vector<int> out(n);
        std::size_t base = n / 4, rem = n % 4, pos = 0;
        for (int c = 0; c < 4; ++c) {
            std::size_t take = base + (static_cast<std::size_t>(c) < rem ? 1 : 0);
            for (std::size_t t = 0; t < take; ++t) out[order[pos++].second] = c;
        }
        return out;
    }
    double lo = *std::min_element(values.begin(), values.end());
    if (lo <= 0.0) throw DataError("label_binning: log binning needs positive values");
    std::vector<int> raw(n);
    for (std::size_t i = 0; i < n; ++i)
        raw[i] = static_cast<int>(std::floor(std::log2(values[i] / lo)));
    std::set<int> present(raw.begin(), raw.end());
    if (present.size() < 2) throw DataError("label_binning: all values fall in one bin");
    std::map<int, int> remap;
    for (int b : present) remap[b] = static_cast<int>(remap.size());
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = remap[raw[i]];
    return out;
}

BucketReport bucket_analysis(const Graph& g, const EmbeddingMatrix& E,
                             const std::vector<int>& labels, BucketStat stat,
                             const ExtrinsicOptions& opt) {
    check_embedding(E, g.n);
    checked_classes(labels, E.rows.size());
    if (opt.task != Task::classify) throw ConfigError("bucket_analysis: classification only");
    std::vector<double> s(g.n);
    if (stat == BucketStat::degree) {
        for (int v = 0; v < g.n; ++v) s[v] = g.degree(v);
    } else {
        auto t = triangle_counts(g);
        for (int v = 0; v < g.n; ++v) s[v] = static_cast<double>(t[v]);
    }
    double top = *std::max_element(s.begin(), s.end());
    if (top < 1.0) throw DataError("bucket_analysis: statistic is zero everywhere");
    BucketReport out;
    out.lo = std::cbrt(top);
    out.hi = std::cbrt(top * top);
    auto oof = out_of_fold(E.rows, labels, opt);
    out.warnings = oof.warnings;
    std::vector<int> bucket(g.n);
    for (int v = 0; v < g.n; ++v) bucket[v] = s[v] < out.lo ? 0 : (s[v] < out.hi ? 1 : 2);
    out.buckets.resize(3);
    for (int b = 0; b < 3; ++b) {
        std::vector<int> yt, yp;
        for (int v = 0; v < g.n; ++v) {
            if (bucket[v] != b) continue;
            ++out.buckets[b].count;
            if (oof.have[v]) {
                yt.push_back(labels[v]);
                yp.push_back(oof.pred[v]);
            }
        }
        if (!yt.empty()) {
            out.buckets[b].accuracy = accuracy(yt, yp);
            out.buckets[b].macro_f1 = macro_f1(yt, yp);
        }
    }
    std::vector<int> yt, yp;
    int unpredicted = 0;
    for (int v = 0; v < g.n; ++v) {
        if (!oof.have[v]) {
            ++unpredicted;
            continue;
        }
        yt.push_back(labels[v]);
        yp.push_back(oof.pred[v]);
    }
    if (yt.empty()) throw DataError("bucket_analysis: no node received a prediction");
    if (unpredicted > 0)
        out.warnings.push_back(std::to_string(unpredicted) + " node(s) not scored");
    out.overall_accuracy = accuracy(yt, yp);
    return out;
}

std::vector<MethodRank> rank_methods(const std::vector<RankCell>& cells) {
    if (cells.empty()) throw DataError("rank_methods: no cells");
    std::set<std::string> universe;
    for (auto& cell : cells)
        for (auto& [m, _] : cell.score_by_method) universe.insert(m);
    if (universe.empty()) throw DataError("rank_methods: no methods");
    std::map<std::string, std::vector<double>> ranks;
    std::map<std::string, int> missing;
    for (auto& cell : cells) {
        std::vector<std::pair<std::string, double>> scored;
        for (auto& [m, v] : cell.score_by_method)
            if (v) scored.emplace_back(m, *v);
        for (auto& m : universe)
            if (!cell.score_by_method.count(m) || !cell.score_by_method.at(m)) ++missing[m];
        for (auto& [m, v] : scored) {
            int better = 0;
            for (auto& [m2, v2] : scored)
                if (v2 > v) ++better;
            ranks[m].push_back(1.0 + better);
        }
    }
    std::vector<MethodRank> out;
    for (auto& m : universe) {
        auto it = ranks.find(m);
        if (it == ranks.end()) continue; // never scored anywhere
        MethodRank r;
        r.method = m;
        r.rank = summarize(it->second);
        r.cells_used = static_cast<int>(it->second.size());
        r.cells_missing = missing.count(m) ? missing[m] : 0;
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace sb
