#include "mlkit.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include "common.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace sb {

namespace {

void check_matrix(const Rows& X, const char* who) {
    if (X.empty()) throw DataError(std::string(who) + ": empty data");
    std::size_t d = X[0].size();
    if (d == 0) throw DataError(std::string(who) + ": zero-dimensional data");
    for (auto& row : X) {
        if (row.size() != d) throw DataError(std::string(who) + ": ragged rows");
        for (double v : row)
            if (!std::isfinite(v)) throw DataError(std::string(who) + ": non-finite feature");
    }
}

int class_count(const std::vector<int>& y, const char* who) {
    int k = 0;
    for (int c : y) {
        if (c < 0) throw DataError(std::string(who) + ": negative class id");
        k = std::max(k, c + 1);
    }
    return k;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Limited-memory BFGS with Armijo backtracking. fg fills the gradient and
// returns the objective.
void lbfgs(std::vector<double>& th,
           const std::function<double(const std::vector<double>&, std::vector<double>&)>& fg,
           double tol, int cap) {
    std::size_t n = th.size();
    const std::size_t hist = 10;
    std::deque<std::vector<double>> S, Y;
    std::deque<double> rho;
    std::vector<double> g(n), gnew(n), p(n), thnew(n);
    double f = fg(th, g);
    for (int iter = 0; iter < cap; ++iter) {
        double gnorm = std::sqrt(dot(g, g));
        if (gnorm < tol) return;
        for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
        if (!S.empty()) {
            std::vector<double> alpha(S.size());
            for (int h = static_cast<int>(S.size()) - 1; h >= 0; --h) {
                alpha[h] = rho[h] * dot(S[h], p);
                for (std::size_t i = 0; i < n; ++i) p[i] -= alpha[h] * Y[h][i];
            }
            double scale = dot(S.back(), Y.back()) / dot(Y.back(), Y.back());
            for (std::size_t i = 0; i < n; ++i) p[i] *= scale;
            for (std::size_t h = 0; h < S.size(); ++h) {
                double beta = rho[h] * dot(Y[h], p);
                for (std::size_t i = 0; i < n; ++i) p[i] += (alpha[h] - beta) * S[h][i];
            }
        }
        double slope = dot(g, p);
        if (slope >= 0) { // fall back to steepest descent
            S.clear();
            Y.clear();
            rho.clear();
            for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
            slope = -gnorm * gnorm;
        }
        double step = 1.0, fnew = f;
        bool ok = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < n; ++i) thnew[i] = th[i] + step * p[i];
            fnew = fg(thnew, gnew);
            if (fnew <= f + 1e-4 * step * slope) {
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) return; // no descent possible at machine precision
        std::vector<double> s(n), yv(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = thnew[i] - th[i];
            yv[i] = gnew[i] - g[i];
        }
        double sy = dot(s, yv);
        if (sy > 1e-12) {
            S.push_back(std::move(s));
            Y.push_back(std::move(yv));
            rho.push_back(1.0 / sy);
            if (S.size() > hist) {
                S.pop_front();
                Y.pop_front();
                rho.pop_front();
            }
        }
        th.swap(thnew);
        f = fnew;
        g.swap(gnew);
    }
}

} // namespace

LinearModel logreg_fit(const Rows& X, const std::vector<int>& y, const LogRegOptions& opt) {
    check_matrix(X, "logreg");
    if (y.size() != X.size()) throw DataError("logreg: label count mismatch");
    if (opt.C <= 0) throw ConfigError("logreg: C must be positive");
    int m = static_cast<int>(X.size());
    int d = static_cast<int>(X[0].size());
    int K = class_count(y, "logreg");
    if (K < 2) throw DataError("logreg: need at least two classes");
    if (m < K) throw DataError("logreg: fewer samples than classes");
    double invC = 1.0 / opt.C;

    LinearModel model;
    model.classes = K;
    model.dim = d;
    model.ovr = opt.ovr;
    model.W.assign(K, std::vector<double>(d + 1, 0.0));

    if (!opt.ovr) {
        std::vector<double> th(static_cast<std::size_t>(K) * (d + 1), 0.0);
        auto fg = [&](const std::vector<double>& t, std::vector<double>& grad) {
            std::fill(grad.begin(), grad.end(), 0.0);
            double f = 0;
            std::vector<double> z(K);
            for (int i = 0; i < m; ++i) {
                for (int k = 0; k < K; ++k) {
                    const double* w = &t[static_cast<std::size_t>(k) * (d + 1)];
                    double s = w[d];
                    for (int j = 0; j < d; ++j) s += w[j] * X[i][j];
                    z[k] = s;
                }
                double zmax = *std::max_element(z.begin(), z.end());
                double sum = 0;
                for (int k = 0; k < K; ++k) sum += std::exp(z[k] - zmax);
                f -= z[y[i]] - zmax - std::log(sum);
                for (int k = 0; k < K; ++k) {
                    double pk = std::exp(z[k] - zmax) / sum - (y[i] == k ? 1.0 : 0.0);
                    double* gk = &grad[static_cast<std::size_t>(k) * (d + 1)];
                    for (int j = 0; j < d; ++j) gk[j] += pk * X[i][j];
                    gk[d] += pk;
                }
            }
            for (int k = 0; k < K; ++k) {
                const double* w = &t[static_cast<std::size_t>(k) * (d + 1)];
                double* gk = &grad[static_cast<std::size_t>(k) * (d + 1)];
                for (int j = 0; j < d; ++j) { // bias stays unpenalized
                    f += 0.5 * invC * w[j] * w[j];
                    gk[j] += invC * w[j];
                }
            }
            return f;
        };
        lbfgs(th, fg, opt.grad_tol, opt.max_iters);
        for (int k = 0; k < K; ++k)
            for (int j = 0; j <= d; ++j)
                model.W[k][j] = th[static_cast<std::size_t>(k) * (d + 1) + j];
    } else {
        for (int k = 0; k < K; ++k) {
            std::vector<double> th(d + 1, 0.0);
            auto fg = [&](const std::vector<double>& t, std::vector<double>& grad) {
                std::fill(grad.begin(), grad.end(), 0.0);
                double f = 0;
                for (int i = 0; i < m; ++i) {
                    double s = t[d];
                    for (int j = 0; j < d; ++j) s += t[j] * X[i][j];
                    double sign = y[i] == k ? 1.0 : -1.0;
                    double margin = sign * s;
                    // log(1 + e^-margin), stable on both sides
                    f += margin > 0 ? std::log1p(std::exp(-margin))
                                    : -margin + std::log1p(std::exp(margin));
                    double coef = -sign / (1.0 + std::exp(margin));
                    for (int j = 0; j < d; ++j) grad[j] += coef * X[i][j];
                    grad[d] += coef;
                }
                for (int j = 0; j < d; ++j) {
                    f += 0.5 * invC * t[j] * t[j];
                    grad[j] += invC * t[j];
                }
                return f;
            };
            lbfgs(th, fg, opt.grad_tol, opt.max_iters);
            model.W[k] = th;
        }
    }
    return model;
}

namespace {

// Shared dual coordinate descent core; rows are (feature index, value) pairs.
LinearModel svm_core(const SparseRows& X, int d, const std::vector<int>& y,
                     const SvmOptions& opt) {
    if (y.size() != X.size()) throw DataError("svm: label count mismatch");
    if (opt.C <= 0) throw ConfigError("svm: C must be positive");
    int m = static_cast<int>(X.size());
    int K = class_count(y, "svm");
    if (K < 2) throw DataError("svm: need at least two classes");
    if (m < K) throw DataError("svm: fewer samples than classes");

    std::vector<double> qii(m);
    for (int i = 0; i < m; ++i) {
        double s = 1.0; // constant-1 bias feature
        for (auto& [j, v] : X[i]) s += v * v;
        qii[i] = s;
    }

    LinearModel model;
    model.classes = K;
    model.dim = d;
    model.ovr = true;
    model.W.assign(K, std::vector<double>(d + 1, 0.0));
    for (int k = 0; k < K; ++k) {
        auto& w = model.W[k];
        std::vector<double> alpha(m, 0.0);
        for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
            double worst = 0;
            for (int i = 0; i < m; ++i) {
                double t = y[i] == k ? 1.0 : -1.0;
                double marg = w[d];
                for (auto& [j, v] : X[i]) marg += w[j] * v;
                double grad = t * marg - 1.0;
                double pg = grad;
                if (alpha[i] <= 0.0 && grad > 0)
                    pg = 0;
                else if (alpha[i] >= opt.C && grad < 0)
                    pg = 0;
                worst = std::max(worst, std::fabs(pg));
                if (pg != 0.0) {
                    double a = std::clamp(alpha[i] - grad / qii[i], 0.0, opt.C);
                    double delta = (a - alpha[i]) * t;
                    alpha[i] = a;
                    for (auto& [j, v] : X[i]) w[j] += delta * v;
                    w[d] += delta;
                }
            }
            if (worst < opt.tol) break;
        }
    }
    return model;
}

void check_sparse(const SparseRows& X, int dim, const char* who) {
    if (X.empty()) throw DataError(std::string(who) + ": empty data");
    if (dim < 1) throw ConfigError(std::string(who) + ": dimension must be >= 1");
    for (auto& row : X) {
        int prev = -1;
        for (auto& [j, v] : row) {
            if (j <= prev || j >= dim)
                throw DataError(std::string(who) + ": feature indices must be increasing and in range");
            prev = j;
            if (!std::isfinite(v)) throw DataError(std::string(who) + ": non-finite value");
        }
    }
}

} // namespace

LinearModel svm_fit(const Rows& X, const std::vector<int>& y, const SvmOptions& opt) {
    check_matrix(X, "svm");
    int d = static_cast<int>(X[0].size());
    SparseRows sx(X.size());
    for (std::size_t i = 0; i < X.size(); ++i)
        for (int j = 0; j < d; ++j)
            if (X[i][j] != 0.0) sx[i].emplace_back(j, X[i][j]);
    return svm_core(sx, d, y, opt);
}

LinearModel svm_fit_sparse(const SparseRows& X, int dim, const std::vector<int>& y,
                           const SvmOptions& opt) {
    check_sparse(X, dim, "svm");
    return svm_core(X, dim, y, opt);
}

Rows linear_scores(const LinearModel& mo, const Rows& X) {
    check_matrix(X, "linear_scores");
    if (static_cast<int>(X[0].size()) != mo.dim)
        throw DataError("linear_scores: feature dimension mismatch");
    Rows out(X.size(), std::vector<double>(mo.classes));
    for (std::size_t i = 0; i < X.size(); ++i) {
        for (int k = 0; k < mo.classes; ++k) {
            double s = mo.W[k][mo.dim];
            for (int j = 0; j < mo.dim; ++j) s += mo.W[k][j] * X[i][j];
            out[i][k] = s;
        }
        if (!mo.ovr) { // softmax probabilities
            double zmax = *std::max_element(out[i].begin(), out[i].end());
            double sum = 0;
            for (double& v : out[i]) {
                v = std::exp(v - zmax);
                sum += v;
            }
            for (double& v : out[i]) v /= sum;
        }
    }
    return out;
}

std::vector<int> linear_predict(const LinearModel& mo, const Rows& X) {
    auto scores = linear_scores(mo, X);
    std::vector<int> out(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        int best = 0;
        for (int k = 1; k < mo.classes; ++k)
            if (scores[i][k] > scores[i][best]) best = k;
        out[i] = best;
    }
    return out;
}

Rows linear_scores_sparse(const LinearModel& mo, const SparseRows& X) {
    check_sparse(X, mo.dim, "linear_scores");
    Rows out(X.size(), std::vector<double>(mo.classes));
    for (std::size_t i = 0; i < X.size(); ++i) {
        for (int k = 0; k < mo.classes; ++k) {
            double s = mo.W[k][mo.dim];
            for (auto& [j, v] : X[i]) s += mo.W[k][j] * v;
            out[i][k] = s;
        }
        if (!mo.ovr) {
            double zmax = *std::max_element(out[i].begin(), out[i].end());
            double sum = 0;
            for (double& v : out[i]) {
                v = std::exp(v - zmax);
                sum += v;
            }
            for (double& v : out[i]) v /= sum;
        }
    }
    return out;
}

std::vector<int> linear_predict_sparse(const LinearModel& mo, const SparseRows& X) {
    auto scores = linear_scores_sparse(mo, X);
    std::vector<int> out(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        int best = 0;
        for (int k = 1; k < mo.classes; ++k)
            if (scores[i][k] > scores[i][best]) best = k;
        out[i] = best;
    }
    return out;
}

namespace {

// Indices of the k nearest training rows, ties by index.
std::vector<int> nearest(const Rows& Xtr, const std::vector<double>& q, int k, Dist dist) {
    std::vector<std::pair<double, int>> order(Xtr.size());
    double qn = dist == Dist::cosine ? std::sqrt(dot(q, q)) : 0.0;
    if (dist == Dist::cosine && qn == 0.0)
        throw DataError("knn: cosine distance undefined for a zero vector");
    for (std::size_t i = 0; i < Xtr.size(); ++i) {
        double dv;
        if (dist == Dist::euclidean) {
            dv = sq_dist(Xtr[i], q);
        } else {
            double tn = std::sqrt(dot(Xtr[i], Xtr[i]));
            if (tn == 0.0) throw DataError("knn: cosine distance undefined for a zero vector");
            dv = 1.0 - dot(Xtr[i], q) / (tn * qn);
        }
        order[i] = {dv, static_cast<int>(i)};
    }
    std::partial_sort(order.begin(), order.begin() + k, order.end());
    std::vector<int> out(k);
    for (int i = 0; i < k; ++i) out[i] = order[i].second;
    return out;
}

void check_knn(const Rows& Xtr, std::size_t labels, const Rows& Xte, int k) {
    check_matrix(Xtr, "knn");
    check_matrix(Xte, "knn");
    if (labels != Xtr.size()) throw DataError("knn: label count mismatch");
    if (Xtr[0].size() != Xte[0].size()) throw DataError("knn: feature dimension mismatch");
    if (k < 1 || k > static_cast<int>(Xtr.size()))
        throw ConfigError("knn: k must be in [1, train size]");
}

} // namespace

std::vector<int> knn_classify(const Rows& Xtr, const std::vector<int>& ytr, const Rows& Xte,
                              int k, Dist dist) {
    check_knn(Xtr, ytr.size(), Xte, k);
    class_count(ytr, "knn");
    std::vector<int> out(Xte.size());
    for (std::size_t i = 0; i < Xte.size(); ++i) {
        std::map<int, int> votes;
        for (int j : nearest(Xtr, Xte[i], k, dist)) ++votes[ytr[j]];
        int best = -1, n = -1;
        for (auto& [cls, cnt] : votes)
            if (cnt > n) { // map order makes ties pick the smallest class
                best = cls;
                n = cnt;
            }
        out[i] = best;
    }
    return out;
}

std::vector<double> knn_regress(const Rows& Xtr, const std::vector<double>& ytr, const Rows& Xte,
                                int k, Dist dist) {
    check_knn(Xtr, ytr.size(), Xte, k);
    std::vector<double> out(Xte.size());
    for (std::size_t i = 0; i < Xte.size(); ++i) {
        double s = 0;
        for (int j : nearest(Xtr, Xte[i], k, dist)) s += ytr[j];
        out[i] = s / k;
    }
    return out;
}

namespace {

struct LloydRun {
    std::vector<int> labels;
    double inertia = 0;
};

LloydRun lloyd(const Rows& X, int k, Rng rng) {
    int m = static_cast<int>(X.size());
    Rows cent;
    cent.reserve(k);
    cent.push_back(X[rng.next_below(m)]);
    std::vector<double> d2(m);
    for (int i = 0; i < m; ++i) d2[i] = sq_dist(X[i], cent[0]);
    while (static_cast<int>(cent.size()) < k) {
        double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        int pick;
        if (total <= 0) {
            pick = static_cast<int>(rng.next_below(m));
        } else {
            double r = rng.next_double() * total, run = 0;
            pick = m - 1;
            for (int i = 0; i < m; ++i) {
                run += d2[i];
                if (run > r) {
                    pick = i;
                    break;
                }
            }
        }
        cent.push_back(X[pick]);
        for (int i = 0; i < m; ++i) d2[i] = std::min(d2[i], sq_dist(X[i], cent.back()));
    }

    std::vector<int> label(m, -1);
    std::vector<int> count(k);
    for (int iter = 0; iter < 500; ++iter) {
        std::vector<int> next(m);
        for (int i = 0; i < m; ++i) {
            int best = 0;
            double bd = sq_dist(X[i], cent[0]);
            for (int c = 1; c < k; ++c) {
                double dd = sq_dist(X[i], cent[c]);
                if (dd < bd) {
                    bd = dd;
                    best = c;
                }
            }
            next[i] = best;
        }
        std::fill(count.begin(), count.end(), 0);
        for (int c : next) ++count[c];
        for (int c = 0; c < k; ++c) {
            if (count[c] > 0) continue;
            // hand the empty cluster the point farthest from its centroid,
            // taken from a cluster that can spare one
            int far = -1;
            double fd = -1;
            for (int i = 0; i < m; ++i) {
                if (count[next[i]] <= 1) continue;
                double dd = sq_dist(X[i], cent[next[i]]);
                if (dd > fd) {
                    fd = dd;
                    far = i;
                }
            }
            if (far < 0) break;
            --count[next[far]];
            next[far] = c;
            ++count[c];
        }
        bool same = next == label;
        label = std::move(next);
        for (int c = 0; c < k; ++c)
            std::fill(cent[c].begin(), cent[c].end(), 0.0);
        for (int i = 0; i < m; ++i)
            for (std::size_t j = 0; j < X[i].size(); ++j) cent[label[i]][j] += X[i][j];
        for (int c = 0; c < k; ++c)
            if (count[c] > 0)
                for (double& v : cent[c]) v /= count[c];
        if (same) break;
    }
    LloydRun run;
    run.labels = label;
    for (int i = 0; i < m; ++i) run.inertia += sq_dist(X[i], cent[label[i]]);
    return run;
}

} // namespace

KmeansResult kmeans(const Rows& X, int k, int restarts, std::uint64_t seed, int jobs) {
    check_matrix(X, "kmeans");
    int m = static_cast<int>(X.size());
    if (k < 1 || k > m) throw ConfigError("kmeans: k must be in [1, sample count]");
    if (restarts < 1) throw ConfigError("kmeans: restarts must be >= 1");
    std::vector<double> inertia(restarts);
    parallel_for(restarts, jobs,
                 [&](int r) { inertia[r] = lloyd(X, k, Rng::derive(seed, r)).inertia; });
    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (inertia[r] < inertia[best]) best = r;
    auto run = lloyd(X, k, Rng::derive(seed, best));
    KmeansResult res;
    res.labels = std::move(run.labels);
    res.inertia = run.inertia;
    res.best_restart = best;
    return res;
}

std::vector<int> stratified_folds(const std::vector<int>& y, int folds, std::uint64_t seed,
                                  std::vector<std::string>* warnings) {
    if (folds < 2) throw ConfigError("stratified_folds: need at least 2 folds");
    if (y.empty()) throw DataError("stratified_folds: empty labels");
    if (folds > static_cast<int>(y.size()))
        throw ConfigError("stratified_folds: more folds than samples");
    int K = class_count(y, "stratified_folds");
    std::vector<int> fold(y.size(), -1);
    for (int c = 0; c < K; ++c) {
        std::vector<int> members;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == c) members.push_back(static_cast<int>(i));
        if (members.empty()) continue;
        if (static_cast<int>(members.size()) < folds && warnings)
            warnings->push_back("class " + std::to_string(c) + " has " +
                                std::to_string(members.size()) + " members for " +
                                std::to_string(folds) +
                                " folds; spread round-robin, some folds lack it");
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(c) + 1);
        rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i)
            fold[members[i]] = static_cast<int>((c + i) % folds);
    }
    return fold;
}

namespace {

void check_pair(std::size_t a, std::size_t b, const char* who) {
    if (a != b) throw DataError(std::string(who) + ": length mismatch");
    if (a == 0) throw DataError(std::string(who) + ": empty input");
}

} // namespace

double accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    check_pair(y_true.size(), y_pred.size(), "accuracy");
    int hit = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) hit += y_true[i] == y_pred[i];
    return static_cast<double>(hit) / y_true.size();
}

double macro_f1(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    check_pair(y_true.size(), y_pred.size(), "macro_f1");
    int K = std::max(class_count(y_true, "macro_f1"), class_count(y_pred, "macro_f1"));
    std::vector<int> tp(K), fp(K), fn(K);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == y_pred[i])
            ++tp[y_true[i]];
        else {
            ++fp[y_pred[i]];
            ++fn[y_true[i]];
        }
    }
    double sum = 0;
    int present = 0;
    for (int c = 0; c < K; ++c) {
        if (tp[c] + fp[c] + fn[c] == 0) continue; // class absent on both sides
        ++present;
        double prec = tp[c] + fp[c] > 0 ? static_cast<double>(tp[c]) / (tp[c] + fp[c]) : 0.0;
        double rec = tp[c] + fn[c] > 0 ? static_cast<double>(tp[c]) / (tp[c] + fn[c]) : 0.0;
        sum += prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
    }
    return sum / present;
}

double micro_f1(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    check_pair(y_true.size(), y_pred.size(), "micro_f1");
    // single-label micro F1 reduces to accuracy; keep the explicit counts
    long long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == y_pred[i])
            ++tp;
        else {
            ++fp;
            ++fn;
        }
    }
    double prec = static_cast<double>(tp) / (tp + fp);
    double rec = static_cast<double>(tp) / (tp + fn);
    return prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
}

std::optional<double> micro_auc(const std::vector<int>& y_true, const Rows& scores) {
    check_pair(y_true.size(), scores.size(), "micro_auc");
    std::size_t K = scores[0].size();
    std::vector<std::pair<double, int>> flat; // (score, is_positive)
    flat.reserve(y_true.size() * K);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (scores[i].size() != K) throw DataError("micro_auc: ragged scores");
        for (std::size_t k = 0; k < K; ++k)
            flat.emplace_back(scores[i][k], y_true[i] == static_cast<int>(k) ? 1 : 0);
    }
    long long pos = 0;
    for (auto& [s, p] : flat) pos += p;
    long long neg = static_cast<long long>(flat.size()) - pos;
    if (pos == 0 || neg == 0) return std::nullopt;
    std::sort(flat.begin(), flat.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double rank_sum_pos = 0;
    std::size_t i = 0;
    while (i < flat.size()) {
        std::size_t j = i;
        while (j < flat.size() && flat[j].first == flat[i].first) ++j;
        double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t t = i; t < j; ++t)
            if (flat[t].second) rank_sum_pos += avg_rank;
        i = j;
    }
    double u = rank_sum_pos - 0.5 * static_cast<double>(pos) * (pos + 1);
    return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

double rmse(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
    check_pair(y_true.size(), y_pred.size(), "rmse");
    double s = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        double d = y_true[i] - y_pred[i];
        s += d * d;
    }
    return std::sqrt(s / y_true.size());
}

std::optional<double> nmi(const std::vector<int>& a, const std::vector<int>& b) {
    check_pair(a.size(), b.size(), "nmi");
    double n = static_cast<double>(a.size());
    std::map<int, double> pa, pb;
    std::map<std::pair<int, int>, double> pj;
    for (std::size_t i = 0; i < a.size(); ++i) {
        pa[a[i]] += 1;
        pb[b[i]] += 1;
        pj[{a[i], b[i]}] += 1;
    }
    double ha = 0, hb = 0, mi = 0;
    for (auto& [k, c] : pa) ha -= c / n * std::log(c / n);
    for (auto& [k, c] : pb) hb -= c / n * std::log(c / n);
    for (auto& [k, c] : pj)
        mi += c / n * std::log(c / n / (pa[k.first] / n) / (pb[k.second] / n));
    if (ha == 0 && hb == 0) return std::nullopt; // both sides constant
    double v = 2 * mi / (ha + hb);
    return std::clamp(v, 0.0, 1.0);
}

double purity(const std::vector<int>& clusters, const std::vector<int>& truth) {
    check_pair(clusters.size(), truth.size(), "purity");
    std::map<int, std::map<int, int>> table;
    for (std::size_t i = 0; i < clusters.size(); ++i) ++table[clusters[i]][truth[i]];
    long long hit = 0;
    for (auto& [c, row] : table) {
        int best = 0;
        for (auto& [t, cnt] : row) best = std::max(best, cnt);
        hit += best;
    }
    return static_cast<double>(hit) / clusters.size();
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    check_pair(x.size(), y.size(), "pearson");
    double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double a = x[i] - mx, b = y[i] - my;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    if (sxx == 0 || syy == 0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
    check_pair(x.size(), y.size(), "kendall_tau");
    long long conc = 0, disc = 0, tx = 0, ty = 0;
    std::size_t m = x.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            double dx = x[i] - x[j], dy = y[i] - y[j];
            if (dx == 0) ++tx;
            if (dy == 0) ++ty;
            if (dx == 0 || dy == 0) continue;
            if ((dx > 0) == (dy > 0))
                ++conc;
            else
                ++disc;
        }
    double n0 = 0.5 * static_cast<double>(m) * (m - 1);
    double den = std::sqrt((n0 - tx) * (n0 - ty));
    if (den == 0) return std::nullopt;
    return std::clamp((conc - disc) / den, -1.0, 1.0);
}

} // namespace sb
