#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sb {

using Rows = std::vector<std::vector<double>>;

enum class Dist { euclidean, cosine };

// Linear classifier over augmented features; W is per-class, bias last.
struct LinearModel {
    int classes = 0;
    int dim = 0;
    bool ovr = false;
    Rows W;
};

struct LogRegOptions {
    double C = 1.0;
    bool ovr = false; // one-vs-rest instead of multinomial
    double grad_tol = 1e-6;
    int max_iters = 500;
};

LinearModel logreg_fit(const Rows& X, const std::vector<int>& y, const LogRegOptions& opt = {});

struct SvmOptions {
    double C = 1.0;
    double tol = 1e-4;
    int max_sweeps = 1000;
};

// L2-regularized hinge loss, one-vs-rest for multiclass, deterministic
// cyclic dual coordinate descent. Bias enters as a constant-1 feature.
LinearModel svm_fit(const Rows& X, const std::vector<int>& y, const SvmOptions& opt = {});

// Same solver over (feature index, value) rows; indices strictly increasing
// per row, absent features are zero. svm_fit on a densified copy gives the
// same model to the last bit.
using SparseRow = std::vector<std::pair<int, double>>;
using SparseRows = std::vector<SparseRow>;
LinearModel svm_fit_sparse(const SparseRows& X, int dim, const std::vector<int>& y,
                           const SvmOptions& opt = {});

std::vector<int> linear_predict(const LinearModel& m, const Rows& X);
// multinomial: softmax probabilities; ovr/svm: raw per-class scores
Rows linear_scores(const LinearModel& m, const Rows& X);
std::vector<int> linear_predict_sparse(const LinearModel& m, const SparseRows& X);
Rows linear_scores_sparse(const LinearModel& m, const SparseRows& X);

// Exact brute-force neighbors; ties resolved by training index.
std::vector<int> knn_classify(const Rows& Xtr, const std::vector<int>& ytr, const Rows& Xte,
                              int k = 5, Dist dist = Dist::euclidean);
std::vector<double> knn_regress(const Rows& Xtr, const std::vector<double>& ytr, const Rows& Xte,
                                int k = 5, Dist dist = Dist::euclidean);

struct KmeansResult {
    std::vector<int> labels;
    double inertia = 0;
    int best_restart = -1;
};

// k-means++ inits, Lloyd to convergence per restart, minimum inertia wins;
// exact ties keep the lowest restart index.
KmeansResult kmeans(const Rows& X, int k, int restarts = 1000, std::uint64_t seed = 0,
                    int jobs = 1);

// Per-class stratified folds with seeded shuffling. Classes smaller than the
// fold count are spread round-robin; each such class is noted in warnings.
std::vector<int> stratified_folds(const std::vector<int>& y, int folds, std::uint64_t seed,
                                  std::vector<std::string>* warnings = nullptr);

// Metrics. Undefined cases come back empty rather than 0.
double accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred);
double macro_f1(const std::vector<int>& y_true, const std::vector<int>& y_pred);
double micro_f1(const std::vector<int>& y_true, const std::vector<int>& y_pred);
std::optional<double> micro_auc(const std::vector<int>& y_true, const Rows& scores);
double rmse(const std::vector<double>& y_true, const std::vector<double>& y_pred);
std::optional<double> nmi(const std::vector<int>& a, const std::vector<int>& b);
double purity(const std::vector<int>& clusters, const std::vector<int>& truth);
std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);
std::optional<double> kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

} // namespace sb
