#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "embed.hpp"
#include "equivalence.hpp"
#include "graph.hpp"
#include "mlkit.hpp"

namespace sb {

struct Summary {
    std::vector<double> values;
    double mean = 0.0;
    double stddev = 0.0; // population
};

Summary summarize(const std::vector<double>& values);

// How well embedding neighborhoods track node properties: for each node, the
// mean property value over its k nearest embedding neighbors (self excluded),
// correlated against the node's own value. nullopt when a property has zero
// variance on the graph.
struct PropertyCorrelation {
    bool applicable = true; // false: cosine distance over a scalar embedding
    std::map<std::string, std::optional<double>> by_property;
};

PropertyCorrelation property_correlation(const Graph& g, const EmbeddingMatrix& E, int k = 5,
                                         Dist dist = Dist::euclidean, int jobs = 1);

// Degree regression with deliberately scarce supervision: each fold takes a
// turn as the training set while the remaining folds are scored, so most
// nodes are predicted from a small sample.
Summary degree_rmse(const Graph& g, const EmbeddingMatrix& E, int k = 5, int folds = 5,
                    std::uint64_t seed = 0);

// Per-node rank agreement between embedding similarities and an equivalence
// similarity matrix. Nodes whose tau is undefined (constant similarity row on
// either side) are excluded and counted.
struct RankCorrelation {
    bool applicable = true; // false: cosine distance over a scalar embedding
    Summary tau;
    int defined_nodes = 0;
    int undefined_nodes = 0;
};

RankCorrelation equivalence_rank_correlation(const EmbeddingMatrix& E, const Matrix& S,
                                             Dist dist = Dist::euclidean, int jobs = 1);

enum class Classifier { logreg, logreg_ovr, svm, knn };
enum class Task { classify, cluster };

struct ExtrinsicOptions {
    Task task = Task::classify;
    Classifier classifier = Classifier::logreg;
    int folds = 5;
    int knn_k = 5;
    double svm_c = 1.0;
    double logreg_c = 1.0;
    std::uint64_t seed = 0;
    int kmeans_restarts = 1000;
    int jobs = 1;
};

struct ExtrinsicResult {
    Task task = Task::classify;
    Summary accuracy;  // classify: per held-out fold
    Summary macro_f1;
    std::optional<double> nmi;    // cluster
    std::optional<double> purity;
    std::vector<std::string> warnings;
};

ExtrinsicResult extrinsic_eval(const EmbeddingMatrix& E, const std::vector<int>& labels,
                               const ExtrinsicOptions& opt = {});

// Discretize a real node property into class labels.
// quartile: four classes by rank, remainders to the lowest classes.
// log2: floor(log2(value / min value)), empty bins squeezed out; values must
// be positive.
enum class BinScheme { quartile, log2 };

std::vector<int> label_binning(const std::vector<double>& values, BinScheme scheme);

// Classification quality split by a per-node size statistic. Bucket edges sit
// at the cube roots MaxD^(1/3) and MaxD^(2/3); predictions come from the
// held-out side of the same cross-validation used by extrinsic_eval, so every
// node is scored exactly once.
enum class BucketStat { degree, triangles };

struct BucketReport {
    double lo = 0.0, hi = 0.0;
    struct Bucket {
        int count = 0;
        std::optional<double> accuracy;
        std::optional<double> macro_f1;
    };
    std::vector<Bucket> buckets; // [0,lo), [lo,hi), [hi,max]
    double overall_accuracy = 0.0;
    std::vector<std::string> warnings;
};

BucketReport bucket_analysis(const Graph& g, const EmbeddingMatrix& E,
                             const std::vector<int>& labels, BucketStat stat,
                             const ExtrinsicOptions& opt = {});

// Aggregate method comparison across experiment cells (dataset x task x ...).
// Within a cell methods are ranked by score, higher is better, rank 1 best,
// ties share the best rank. Cells missing a method's score are skipped for
// that method and counted.
struct RankCell {
    std::string id;
    std::map<std::string, std::optional<double>> score_by_method;
};

struct MethodRank {
    std::string method;
    Summary rank;
    int cells_used = 0;
    int cells_missing = 0;
};

std::vector<MethodRank> rank_methods(const std::vector<RankCell>& cells);

} // namespace sb
