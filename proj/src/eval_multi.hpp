#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "embed.hpp"
#include "eval_single.hpp"
#include "graph.hpp"
#include "mlkit.hpp"

namespace sb {

// A graph paired with a shuffled, optionally noised copy of itself and the
// node correspondence to recover.
struct AlignmentScenario {
    Graph g1;
    Graph g2;
    std::vector<int> truth; // node of g1 -> node of g2
    double p = 0.0;         // per-edge removal probability on the copy
    std::uint64_t seed = 0;
};

AlignmentScenario make_alignment_scenario(const Graph& g, double p, std::uint64_t seed);

// Exact nearest-neighbor index over embedding rows (euclidean). The tree is
// an accelerator only: results equal a brute-force scan, with distance ties
// resolved toward the smallest stored id.
class KdTree {
  public:
    explicit KdTree(const Rows& points);
    // nearest stored row to q; second is true when the minimum distance is
    // shared by more than one stored row
    std::pair<int, bool> nearest(const std::vector<double>& q) const;

  private:
    struct Node {
        int point = -1;
        int axis = 0;
        int left = -1;
        int right = -1;
    };
    const Rows pts_;
    std::vector<Node> nodes_;
    int root_ = -1;
    int dim_ = 0;
    int build(std::vector<int>& ids, int lo, int hi, int depth);
    void search(int node, const std::vector<double>& q, double& best, int& best_id,
                bool& tie) const;
};

struct AlignResult {
    double accuracy = 0.0;
    int ties = 0; // queries whose nearest neighbor was not unique
};

// Match every row of E1 to its nearest row in E2; accuracy is the fraction
// matched to the true counterpart.
AlignResult align(const EmbeddingMatrix& E1, const EmbeddingMatrix& E2,
                  const std::vector<int>& truth);

// Alignment accuracy split by a per-node size statistic of g1, using the same
// cube-root bucket edges as the single-graph analysis. macro_f1 fields stay
// empty; overall_accuracy is the plain alignment accuracy.
BucketReport alignment_bucket_analysis(const AlignmentScenario& sc, const EmbeddingMatrix& E1,
                                       const EmbeddingMatrix& E2, BucketStat stat);

// b's nodes appended after a's; edge types survive only when both carry them.
Graph disjoint_union(const Graph& a, const Graph& b);

// Multi-resolution grid histogram of an embedding, one axis-aligned grid per
// level with cell width halving, crossed with Weisfeiler-Lehman labels. The
// grid frame is shared across a collection so features are comparable.
struct RgmOptions {
    int levels = 4;
    int wl_iters = 2;
};

struct RgmGrid {
    std::vector<double> origin; // coordinate-wise minimum over the collection
    std::vector<double> width;  // coordinate range; zero ranges stored as 1
};

RgmGrid rgm_grid(const std::vector<EmbeddingMatrix>& collection);

// Sparse feature vector over a 2^20 hash space: index = hash of (level, cell
// coordinates, WL label), value = node count. Invariant to node order.
SparseRow rgm_features(const Graph& g, const EmbeddingMatrix& E, const RgmGrid& grid,
                       const RgmOptions& opt = {},
                       const std::vector<int>* node_labels = nullptr);

struct GraphEntry {
    std::string id;
    Graph g;
    std::vector<int> node_labels; // empty when the dataset has none
    int cls = 0;
};

struct GraphCollection {
    std::vector<GraphEntry> graphs;
    int classes = 0;
    bool has_node_labels = false;
    std::vector<std::string> warnings;
};

// Loads the common benchmark layout: PREFIX_A.txt (edges over 1-based global
// node ids), PREFIX_graph_indicator.txt, PREFIX_graph_labels.txt, and the
// optional PREFIX_node_labels.txt, from a directory holding exactly one such
// family. Graph class ids are remapped to contiguous 0-based values in sorted
// order of the raw labels.
GraphCollection load_tu_collection(const std::string& dir);

struct GraphClassifyOptions {
    RgmOptions rgm;
    bool use_node_labels = false;
    int folds = 10;
    std::uint64_t seed = 0;
    double svm_c = 1.0;
    int jobs = 1;
};

struct GraphClassifyResult {
    Summary accuracy;
    Summary macro_f1;
    std::vector<std::string> warnings;
};

// Per-graph embeddings -> shared-grid features -> stratified CV with a linear
// SVM. embeddings[i] belongs to graphs[i] and must be computed on a shared
// feature space (joint max degree, or a joint embedding split per graph).
GraphClassifyResult graph_classify(const GraphCollection& col,
                                   const std::vector<EmbeddingMatrix>& embeddings,
                                   const GraphClassifyOptions& opt = {});

} // namespace sb
