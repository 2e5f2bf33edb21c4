#pragma once

#include <vector>

#include "graph.hpp"

namespace sb {

using Matrix = std::vector<std::vector<double>>;

struct ConcorOptions {
    int split_depth = 2; // up to 2^depth classes
    double tol = 1e-6;
    int max_iters = 200;
};

struct ConcorResult {
    Matrix S;                 // initial adjacency-row correlations
    std::vector<int> classes; // blockmodel partition
};

// Iterated row correlations with recursive bipartition. Adjacency rows are
// correlated with the diagonal as 0; a zero-variance row compares as 1 to an
// identical row and 0 to anything else.
ConcorResult concor(const Graph& g, const ConcorOptions& opt = {});

// Geodesic profile similarity: sorted distance profiles compared by L1,
// scaled by the largest profile distance in the graph so S lands in [0,1].
// Disconnected pairs enter profiles as diameter+1.
Matrix maxsim(const Graph& g);

struct CatregeOptions {
    int max_iters = 100;
    bool multiset = false; // exact-coloring variant; default is set-match
};

struct CatregeResult {
    Matrix S; // entry = iteration the pair separated, max_iters if never
    std::vector<int> classes;
    int iterations_used = 0;
};

// Iterative (edge type, neighbor class) refinement from one all-node class.
CatregeResult catrege(const Graph& g, const CatregeOptions& opt = {});

// Average-linkage agglomerative clustering on max(S) - S, cut at k clusters.
// Ties merge the lexicographically smallest cluster pair; labels are numbered
// by smallest member node.
std::vector<int> classes_from_similarity(const Matrix& S, int k);

} // namespace sb
