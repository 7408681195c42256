#pragma once

// Embedding cluster study: 2-D PCA projection, seeded k-means, cluster-ignore
// mask generation, overlap reporting, and the critical-count search.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "simignore/token_space.hpp"

namespace simignore {

// PCA projection of token embeddings onto the top-2 principal axes.
struct Projection2D {
    std::size_t count = 0;
    std::vector<double> points;               // count x 2, row-major
    std::vector<std::vector<double>> basis;   // 2 orthonormal dim-length axes
    std::vector<double> mean;                 // dim-length centering vector

    double x(std::size_t i) const { return points[2 * i]; }
    double y(std::size_t i) const { return points[2 * i + 1]; }
};

struct ClusterAssignment {
    std::size_t k = 0;
    std::size_t dim = 0;                   // 2 for projected points
    std::vector<std::size_t> labels;       // one per point, in [0, k)
    std::vector<double> centroids;         // k x dim, row-major
    double inertia = 0.0;                  // total within-cluster squared distance
    std::size_t iterations = 0;            // assignment passes performed
    std::uint32_t seed = 0;
    std::vector<double> inertia_history;   // inertia after each assignment pass
};

enum class Verdict { Correct, Incorrect };

struct CriticalCountResult {
    std::size_t critical_count = 0;
    std::size_t predicate_calls = 0;
};

// Centers rows by their mean and projects onto the top-2 principal axes
// (power iteration with deflation; fixed deterministic start vector, cap 1000
// iterations, convergence tol 1e-9). DegenerateCovariance when the data has
// zero variance in every direction.
Projection2D project_2d(const EmbeddingMatrix& emb);

// Seeded k-means++ followed by Lloyd iterations until labels stabilize or 300
// rounds; empty clusters are re-seeded to the farthest point. Deterministic
// for a fixed seed.
ClusterAssignment kmeans(const Projection2D& points, std::size_t k, std::uint32_t seed);

// Same contract, clustering in the full embedding dimension.
ClusterAssignment kmeans_embedding(const EmbeddingMatrix& emb, std::size_t k,
                                   std::uint32_t seed);

// Point indices whose cluster label is not in ignore_clusters, ascending.
std::vector<std::size_t> cluster_ignore_selection(const ClusterAssignment& assign,
                                                  std::span<const std::size_t> ignore_clusters);

// Histogram h[c] = number of ignored indices labeled c.
std::vector<std::size_t> overlap_report(std::span<const std::size_t> ignored_by_similarity,
                                        const ClusterAssignment& assign);

// Smallest prefix length m of the ignore list for which the external verdict
// is Correct, found by binary search over a monotone predicate. The full-list
// endpoint is probed first; a full prefix that is still Incorrect is reported
// as NonMonotonePredicate. At most 1 + ceil(log2(len+1)) predicate calls.
CriticalCountResult critical_count_search(std::size_t ignore_list_length,
                                          const std::function<Verdict(std::size_t)>& verdict);

inline CriticalCountResult critical_count_search(
    std::span<const std::size_t> ordered_ignore_list,
    const std::function<Verdict(std::size_t)>& verdict) {
    return critical_count_search(ordered_ignore_list.size(), verdict);
}

}  // namespace simignore
