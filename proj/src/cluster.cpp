#include "simignore/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <utility>

namespace simignore {

namespace {

constexpr std::size_t kPowerIterationCap = 1000;
constexpr double kPowerIterationTol = 1e-9;
constexpr std::size_t kLloydCap = 300;

double uniform_unit(std::mt19937& g) {
    return static_cast<double>(g()) * (1.0 / 4294967296.0);
}

std::size_t uniform_below(std::mt19937& g, std::size_t n) {
    return static_cast<std::size_t>(uniform_unit(g) * static_cast<double>(n)) % n;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

void normalize_in_place(std::vector<double>& v) {
    double n = std::sqrt(dot(v, v));
    if (n > 0.0) {
        for (auto& x : v) {
            x /= n;
        }
    }
}

// Dominant eigenvector of the symmetric matrix `cov` (d x d), power iteration
// from a fixed deterministic start. Returns false if the matrix has no mass
// to act on (image of the start vector stays ~0).
bool power_iteration(const std::vector<double>& cov, std::size_t d, std::vector<double>& vec) {
    vec.assign(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        vec[i] = 1.0 + 1e-3 * static_cast<double>(i);  // fixed start, breaks symmetry
    }
    normalize_in_place(vec);

    std::vector<double> next(d, 0.0);
    for (std::size_t iter = 0; iter < kPowerIterationCap; ++iter) {
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                acc += cov[i * d + j] * vec[j];
            }
            next[i] = acc;
        }
        double norm = std::sqrt(dot(next, next));
        if (norm <= 1e-300) {
            return false;
        }
        for (auto& x : next) {
            x /= norm;
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            delta = std::max(delta, std::fabs(next[i] - vec[i]));
        }
        vec.swap(next);
        if (delta < kPowerIterationTol) {
            break;
        }
    }
    return true;
}

// Deterministic unit vector orthogonal to v1: basis vector with the smallest
// |v1| component, Gram-Schmidt'ed against v1.
std::vector<double> orthogonal_complement_axis(const std::vector<double>& v1) {
    std::size_t d = v1.size();
    std::size_t pick = 0;
    for (std::size_t i = 1; i < d; ++i) {
        if (std::fabs(v1[i]) < std::fabs(v1[pick])) {
            pick = i;
        }
    }
    std::vector<double> v2(d, 0.0);
    v2[pick] = 1.0;
    double proj = dot(v2, v1);
    for (std::size_t i = 0; i < d; ++i) {
        v2[i] -= proj * v1[i];
    }
    normalize_in_place(v2);
    return v2;
}

double squared_distance(const double* a, const double* b, std::size_t dim) {
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return acc;
}

ClusterAssignment kmeans_points(const std::vector<double>& pts, std::size_t n, std::size_t dim,
                                std::size_t k, std::uint32_t seed) {
    if (k < 1 || k > n) {
        throw Error(Errc::KOutOfRange,
                    "k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }

    std::mt19937 g(seed);
    std::vector<double> centroids(k * dim, 0.0);

    // k-means++ seeding
    std::size_t first = uniform_below(g, n);
    std::copy_n(&pts[first * dim], dim, &centroids[0]);
    std::vector<double> min_sq(n, 0.0);
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = squared_distance(&pts[i * dim], &centroids[0], dim);
            for (std::size_t j = 1; j < c; ++j) {
                best = std::min(best, squared_distance(&pts[i * dim], &centroids[j * dim], dim));
            }
            min_sq[i] = best;
            total += best;
        }
        std::size_t chosen;
        if (total == 0.0) {
            chosen = uniform_below(g, n);
        } else {
            double r = uniform_unit(g) * total;
            double acc = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += min_sq[i];
                if (acc >= r) {
                    chosen = i;
                    break;
                }
            }
        }
        std::copy_n(&pts[chosen * dim], dim, &centroids[c * dim]);
    }

    ClusterAssignment out;
    out.k = k;
    out.dim = dim;
    out.seed = seed;

    std::vector<std::size_t> labels(n, k);  // k = unassigned sentinel
    std::vector<double> sums(k * dim, 0.0);
    std::vector<std::size_t> counts(k, 0);

    for (std::size_t iter = 0; iter < kLloydCap; ++iter) {
        // assignment, ties to lowest cluster id
        bool changed = false;
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_sq = squared_distance(&pts[i * dim], &centroids[0], dim);
            for (std::size_t j = 1; j < k; ++j) {
                double sq = squared_distance(&pts[i * dim], &centroids[j * dim], dim);
                if (sq < best_sq) {
                    best_sq = sq;
                    best = j;
                }
            }
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
            inertia += best_sq;
        }
        out.inertia_history.push_back(inertia);
        out.iterations = iter + 1;
        if (!changed) {
            break;
        }

        // centroid update, fixed accumulation order
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            counts[labels[i]] += 1;
            for (std::size_t d2 = 0; d2 < dim; ++d2) {
                sums[labels[i] * dim + d2] += pts[i * dim + d2];
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] == 0) {
                continue;  // repaired below
            }
            for (std::size_t d2 = 0; d2 < dim; ++d2) {
                centroids[j * dim + d2] = sums[j * dim + d2] / static_cast<double>(counts[j]);
            }
        }
        // empty-cluster repair: re-seed to the farthest point
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] != 0) {
                continue;
            }
            std::size_t farthest = 0;
            double far_sq = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                double sq =
                    squared_distance(&pts[i * dim], &centroids[labels[i] * dim], dim);
                if (sq > far_sq) {
                    far_sq = sq;
                    farthest = i;
                }
            }
            counts[labels[farthest]] -= 1;
            counts[j] = 1;
            labels[farthest] = j;
            std::copy_n(&pts[farthest * dim], dim, &centroids[j * dim]);
        }
    }

    out.labels = std::move(labels);
    out.centroids = std::move(centroids);
    out.inertia = out.inertia_history.back();
    return out;
}

}  // namespace

Projection2D project_2d(const EmbeddingMatrix& emb) {
    const std::size_t n = emb.rows();
    const std::size_t d = emb.dim();
    if (d < 2) {
        throw Error(Errc::DimensionMismatch, "2-D projection requires feature dim >= 2");
    }
    if (n < 2) {
        throw Error(Errc::DegenerateCovariance, "2-D projection requires at least 2 rows");
    }

    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            mean[j] += emb.at(i, j);
        }
    }
    for (auto& v : mean) {
        v /= static_cast<double>(n);
    }

    std::vector<double> centered(n * d, 0.0);
    double data_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            centered[i * d + j] = emb.at(i, j) - mean[j];
            data_scale += emb.at(i, j) * emb.at(i, j);
        }
    }
    data_scale /= static_cast<double>(n * d);

    std::vector<double> cov(d * d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                cov[a * d + b] += centered[i * d + a] * centered[i * d + b];
            }
        }
    }
    for (auto& v : cov) {
        v /= static_cast<double>(n - 1);
    }

    double trace = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        trace += cov[a * d + a];
    }
    if (trace <= 1e-18 * std::max(1.0, data_scale)) {
        throw Error(Errc::DegenerateCovariance, "all rows identical: zero variance everywhere");
    }

    std::vector<double> v1;
    power_iteration(cov, d, v1);
    double lambda1 = 0.0;
    {
        std::vector<double> cv(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                cv[i] += cov[i * d + j] * v1[j];
            }
        }
        lambda1 = dot(v1, cv);
    }

    // deflate and repeat for the second axis
    std::vector<double> deflated(cov);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            deflated[i * d + j] -= lambda1 * v1[i] * v1[j];
        }
    }
    std::vector<double> v2;
    if (!power_iteration(deflated, d, v2)) {
        v2 = orthogonal_complement_axis(v1);  // rank-1 data: any orthogonal unit axis
    } else {
        double proj = dot(v2, v1);
        for (std::size_t i = 0; i < d; ++i) {
            v2[i] -= proj * v1[i];
        }
        double norm = std::sqrt(dot(v2, v2));
        if (norm < 1e-9) {
            v2 = orthogonal_complement_axis(v1);
        } else {
            for (auto& x : v2) {
                x /= norm;
            }
        }
    }

    Projection2D out;
    out.count = n;
    out.mean = std::move(mean);
    out.points.resize(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        double px = 0.0;
        double py = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            px += centered[i * d + j] * v1[j];
            py += centered[i * d + j] * v2[j];
        }
        out.points[2 * i] = px;
        out.points[2 * i + 1] = py;
    }
    out.basis = {std::move(v1), std::move(v2)};
    return out;
}

ClusterAssignment kmeans(const Projection2D& points, std::size_t k, std::uint32_t seed) {
    return kmeans_points(points.points, points.count, 2, k, seed);
}

ClusterAssignment kmeans_embedding(const EmbeddingMatrix& emb, std::size_t k,
                                   std::uint32_t seed) {
    return kmeans_points(emb.data(), emb.rows(), emb.dim(), k, seed);
}

std::vector<std::size_t> cluster_ignore_selection(const ClusterAssignment& assign,
                                                  std::span<const std::size_t> ignore_clusters) {
    std::vector<std::uint8_t> drop(assign.k, 0);
    for (std::size_t id : ignore_clusters) {
        if (id >= assign.k) {
            throw Error(Errc::ClusterIdOutOfRange,
                        "cluster id " + std::to_string(id) + " outside [0, " +
                            std::to_string(assign.k) + ")");
        }
        drop[id] = 1;
    }
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < assign.labels.size(); ++i) {
        if (!drop[assign.labels[i]]) {
            kept.push_back(i);
        }
    }
    return kept;
}

std::vector<std::size_t> overlap_report(std::span<const std::size_t> ignored_by_similarity,
                                        const ClusterAssignment& assign) {
    std::vector<std::size_t> histogram(assign.k, 0);
    for (std::size_t i : ignored_by_similarity) {
        if (i >= assign.labels.size()) {
            throw Error(Errc::IndexOutOfRange,
                        "ignored index " + std::to_string(i) + " outside [0, " +
                            std::to_string(assign.labels.size()) + ")");
        }
        histogram[assign.labels[i]] += 1;
    }
    return histogram;
}

CriticalCountResult critical_count_search(std::size_t ignore_list_length,
                                          const std::function<Verdict(std::size_t)>& verdict) {
    CriticalCountResult result;
    auto probe = [&](std::size_t m) {
        result.predicate_calls += 1;
        return verdict(m);
    };

    if (probe(ignore_list_length) != Verdict::Correct) {
        throw Error(Errc::NonMonotonePredicate,
                    "ignoring the full list is still Incorrect; no critical count exists");
    }
    // smallest m in [0, len] with Correct; len is known Correct
    std::size_t lo = 0;
    std::size_t hi = ignore_list_length;
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (probe(mid) == Verdict::Correct) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    result.critical_count = lo;
    return result;
}

}  // namespace simignore
