#include "simignore/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "simignore/embed_pipeline.hpp"
#include "simignore/parallel.hpp"

namespace simignore {

namespace {

// Sorts indices by descending score, ties by ascending index.
std::vector<std::size_t> rank_descending(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return a < b;
    });
    return order;
}

double uniform_unit(std::mt19937& g) {
    return static_cast<double>(g()) * (1.0 / 4294967296.0);
}

std::size_t uniform_below(std::mt19937& g, std::size_t n) {
    return static_cast<std::size_t>(uniform_unit(g) * static_cast<double>(n)) % n;
}

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t n_img, std::size_t n_usr, Metric metric,
                                   std::vector<double> data)
    : n_img_(n_img), n_usr_(n_usr), metric_(metric), data_(std::move(data)) {
    if (data_.size() != n_img_ * n_usr_) {
        throw Error(Errc::DimensionMismatch,
                    "similarity data length " + std::to_string(data_.size()) +
                        " != n_img*n_usr = " + std::to_string(n_img_ * n_usr_));
    }
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw Error(Errc::NonFiniteValue, "similarity matrix contains NaN or Inf");
        }
    }
}

TokenMask::TokenMask(TokenSegmentation seg, std::vector<std::uint8_t> bits)
    : seg_(seg), bits_(std::move(bits)) {
    if (bits_.size() != seg_.total()) {
        throw Error(Errc::LengthMismatch,
                    "mask length " + std::to_string(bits_.size()) + " != token count " +
                        std::to_string(seg_.total()));
    }
}

std::size_t TokenMask::popcount() const {
    std::size_t n = 0;
    for (auto b : bits_) {
        n += (b != 0);
    }
    return n;
}

SimilarityMatrix similarity_matrix(const EmbeddingMatrix& img, const EmbeddingMatrix& txt,
                                   Metric metric) {
    if (img.dim() != txt.dim()) {
        throw Error(Errc::DimensionMismatch,
                    "image dim " + std::to_string(img.dim()) + " != text dim " +
                        std::to_string(txt.dim()));
    }
    if (img.rows() == 0 || txt.rows() == 0) {
        throw Error(Errc::DimensionMismatch, "similarity requires nonempty embeddings");
    }

    const std::size_t n_img = img.rows();
    const std::size_t n_usr = txt.rows();
    const std::size_t dim = img.dim();
    std::vector<double> out(n_img * n_usr, 0.0);

    if (metric == Metric::Cosine) {
        EmbeddingMatrix img_n = row_normalize(img).normalized;
        EmbeddingMatrix txt_n = row_normalize(txt).normalized;
        detail::parallel_for(n_img, [&](std::size_t i) {
            for (std::size_t j = 0; j < n_usr; ++j) {
                double dot = 0.0;
                for (std::size_t k = 0; k < dim; ++k) {
                    dot += img_n.at(i, k) * txt_n.at(j, k);
                }
                out[i * n_usr + j] = dot;
            }
        });
    } else if (metric == Metric::Euclidean) {
        detail::parallel_for(n_img, [&](std::size_t i) {
            for (std::size_t j = 0; j < n_usr; ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < dim; ++k) {
                    double d = img.at(i, k) - txt.at(j, k);
                    acc += d * d;
                }
                out[i * n_usr + j] = -std::sqrt(acc);
            }
        });
    } else {
        detail::parallel_for(n_img, [&](std::size_t i) {
            for (std::size_t j = 0; j < n_usr; ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < dim; ++k) {
                    acc += std::fabs(img.at(i, k) - txt.at(j, k));
                }
                out[i * n_usr + j] = -acc;
            }
        });
    }
    return SimilarityMatrix(n_img, n_usr, metric, std::move(out));
}

std::vector<double> flatten(const SimilarityMatrix& s) {
    return s.data();
}

std::vector<std::size_t> topk_flat_indices(std::span<const double> flat, std::size_t k) {
    if (k < 1 || k > flat.size()) {
        throw Error(Errc::KOutOfRange,
                    "k = " + std::to_string(k) + " outside [1, " +
                        std::to_string(flat.size()) + "]");
    }
    auto order = rank_descending(flat);
    order.resize(k);
    return order;
}

std::vector<std::size_t> map_to_image_indices(std::span<const std::size_t> flat_indices,
                                              std::size_t n_usr, std::size_t n_img) {
    std::vector<std::size_t> kept;
    std::vector<std::uint8_t> seen(n_img, 0);
    for (std::size_t p : flat_indices) {
        if (p >= n_img * n_usr) {
            throw Error(Errc::IndexOutOfRange,
                        "flat index " + std::to_string(p) + " outside [0, " +
                            std::to_string(n_img * n_usr) + ")");
        }
        std::size_t image = p / n_usr;
        if (!seen[image]) {
            seen[image] = 1;
            kept.push_back(image);
        }
    }
    return kept;
}

std::vector<double> max_over_text_scores(const SimilarityMatrix& s) {
    std::vector<double> best(s.n_img());
    for (std::size_t i = 0; i < s.n_img(); ++i) {
        double m = s.at(i, 0);
        for (std::size_t j = 1; j < s.n_usr(); ++j) {
            m = std::max(m, s.at(i, j));
        }
        best[i] = m;
    }
    return best;
}

SimilaritySelection select_tokens(const EmbeddingMatrix& img, const EmbeddingMatrix& txt,
                                  Metric metric, std::size_t keep_budget,
                                  SelectionStrategy strategy) {
    SimilarityMatrix sim = similarity_matrix(img, txt, metric);
    const std::size_t n_img = sim.n_img();
    const std::size_t n_usr = sim.n_usr();
    if (keep_budget > n_img) {
        throw Error(Errc::BudgetOutOfRange,
                    "keep budget " + std::to_string(keep_budget) + " exceeds image-token count " +
                        std::to_string(n_img));
    }

    SimilaritySelection sel;
    sel.k_requested = keep_budget;
    sel.p_total = n_img * n_usr;
    sel.strategy = strategy;
    if (keep_budget == 0) {
        return sel;
    }

    if (strategy == SelectionStrategy::FlatTopK) {
        sel.flat_indices = topk_flat_indices(sim.data(), keep_budget);
        sel.kept_image_indices = map_to_image_indices(sel.flat_indices, n_usr, n_img);
    } else {
        std::vector<double> best = max_over_text_scores(sim);
        auto order = rank_descending(best);
        order.resize(keep_budget);
        sel.kept_image_indices = order;
        for (std::size_t i : order) {
            // best cell of token i: lowest text index among maxima
            std::size_t arg = 0;
            for (std::size_t j = 1; j < n_usr; ++j) {
                if (sim.at(i, j) > sim.at(i, arg)) {
                    arg = j;
                }
            }
            sel.flat_indices.push_back(i * n_usr + arg);
        }
    }
    return sel;
}

SimilaritySelection importance_band_selection(const EmbeddingMatrix& img,
                                              const EmbeddingMatrix& txt, Metric metric,
                                              ImportanceBand band, std::size_t ignore_count,
                                              std::uint32_t seed) {
    SimilarityMatrix sim = similarity_matrix(img, txt, metric);
    const std::size_t n_img = sim.n_img();
    if (ignore_count > n_img) {
        throw Error(Errc::BudgetOutOfRange,
                    "ignore count " + std::to_string(ignore_count) +
                        " exceeds image-token count " + std::to_string(n_img));
    }

    std::vector<std::uint8_t> ignored(n_img, 0);
    if (band == ImportanceBand::Random) {
        // partial Fisher-Yates over token indices
        std::vector<std::size_t> pool(n_img);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        std::mt19937 g(seed);
        for (std::size_t i = 0; i < ignore_count; ++i) {
            std::size_t j = i + uniform_below(g, n_img - i);
            std::swap(pool[i], pool[j]);
            ignored[pool[i]] = 1;
        }
    } else {
        std::vector<double> best = max_over_text_scores(sim);
        auto order = rank_descending(best);  // rank 0 = most important
        std::size_t band_begin = 0;
        switch (band) {
            case ImportanceBand::Important:
                band_begin = 0;
                break;
            case ImportanceBand::Unimportant:
                band_begin = n_img - ignore_count;
                break;
            case ImportanceBand::Intermediate:
                band_begin = (n_img - ignore_count) / 2;
                break;
            case ImportanceBand::Random:
                break;
        }
        for (std::size_t r = band_begin; r < band_begin + ignore_count; ++r) {
            ignored[order[r]] = 1;
        }
    }

    SimilaritySelection sel;
    sel.k_requested = n_img - ignore_count;
    sel.p_total = n_img * sim.n_usr();
    sel.strategy = SelectionStrategy::MaxOverText;
    for (std::size_t i = 0; i < n_img; ++i) {
        if (!ignored[i]) {
            sel.kept_image_indices.push_back(i);
        }
    }
    return sel;
}

TokenMask build_mask(const TokenSegmentation& seg,
                     std::span<const std::size_t> kept_image_indices) {
    std::vector<std::uint8_t> bits(seg.total(), 0);
    for (std::size_t i = 0; i < seg.n_sys(); ++i) {
        bits[i] = 1;
    }
    for (std::size_t i = seg.image_end(); i < seg.total(); ++i) {
        bits[i] = 1;
    }
    for (std::size_t i : kept_image_indices) {
        if (i >= seg.n_img()) {
            throw Error(Errc::IndexOutOfRange,
                        "kept image index " + std::to_string(i) + " outside [0, " +
                            std::to_string(seg.n_img()) + ")");
        }
        bits[seg.image_begin() + i] = 1;
    }
    return TokenMask(seg, std::move(bits));
}

const char* metric_name(Metric m) {
    switch (m) {
        case Metric::Cosine: return "cosine";
        case Metric::Euclidean: return "euclidean";
        case Metric::Manhattan: return "manhattan";
    }
    return "unknown";
}

const char* strategy_name(SelectionStrategy s) {
    switch (s) {
        case SelectionStrategy::FlatTopK: return "flat-topk";
        case SelectionStrategy::MaxOverText: return "max-over-text";
    }
    return "unknown";
}

}  // namespace simignore
