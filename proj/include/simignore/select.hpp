#pragma once

// Core token selection: image-text similarity matrix, top-K selection of the
// most text-relevant image tokens, importance-band variants, and the final
// attention mask over the full token sequence.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "simignore/token_space.hpp"

namespace simignore {

enum class Metric { Cosine, Euclidean, Manhattan };

// FlatTopK takes the top keep_budget cells of the flattened matrix and
// deduplicates their image indices (may keep fewer than keep_budget tokens).
// MaxOverText scores each image token by its best similarity over all text
// tokens and keeps exactly keep_budget distinct tokens.
enum class SelectionStrategy { FlatTopK, MaxOverText };

enum class ImportanceBand { Unimportant, Intermediate, Important, Random };

class SimilarityMatrix {
public:
    SimilarityMatrix(std::size_t n_img, std::size_t n_usr, Metric metric,
                     std::vector<double> data);

    std::size_t n_img() const noexcept { return n_img_; }
    std::size_t n_usr() const noexcept { return n_usr_; }
    Metric metric() const noexcept { return metric_; }
    const std::vector<double>& data() const noexcept { return data_; }

    double at(std::size_t i, std::size_t j) const { return data_[i * n_usr_ + j]; }

private:
    std::size_t n_img_;
    std::size_t n_usr_;
    Metric metric_;
    std::vector<double> data_;
};

struct SimilaritySelection {
    // Selected flat-matrix positions, descending similarity. For MaxOverText
    // this is each kept token's best cell; empty for band selections.
    std::vector<std::size_t> flat_indices;
    // Distinct image-token indices (0-based within the image segment), in
    // order of first selection.
    std::vector<std::size_t> kept_image_indices;
    std::size_t k_requested = 0;
    std::size_t p_total = 0;
    SelectionStrategy strategy = SelectionStrategy::MaxOverText;
};

// Binary per-token attention mask; system and user positions are always 1.
class TokenMask {
public:
    TokenMask(TokenSegmentation seg, std::vector<std::uint8_t> bits);

    const TokenSegmentation& seg() const noexcept { return seg_; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    std::size_t size() const noexcept { return bits_.size(); }
    bool bit(std::size_t i) const { return bits_[i] != 0; }
    std::size_t popcount() const;

private:
    TokenSegmentation seg_;
    std::vector<std::uint8_t> bits_;
};

// Pairwise similarity, higher = more similar for every metric: Cosine is the
// dot product of unit rows (zero-norm rows score 0), Euclidean and Manhattan
// are negated distances.
SimilarityMatrix similarity_matrix(const EmbeddingMatrix& img, const EmbeddingMatrix& txt,
                                   Metric metric);

// Row-major flattening; cell p corresponds to (p / n_usr, p % n_usr).
std::vector<double> flatten(const SimilarityMatrix& s);

// Positions of the k largest values, descending value, ties by ascending
// position.
std::vector<std::size_t> topk_flat_indices(std::span<const double> flat, std::size_t k);

// Maps flat positions to image-token indices (p / n_usr), collapsing
// duplicates and keeping the first (highest-similarity) occurrence.
std::vector<std::size_t> map_to_image_indices(std::span<const std::size_t> flat_indices,
                                              std::size_t n_usr, std::size_t n_img);

// Per-image-token relevance: max over text tokens of S(i, j).
std::vector<double> max_over_text_scores(const SimilarityMatrix& s);

SimilaritySelection select_tokens(const EmbeddingMatrix& img, const EmbeddingMatrix& txt,
                                  Metric metric, std::size_t keep_budget,
                                  SelectionStrategy strategy);

// Table-style ablation: rank image tokens by MaxOverText score (descending)
// and ignore a band of ignore_count tokens — the top (Important), the bottom
// (Unimportant), a centered contiguous rank band (Intermediate), or a seeded
// uniform sample (Random). Kept tokens are the complement, ascending index.
SimilaritySelection importance_band_selection(const EmbeddingMatrix& img,
                                              const EmbeddingMatrix& txt, Metric metric,
                                              ImportanceBand band, std::size_t ignore_count,
                                              std::uint32_t seed);

// Mask with 1 for all system and user positions and for kept image tokens;
// 0 for every other image position.
TokenMask build_mask(const TokenSegmentation& seg,
                     std::span<const std::size_t> kept_image_indices);

const char* metric_name(Metric m);
const char* strategy_name(SelectionStrategy s);

}  // namespace simignore
