#pragma once

// Shape pipeline from an encoder feature map to text-dimension-aligned image
// embeddings. The vision encoder itself is external: callers supply either
// its output feature map or final embeddings.

#include <cstddef>
#include <vector>

#include "simignore/token_space.hpp"

namespace simignore {

// Encoder output of shape (channels, height, width), row-major.
class FeatureMap {
public:
    FeatureMap(std::size_t channels, std::size_t height, std::size_t width,
               std::vector<double> data);

    std::size_t channels() const noexcept { return channels_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    const std::vector<double>& data() const noexcept { return data_; }

private:
    std::size_t channels_;
    std::size_t height_;
    std::size_t width_;
    std::vector<double> data_;
};

// Caller-supplied linear projection from image feature dim I to text dim T.
class AlignmentMap {
public:
    AlignmentMap(std::size_t in_dim, std::size_t out_dim, std::vector<double> weights);

    std::size_t in_dim() const noexcept { return in_dim_; }
    std::size_t out_dim() const noexcept { return out_dim_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

private:
    std::size_t in_dim_;
    std::size_t out_dim_;
    std::vector<double> weights_;
};

// Adaptive average pooling: spatial positions (height*width, row-major) fall
// into n_img even bins, channels into out_dim even bins; each output cell is
// the mean of its bin block. Bin b of n over length L is
// [floor(b*L/n), floor((b+1)*L/n)); an empty bin (requested more bins than
// source cells) is rejected with PoolBinEmpty.
EmbeddingMatrix adaptive_pool(const FeatureMap& fm, std::size_t n_img, std::size_t out_dim);

// x (rows x I) times weights (I x T) -> rows x T.
EmbeddingMatrix feature_align(const EmbeddingMatrix& x, const AlignmentMap& map);

struct RowNormalizeResult {
    EmbeddingMatrix normalized;
    std::vector<std::size_t> zero_norm_rows;  // left all-zero, flagged for callers
};

// Scales each row to unit Euclidean norm. Zero-norm rows stay zero and are
// flagged rather than rejected (padding tokens produce them legitimately).
RowNormalizeResult row_normalize(const EmbeddingMatrix& m);

}  // namespace simignore
