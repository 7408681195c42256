#include "simignore/embed_pipeline.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace simignore {

namespace {

std::pair<std::size_t, std::size_t> bin_bounds(std::size_t bin, std::size_t len, std::size_t bins) {
    return {bin * len / bins, (bin + 1) * len / bins};
}

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw Error(Errc::NonFiniteValue, std::string(what) + " contains NaN or Inf");
        }
    }
}

}  // namespace

FeatureMap::FeatureMap(std::size_t channels, std::size_t height, std::size_t width,
                       std::vector<double> data)
    : channels_(channels), height_(height), width_(width), data_(std::move(data)) {
    if (data_.size() != channels_ * height_ * width_) {
        throw Error(Errc::DimensionMismatch,
                    "feature map data length " + std::to_string(data_.size()) +
                        " != C*H*W = " + std::to_string(channels_ * height_ * width_));
    }
    require_finite(data_, "feature map");
}

AlignmentMap::AlignmentMap(std::size_t in_dim, std::size_t out_dim, std::vector<double> weights)
    : in_dim_(in_dim), out_dim_(out_dim), weights_(std::move(weights)) {
    if (weights_.size() != in_dim_ * out_dim_) {
        throw Error(Errc::DimensionMismatch,
                    "alignment weights length " + std::to_string(weights_.size()) +
                        " != I*T = " + std::to_string(in_dim_ * out_dim_));
    }
    require_finite(weights_, "alignment map");
}

EmbeddingMatrix adaptive_pool(const FeatureMap& fm, std::size_t n_img, std::size_t out_dim) {
    const std::size_t spatial = fm.height() * fm.width();
    if (fm.channels() == 0 || spatial == 0) {
        throw Error(Errc::EmptyFeatureMap, "feature map has no cells");
    }
    if (n_img == 0 || out_dim == 0) {
        throw Error(Errc::PoolBinEmpty, "pooling target shape must be at least 1x1");
    }
    if (n_img > spatial || out_dim > fm.channels()) {
        throw Error(Errc::PoolBinEmpty,
                    "pooling cannot upscale: requested " + std::to_string(n_img) + "x" +
                        std::to_string(out_dim) + " from " + std::to_string(fm.channels()) +
                        " channels x " + std::to_string(spatial) + " positions");
    }

    const auto& src = fm.data();
    std::vector<double> out(n_img * out_dim, 0.0);
    for (std::size_t t = 0; t < n_img; ++t) {
        auto [s0, s1] = bin_bounds(t, spatial, n_img);
        for (std::size_t f = 0; f < out_dim; ++f) {
            auto [c0, c1] = bin_bounds(f, fm.channels(), out_dim);
            double sum = 0.0;
            for (std::size_t c = c0; c < c1; ++c) {
                for (std::size_t s = s0; s < s1; ++s) {
                    sum += src[c * spatial + s];
                }
            }
            out[t * out_dim + f] = sum / static_cast<double>((c1 - c0) * (s1 - s0));
        }
    }
    return EmbeddingMatrix(n_img, out_dim, std::move(out));
}

EmbeddingMatrix feature_align(const EmbeddingMatrix& x, const AlignmentMap& map) {
    if (x.dim() != map.in_dim()) {
        throw Error(Errc::DimensionMismatch,
                    "embedding dim " + std::to_string(x.dim()) + " != alignment in_dim " +
                        std::to_string(map.in_dim()));
    }
    const std::size_t rows = x.rows();
    const std::size_t in_dim = map.in_dim();
    const std::size_t out_dim = map.out_dim();
    const auto& w = map.weights();
    std::vector<double> out(rows * out_dim, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < out_dim; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < in_dim; ++k) {
                acc += x.at(i, k) * w[k * out_dim + j];
            }
            out[i * out_dim + j] = acc;
        }
    }
    return EmbeddingMatrix(rows, out_dim, std::move(out));
}

RowNormalizeResult row_normalize(const EmbeddingMatrix& m) {
    std::vector<double> out(m.data());
    std::vector<std::size_t> zero_rows;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double sq = 0.0;
        for (std::size_t c = 0; c < m.dim(); ++c) {
            sq += m.at(r, c) * m.at(r, c);
        }
        if (sq == 0.0) {
            zero_rows.push_back(r);
            continue;
        }
        double norm = std::sqrt(sq);
        for (std::size_t c = 0; c < m.dim(); ++c) {
            out[r * m.dim() + c] = m.at(r, c) / norm;
        }
    }
    return {EmbeddingMatrix(m.rows(), m.dim(), std::move(out)), std::move(zero_rows)};
}

}  // namespace simignore
