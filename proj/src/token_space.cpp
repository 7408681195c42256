#include "simignore/token_space.hpp"

#include <cmath>
#include <string>

namespace simignore {

TokenSegmentation::TokenSegmentation(std::size_t n_sys, std::size_t n_img, std::size_t n_usr)
    : n_sys_(n_sys), n_img_(n_img), n_usr_(n_usr) {
    if (n_img == 0) {
        throw Error(Errc::ZeroImageTokens, "segmentation requires at least one image token");
    }
    if (n_usr == 0) {
        throw Error(Errc::ZeroUserTokens, "segmentation requires at least one user token");
    }
}

Segment TokenSegmentation::segment_of(std::size_t index) const {
    if (index >= total()) {
        throw Error(Errc::IndexOutOfRange,
                    "token index " + std::to_string(index) + " outside [0, " +
                        std::to_string(total()) + ")");
    }
    if (index < n_sys_) {
        return Segment::System;
    }
    if (index < n_sys_ + n_img_) {
        return Segment::Image;
    }
    return Segment::User;
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<double> data)
    : rows_(rows), dim_(dim), data_(std::move(data)) {
    if (data_.size() != rows_ * dim_) {
        throw Error(Errc::DimensionMismatch,
                    "embedding data length " + std::to_string(data_.size()) +
                        " != rows*dim = " + std::to_string(rows_ * dim_));
    }
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw Error(Errc::NonFiniteValue, "embedding matrix contains NaN or Inf");
        }
    }
}

AttentionTensor::AttentionTensor(std::size_t batch, std::size_t heads, std::size_t n_query,
                                 std::size_t n_key, std::vector<double> data)
    : batch_(batch), heads_(heads), n_query_(n_query), n_key_(n_key), data_(std::move(data)) {
    if (data_.size() != batch_ * heads_ * n_query_ * n_key_) {
        throw Error(Errc::DimensionMismatch,
                    "attention data length " + std::to_string(data_.size()) +
                        " != B*H*Q*K = " + std::to_string(batch_ * heads_ * n_query_ * n_key_));
    }
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw Error(Errc::NonFiniteValue, "attention tensor contains NaN or Inf");
        }
        if (v < 0.0 || v > 1.0) {
            throw Error(Errc::ValueOutOfRange, "attention weight outside [0, 1]");
        }
    }
}

}  // namespace simignore
