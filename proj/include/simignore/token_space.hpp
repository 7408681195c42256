#pragma once

// Token-sequence partition and the validated core tensors shared by every
// other module. All types are immutable after construction.

#include <cstddef>
#include <span>
#include <vector>

#include "simignore/errors.hpp"

namespace simignore {

enum class Segment { System, Image, User };

// Partition of a token sequence into system / image / user index ranges.
// All indices are 0-based; ranges are half-open: system [0, n_sys),
// image [n_sys, n_sys + n_img), user [n_sys + n_img, total()).
class TokenSegmentation {
public:
    TokenSegmentation(std::size_t n_sys, std::size_t n_img, std::size_t n_usr);

    std::size_t n_sys() const noexcept { return n_sys_; }
    std::size_t n_img() const noexcept { return n_img_; }
    std::size_t n_usr() const noexcept { return n_usr_; }
    std::size_t total() const noexcept { return n_sys_ + n_img_ + n_usr_; }

    std::size_t image_begin() const noexcept { return n_sys_; }
    std::size_t image_end() const noexcept { return n_sys_ + n_img_; }

    Segment segment_of(std::size_t index) const;

    bool operator==(const TokenSegmentation&) const = default;

private:
    std::size_t n_sys_;
    std::size_t n_img_;
    std::size_t n_usr_;
};

// Row-major matrix of token embeddings. Rejects NaN/Inf at construction so
// downstream math can assume finiteness.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<double> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<double>& data() const noexcept { return data_; }

    double at(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * dim_, dim_};
    }

private:
    std::size_t rows_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

// (batch, heads, n_query, n_key) attention-weight tensor; every value must be
// finite and in [0, 1].
class AttentionTensor {
public:
    AttentionTensor(std::size_t batch, std::size_t heads, std::size_t n_query,
                    std::size_t n_key, std::vector<double> data);

    std::size_t batch() const noexcept { return batch_; }
    std::size_t heads() const noexcept { return heads_; }
    std::size_t n_query() const noexcept { return n_query_; }
    std::size_t n_key() const noexcept { return n_key_; }
    const std::vector<double>& data() const noexcept { return data_; }

    double at(std::size_t b, std::size_t h, std::size_t q, std::size_t k) const {
        return data_[((b * heads_ + h) * n_query_ + q) * n_key_ + k];
    }

private:
    std::size_t batch_;
    std::size_t heads_;
    std::size_t n_query_;
    std::size_t n_key_;
    std::vector<double> data_;
};

}  // namespace simignore
