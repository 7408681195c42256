#pragma once

// Minimal binary tensor container, v1:
//
//   offset  size        field
//   0       4           magic "SIGT"
//   4       4           version, uint32 little-endian, = 1
//   8       4           ndim, uint32 little-endian
//   12      8 * ndim    dims, uint64 little-endian each
//   ...     4 * prod    payload, row-major IEEE-754 binary32 little-endian
//
// The payload length must match the header exactly; round trips are bit-exact
// for every finite binary32 value including signed zeros and subnormals.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "simignore/attention.hpp"
#include "simignore/embed_pipeline.hpp"
#include "simignore/select.hpp"
#include "simignore/token_space.hpp"

namespace simignore::io {

struct Tensor {
    std::vector<std::uint64_t> dims;
    std::vector<float> data;  // row-major

    std::size_t element_count() const {
        std::size_t n = 1;
        for (auto d : dims) {
            n *= static_cast<std::size_t>(d);
        }
        return n;
    }
};

Tensor read_tensor(const std::filesystem::path& path);
void write_tensor(const Tensor& tensor, const std::filesystem::path& path);

// Shape-checked conversions between the file container and the domain types.
EmbeddingMatrix to_embedding(const Tensor& t);    // requires ndim == 2
FeatureMap to_feature_map(const Tensor& t);       // requires ndim == 3
AlignmentMap to_alignment(const Tensor& t);       // requires ndim == 2
AttentionTensor to_attention(const Tensor& t);    // requires ndim == 4

Tensor from_embedding(const EmbeddingMatrix& m);
Tensor from_mask(const TokenMask& mask);          // 1-D of 0.0 / 1.0

}  // namespace simignore::io
