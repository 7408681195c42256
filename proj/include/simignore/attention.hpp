#pragma once

// Segment-wise attention shares, per-image influence heat maps, and a
// simulated masked-attention pass for compute accounting.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "simignore/select.hpp"
#include "simignore/token_space.hpp"

namespace simignore {

// How the head axis is collapsed before a query row is analyzed. Mean is the
// arithmetic mean over heads; Max takes the element-wise max and re-normalizes
// the row to sum 1; PerHead picks one head with no re-normalization.
struct HeadAgg {
    enum class Mode { Mean, Max, PerHead };

    Mode mode = Mode::Mean;
    std::size_t head = 0;

    static HeadAgg mean() { return {Mode::Mean, 0}; }
    static HeadAgg max() { return {Mode::Max, 0}; }
    static HeadAgg per_head(std::size_t h) { return {Mode::PerHead, h}; }
};

// Attention stack with the batch dimension squeezed away: (heads, n_query, n_key).
struct HeadAttention {
    std::size_t heads = 0;
    std::size_t n_query = 0;
    std::size_t n_key = 0;
    std::vector<double> data;

    double at(std::size_t h, std::size_t q, std::size_t k) const {
        return data[(h * n_query + q) * n_key + k];
    }
};

struct InfluenceSummary {
    double sys_share = 0.0;
    double img_share = 0.0;  // lambda_img
    double usr_share = 0.0;
    std::vector<double> per_image_scores;
};

struct HeatGrid {
    std::size_t side = 0;
    std::vector<double> values;  // side*side, row-major
    std::size_t source_query = 0;
    HeadAgg head_agg;

    double at(std::size_t r, std::size_t c) const { return values[r * side + c]; }
};

struct MaskedPassReport {
    std::size_t active_key_count = 0;               // surviving keys per query row
    std::uint64_t multiply_accumulate_count = 0;    // B*H*Q*active_key_count
    double renormalized_row_checksum = 0.0;         // sum of renorm(k)*(k+1) over all rows
    std::vector<std::size_t> degenerate_rows;       // flat (b*H + h)*Q + q ids with no surviving mass
};

// Removes the batch dimension; requires batch == 1.
HeadAttention unsequence(const AttentionTensor& a);

// Sums the aggregated query row over each segment's key range.
InfluenceSummary segment_shares(const AttentionTensor& a, const TokenSegmentation& seg,
                                std::size_t query, HeadAgg agg);

// Reshapes the query row's per-image scores into a sqrt(n_img) square grid.
HeatGrid influence_heatmap(const AttentionTensor& a, const TokenSegmentation& seg,
                           std::size_t query, HeadAgg agg);

// Zeroes masked key columns and re-normalizes each query row over the
// surviving keys; rows left without mass are zeroed and flagged.
AttentionTensor masked_renormalize(const AttentionTensor& a, const TokenMask& mask,
                                   std::vector<std::size_t>* degenerate_rows = nullptr);

MaskedPassReport simulate_masked_pass(const AttentionTensor& a, const TokenMask& mask);

}  // namespace simignore
