#include "simignore/attention.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "simignore/parallel.hpp"

namespace simignore {

namespace {

void require_single_batch(const AttentionTensor& a) {
    if (a.batch() != 1) {
        throw Error(Errc::BatchNotOne,
                    "expected batch size 1, got " + std::to_string(a.batch()));
    }
}

// Aggregated query row per HeadAgg; length n_key.
std::vector<double> aggregate_query_row(const AttentionTensor& a, std::size_t query,
                                        HeadAgg agg) {
    require_single_batch(a);
    if (query >= a.n_query()) {
        throw Error(Errc::IndexOutOfRange,
                    "query index " + std::to_string(query) + " outside [0, " +
                        std::to_string(a.n_query()) + ")");
    }
    const std::size_t heads = a.heads();
    const std::size_t n_key = a.n_key();
    std::vector<double> row(n_key, 0.0);

    switch (agg.mode) {
        case HeadAgg::Mode::Mean:
            for (std::size_t h = 0; h < heads; ++h) {
                for (std::size_t k = 0; k < n_key; ++k) {
                    row[k] += a.at(0, h, query, k);
                }
            }
            for (auto& v : row) {
                v /= static_cast<double>(heads);
            }
            break;
        case HeadAgg::Mode::Max: {
            for (std::size_t k = 0; k < n_key; ++k) {
                row[k] = a.at(0, 0, query, k);
            }
            for (std::size_t h = 1; h < heads; ++h) {
                for (std::size_t k = 0; k < n_key; ++k) {
                    row[k] = std::max(row[k], a.at(0, h, query, k));
                }
            }
            double sum = 0.0;
            for (double v : row) {
                sum += v;
            }
            if (sum > 0.0) {
                for (auto& v : row) {
                    v /= sum;
                }
            }
            break;
        }
        case HeadAgg::Mode::PerHead:
            if (agg.head >= heads) {
                throw Error(Errc::IndexOutOfRange,
                            "head index " + std::to_string(agg.head) + " outside [0, " +
                                std::to_string(heads) + ")");
            }
            for (std::size_t k = 0; k < n_key; ++k) {
                row[k] = a.at(0, agg.head, query, k);
            }
            break;
    }
    return row;
}

}  // namespace

HeadAttention unsequence(const AttentionTensor& a) {
    require_single_batch(a);
    return HeadAttention{a.heads(), a.n_query(), a.n_key(), a.data()};
}

InfluenceSummary segment_shares(const AttentionTensor& a, const TokenSegmentation& seg,
                                std::size_t query, HeadAgg agg) {
    if (a.n_key() != seg.total()) {
        throw Error(Errc::SegmentationMismatch,
                    "key count " + std::to_string(a.n_key()) + " != segmented token count " +
                        std::to_string(seg.total()));
    }
    std::vector<double> row = aggregate_query_row(a, query, agg);

    InfluenceSummary out;
    for (std::size_t k = 0; k < seg.n_sys(); ++k) {
        out.sys_share += row[k];
    }
    out.per_image_scores.reserve(seg.n_img());
    for (std::size_t k = seg.image_begin(); k < seg.image_end(); ++k) {
        out.per_image_scores.push_back(row[k]);
        out.img_share += row[k];
    }
    for (std::size_t k = seg.image_end(); k < seg.total(); ++k) {
        out.usr_share += row[k];
    }
    return out;
}

HeatGrid influence_heatmap(const AttentionTensor& a, const TokenSegmentation& seg,
                           std::size_t query, HeadAgg agg) {
    std::size_t side = 0;
    while (side * side < seg.n_img()) {
        ++side;
    }
    if (side * side != seg.n_img()) {
        throw Error(Errc::NotPerfectSquare,
                    "image-token count " + std::to_string(seg.n_img()) +
                        " is not a perfect square");
    }
    InfluenceSummary summary = segment_shares(a, seg, query, agg);
    return HeatGrid{side, std::move(summary.per_image_scores), query, agg};
}

AttentionTensor masked_renormalize(const AttentionTensor& a, const TokenMask& mask,
                                   std::vector<std::size_t>* degenerate_rows) {
    if (mask.size() != a.n_key()) {
        throw Error(Errc::LengthMismatch,
                    "mask length " + std::to_string(mask.size()) + " != key count " +
                        std::to_string(a.n_key()));
    }
    const std::size_t rows = a.batch() * a.heads() * a.n_query();
    const std::size_t n_key = a.n_key();
    const auto& bits = mask.bits();
    std::vector<double> out(a.data().size(), 0.0);
    std::vector<std::uint8_t> degenerate(rows, 0);

    detail::parallel_for(rows, [&](std::size_t r) {
        const double* src = a.data().data() + r * n_key;
        double* dst = out.data() + r * n_key;
        double sum = 0.0;
        for (std::size_t k = 0; k < n_key; ++k) {
            if (bits[k]) {
                sum += src[k];
            }
        }
        if (sum == 0.0) {
            degenerate[r] = 1;
            return;  // row left all-zero, reported not divided
        }
        for (std::size_t k = 0; k < n_key; ++k) {
            if (bits[k]) {
                dst[k] = src[k] / sum;
            }
        }
    });

    if (degenerate_rows != nullptr) {
        degenerate_rows->clear();
        for (std::size_t r = 0; r < rows; ++r) {
            if (degenerate[r]) {
                degenerate_rows->push_back(r);
            }
        }
    }
    return AttentionTensor(a.batch(), a.heads(), a.n_query(), a.n_key(), std::move(out));
}

MaskedPassReport simulate_masked_pass(const AttentionTensor& a, const TokenMask& mask) {
    MaskedPassReport report;
    AttentionTensor renorm = masked_renormalize(a, mask, &report.degenerate_rows);

    report.active_key_count = mask.popcount();
    report.multiply_accumulate_count =
        static_cast<std::uint64_t>(a.batch()) * a.heads() * a.n_query() *
        report.active_key_count;

    const std::size_t rows = a.batch() * a.heads() * a.n_query();
    const std::size_t n_key = a.n_key();
    double checksum = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < n_key; ++k) {
            checksum += renorm.data()[r * n_key + k] * static_cast<double>(k + 1);
        }
    }
    report.renormalized_row_checksum = checksum;
    return report;
}

}  // namespace simignore
