#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "simignore/embed_pipeline.hpp"
#include "testutil.hpp"

using namespace simignore;

TEST_CASE("adaptive_pool: global mean when target is 1x1") {
    FeatureMap fm(1, 2, 2, {1.0, 2.0, 3.0, 4.0});
    EmbeddingMatrix out = adaptive_pool(fm, 1, 1);
    CHECK(out.rows() == 1);
    CHECK(out.dim() == 1);
    CHECK(out.at(0, 0) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("adaptive_pool: one bin per channel is the identity") {
    FeatureMap fm(2, 1, 1, {3.0, 5.0});
    EmbeddingMatrix out = adaptive_pool(fm, 1, 2);
    CHECK(out.at(0, 0) == 3.0);
    CHECK(out.at(0, 1) == 5.0);
}

TEST_CASE("adaptive_pool matches the bin-mean oracle on a seeded feature map") {
    // frozen from the nested-loop oracle: fm (4,3,3) seed-1, pooled to 2x2
    const double expected[4] = {
        -0.0054107084288261831,
        -0.10513952176552266,
        -0.13762162970378994,
        0.10273005529306829,
    };
    auto values = testutil::seeded_values(1, 4 * 3 * 3);
    FeatureMap fm(4, 3, 3, values);
    EmbeddingMatrix out = adaptive_pool(fm, 2, 2);
    auto reference = oracle::adaptive_pool(values, 4, 9, 2, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(out.data()[i] == doctest::Approx(expected[i]).epsilon(1e-12));
        CHECK(out.data()[i] == doctest::Approx(reference[i]).epsilon(1e-12));
    }
}

TEST_CASE("adaptive_pool rejects empty input and upscaling") {
    CHECK_THROWS_AS(adaptive_pool(FeatureMap(0, 0, 0, {}), 1, 1), Error);
    try {
        adaptive_pool(FeatureMap(0, 0, 0, {}), 1, 1);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::EmptyFeatureMap);
    }
    // more bins than source cells on either axis leaves an empty bin
    FeatureMap fm(1, 1, 2, {1.0, 2.0});
    CHECK_THROWS_AS(adaptive_pool(fm, 3, 1), Error);
    CHECK_THROWS_AS(adaptive_pool(fm, 1, 2), Error);
}

TEST_CASE("adaptive_pool preserves the global mean (property)") {
    for (std::uint32_t seed = 100; seed < 120; ++seed) {
        std::mt19937 g(seed);
        std::size_t c = 1 + testutil::uniform_index(g, 5);
        std::size_t h = 1 + testutil::uniform_index(g, 4);
        std::size_t w = 1 + testutil::uniform_index(g, 4);
        auto values = testutil::seeded_values(seed, c * h * w);
        FeatureMap fm(c, h, w, values);
        double mean = 0.0;
        for (double v : values) {
            mean += v;
        }
        mean /= static_cast<double>(values.size());
        EmbeddingMatrix out = adaptive_pool(fm, 1, 1);
        CHECK(out.at(0, 0) == doctest::Approx(mean).epsilon(1e-9));
    }
}

TEST_CASE("feature_align: identity and embedding maps") {
    EmbeddingMatrix x(2, 2, {1.0, 0.0, 0.0, 1.0});
    AlignmentMap identity(2, 2, {1.0, 0.0, 0.0, 1.0});
    EmbeddingMatrix out = feature_align(x, identity);
    CHECK(out.at(0, 0) == 1.0);
    CHECK(out.at(0, 1) == 0.0);
    CHECK(out.at(1, 0) == 0.0);
    CHECK(out.at(1, 1) == 1.0);

    EmbeddingMatrix row(1, 2, {1.0, 2.0});
    AlignmentMap widen(2, 3, {1.0, 0.0, 0.0, 0.0, 1.0, 0.0});
    EmbeddingMatrix wide = feature_align(row, widen);
    CHECK(wide.dim() == 3);
    CHECK(wide.at(0, 0) == 1.0);
    CHECK(wide.at(0, 1) == 2.0);
    CHECK(wide.at(0, 2) == 0.0);
}

TEST_CASE("feature_align matches the matrix-product oracle on seeded data") {
    // frozen from the nested-loop oracle: x 3x4 seed-2 times weights 4x2 seed-3
    const double expected[6] = {
        0.13999330188880932,  0.51939443669872576, 0.43630220541003817,
        0.61728491185212786, -0.038662578243814111, 0.05388345721295662,
    };
    auto xv = testutil::seeded_values(2, 12);
    auto wv = testutil::seeded_values(3, 8);
    EmbeddingMatrix x(3, 4, xv);
    AlignmentMap map(4, 2, wv);
    EmbeddingMatrix out = feature_align(x, map);
    auto reference = oracle::matmul(xv, 3, 4, wv, 2);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(out.data()[i] == doctest::Approx(expected[i]).epsilon(1e-12));
        CHECK(out.data()[i] == doctest::Approx(reference[i]).epsilon(1e-12));
    }
}

TEST_CASE("feature_align rejects dimension mismatch") {
    EmbeddingMatrix x(1, 3, {1.0, 2.0, 3.0});
    AlignmentMap map(2, 2, {1.0, 0.0, 0.0, 1.0});
    CHECK_THROWS_AS(feature_align(x, map), Error);
}

TEST_CASE("feature_align is linear (property)") {
    auto xs = testutil::seeded_values(200, 12);
    auto ys = testutil::seeded_values(201, 12);
    auto ws = testutil::seeded_values(202, 8);
    AlignmentMap map(4, 2, ws);
    std::mt19937 g(203);
    double a = testutil::symmetric_unit(g) * 3.0;
    double b = testutil::symmetric_unit(g) * 3.0;

    std::vector<double> combo(12);
    for (std::size_t i = 0; i < 12; ++i) {
        combo[i] = a * xs[i] + b * ys[i];
    }
    EmbeddingMatrix lhs = feature_align(EmbeddingMatrix(3, 4, combo), map);
    EmbeddingMatrix fx = feature_align(EmbeddingMatrix(3, 4, xs), map);
    EmbeddingMatrix fy = feature_align(EmbeddingMatrix(3, 4, ys), map);
    for (std::size_t i = 0; i < lhs.data().size(); ++i) {
        double rhs = a * fx.data()[i] + b * fy.data()[i];
        CHECK(lhs.data()[i] == doctest::Approx(rhs).epsilon(1e-6));
    }
}

TEST_CASE("row_normalize: analytic rows") {
    auto res = row_normalize(EmbeddingMatrix(1, 2, {3.0, 4.0}));
    CHECK(res.zero_norm_rows.empty());
    CHECK(res.normalized.at(0, 0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(res.normalized.at(0, 1) == doctest::Approx(0.8).epsilon(1e-12));

    auto two = row_normalize(EmbeddingMatrix(2, 2, {1.0, 1.0, 2.0, 0.0}));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(two.normalized.at(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(two.normalized.at(0, 1) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(two.normalized.at(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(two.normalized.at(1, 1) == 0.0);
}

TEST_CASE("row_normalize flags zero-norm rows instead of failing") {
    auto res = row_normalize(EmbeddingMatrix(2, 2, {0.0, 0.0, 1.0, 0.0}));
    REQUIRE(res.zero_norm_rows.size() == 1);
    CHECK(res.zero_norm_rows[0] == 0);
    CHECK(res.normalized.at(0, 0) == 0.0);
    CHECK(res.normalized.at(0, 1) == 0.0);
}

TEST_CASE("row_normalize: unit norms and idempotence (property)") {
    for (std::uint32_t seed = 300; seed < 320; ++seed) {
        std::mt19937 g(seed);
        std::size_t rows = 1 + testutil::uniform_index(g, 8);
        std::size_t dim = 1 + testutil::uniform_index(g, 6);
        EmbeddingMatrix m(rows, dim, testutil::seeded_values(seed, rows * dim));
        auto once = row_normalize(m);
        for (std::size_t r = 0; r < rows; ++r) {
            if (std::find(once.zero_norm_rows.begin(), once.zero_norm_rows.end(), r) !=
                once.zero_norm_rows.end()) {
                continue;
            }
            double sq = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                sq += once.normalized.at(r, c) * once.normalized.at(r, c);
            }
            CHECK(std::fabs(std::sqrt(sq) - 1.0) < 1e-6);
        }
        auto twice = row_normalize(once.normalized);
        for (std::size_t i = 0; i < twice.normalized.data().size(); ++i) {
            CHECK(std::fabs(twice.normalized.data()[i] - once.normalized.data()[i]) < 1e-9);
        }
    }
}
