#include <doctest.h>

#include <cmath>
#include <limits>

#include "simignore/token_space.hpp"
#include "testutil.hpp"

using namespace simignore;

TEST_CASE("segmentation partitions the paper-scale layout") {
    TokenSegmentation seg(35, 576, 40);
    CHECK(seg.total() == 651);
    CHECK(seg.image_begin() == 35);
    CHECK(seg.image_end() == 611);
}

TEST_CASE("segmentation handles the minimal and small layouts") {
    TokenSegmentation minimal(0, 1, 1);
    CHECK(minimal.image_begin() == 0);
    CHECK(minimal.image_end() == 1);
    CHECK(minimal.total() == 2);
    CHECK(minimal.segment_of(0) == Segment::Image);
    CHECK(minimal.segment_of(1) == Segment::User);

    TokenSegmentation small(3, 4, 3);
    CHECK(small.total() == 10);
    CHECK(small.segment_of(2) == Segment::System);
    CHECK(small.segment_of(3) == Segment::Image);
    CHECK(small.segment_of(6) == Segment::Image);
    CHECK(small.segment_of(7) == Segment::User);
}

TEST_CASE("segmentation rejects empty image or user populations") {
    CHECK_THROWS_WITH_AS(TokenSegmentation(3, 0, 3), doctest::Contains("image"), Error);
    CHECK_THROWS_AS(TokenSegmentation(3, 4, 0), Error);
    try {
        TokenSegmentation(3, 0, 3);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ZeroImageTokens);
    }
    try {
        TokenSegmentation(3, 4, 0);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ZeroUserTokens);
    }
}

TEST_CASE("segment_of resolves the boundary indices") {
    TokenSegmentation seg(35, 576, 40);
    CHECK(seg.segment_of(34) == Segment::System);
    CHECK(seg.segment_of(35) == Segment::Image);
    CHECK(seg.segment_of(610) == Segment::Image);
    CHECK(seg.segment_of(611) == Segment::User);
    CHECK_THROWS_AS(seg.segment_of(651), Error);
}

TEST_CASE("segment labels over the full range count back to the partition") {
    std::mt19937 g(42);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n_sys = testutil::uniform_index(g, 10);
        std::size_t n_img = 1 + testutil::uniform_index(g, 20);
        std::size_t n_usr = 1 + testutil::uniform_index(g, 10);
        TokenSegmentation seg(n_sys, n_img, n_usr);
        CHECK(seg.total() == n_sys + n_img + n_usr);
        std::size_t counts[3] = {0, 0, 0};
        for (std::size_t i = 0; i < seg.total(); ++i) {
            counts[static_cast<int>(seg.segment_of(i))] += 1;
        }
        CHECK(counts[0] == n_sys);
        CHECK(counts[1] == n_img);
        CHECK(counts[2] == n_usr);
    }
}

TEST_CASE("embedding matrix rejects NaN and Inf at construction") {
    CHECK_NOTHROW(EmbeddingMatrix(2, 2, {1.0, 2.0, 3.0, 4.0}));
    CHECK_THROWS_AS(EmbeddingMatrix(1, 2, {1.0, std::nan("")}), Error);
    CHECK_THROWS_AS(EmbeddingMatrix(1, 2, {std::numeric_limits<double>::infinity(), 0.0}), Error);
    CHECK_THROWS_AS(EmbeddingMatrix(2, 2, {1.0, 2.0, 3.0}), Error);
}

TEST_CASE("attention tensor validates range and shape") {
    CHECK_NOTHROW(AttentionTensor(1, 1, 2, 2, {0.5, 0.5, 1.0, 0.0}));
    CHECK_THROWS_AS(AttentionTensor(1, 1, 1, 2, {0.5, 1.5}), Error);
    CHECK_THROWS_AS(AttentionTensor(1, 1, 1, 2, {-0.1, 0.5}), Error);
    CHECK_THROWS_AS(AttentionTensor(1, 1, 1, 2, {0.5}), Error);
    try {
        AttentionTensor(1, 1, 1, 2, {0.5, 1.5});
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ValueOutOfRange);
    }
}
