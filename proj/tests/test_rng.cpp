#include <gtest/gtest.h>

#include <set>

#include "vesd/rng.hpp"

using vesd::Philox4x32;
using vesd::StreamEngine;

// Known-answer vectors for Philox4x32-10 (Random123 distribution).
TEST(Philox, KnownAnswerZero) {
    const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
    const auto out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                       {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
    const auto out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                       {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(StreamEngine, SameCoordinatesSameBits) {
    StreamEngine a(7, 100, 3, vesd::role_tag(vesd::StreamRole::Matrix));
    StreamEngine b(7, 100, 3, vesd::role_tag(vesd::StreamRole::Matrix));
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(StreamEngine, CoordinatesSeparateStreams) {
    const auto first = [](std::uint64_t seed, std::uint64_t dim, std::uint32_t rep, std::uint32_t role) {
        StreamEngine e(seed, dim, rep, role);
        return (std::uint64_t{e()} << 32) | e();
    };
    std::set<std::uint64_t> seen;
    const auto m = vesd::role_tag(vesd::StreamRole::Matrix);
    const auto v = vesd::role_tag(vesd::StreamRole::Vector, 1);
    seen.insert(first(1, 50, 0, m));
    seen.insert(first(2, 50, 0, m));
    seen.insert(first(1, 51, 0, m));
    seen.insert(first(1, 50, 1, m));
    seen.insert(first(1, 50, 0, v));
    EXPECT_EQ(seen.size(), 5u);
}

TEST(StreamEngine, UniformRanges) {
    StreamEngine e(1, 1, 0, 0);
    double sum = 0.0;
    const int count = 200000;
    for (int i = 0; i < count; ++i) {
        const double u = e.uniform();
        const double o = e.uniform_open();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_GT(o, 0.0);
        ASSERT_LT(o, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / count, 0.5, 0.005);
}
