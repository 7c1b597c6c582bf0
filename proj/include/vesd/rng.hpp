#pragma once

// Counter-based random streams.
//
// Every random quantity in the library is drawn from a Philox4x32-10 stream
// whose key and counter are derived from (master seed, dimension, replicate,
// role). Two draws with the same coordinates produce the same bits no matter
// which thread runs them or in what order.

#include <array>
#include <cstdint>
#include <limits>

namespace vesd {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// What a stream is used for. Vector streams are further split by law code.
enum class StreamRole : std::uint32_t {
    Matrix = 1,
    Vector = 2,
    Calibration = 3,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// UniformRandomBitGenerator over one Philox stream.
///
/// Counter words 0-1 enumerate blocks; words 2-3 hold the replicate and the
/// role tag. The key mixes the master seed with the sample dimension.
class StreamEngine {
public:
    using result_type = std::uint32_t;

    StreamEngine(std::uint64_t master_seed, std::uint64_t dimension, std::uint32_t replicate,
                 std::uint32_t role_tag) noexcept {
        const std::uint64_t k = splitmix64(master_seed ^ splitmix64(dimension + 0x5851F42D4C957F2Dull));
        key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
        replicate_ = replicate;
        role_ = role_tag;
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (pos_ == 4) {
            buffer_ = Philox4x32::block({static_cast<std::uint32_t>(block_),
                                         static_cast<std::uint32_t>(block_ >> 32), replicate_, role_},
                                        key_);
            ++block_;
            pos_ = 0;
        }
        return buffer_[pos_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept {
        const std::uint64_t hi = (*this)();
        const std::uint64_t lo = (*this)();
        return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
    }

    /// Uniform double in the open interval (0, 1).
    double uniform_open() noexcept {
        const std::uint64_t hi = (*this)();
        const std::uint64_t lo = (*this)();
        return (static_cast<double>(((hi << 32) | lo) >> 12) + 0.5) * 0x1.0p-52;
    }

private:
    Philox4x32::Key key_{};
    std::uint32_t replicate_ = 0;
    std::uint32_t role_ = 0;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int pos_ = 4;
};

inline constexpr std::uint32_t role_tag(StreamRole role, std::uint32_t sub = 0) noexcept {
    return (static_cast<std::uint32_t>(role) << 24) | (sub & 0x00FFFFFFu);
}

}  // namespace vesd
