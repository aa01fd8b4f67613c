#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace tailwarn {

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11).
/// The 128-bit key is (master_seed, stream_index) so distinct streams never
/// overlap; the counter is the block index.
class Philox4x64 {
public:
    using Block = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;

    static constexpr std::string_view name = "philox4x64-10";

    static constexpr Block generate(Block ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

    static constexpr void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                                  std::uint64_t& lo) noexcept {
        __extension__ using u128 = unsigned __int128;
        const u128 p = static_cast<u128>(a) * b;
        hi = static_cast<std::uint64_t>(p >> 64);
        lo = static_cast<std::uint64_t>(p);
    }

    static constexpr Block single_round(const Block& c, const Key& k) noexcept {
        std::uint64_t hi0 = 0, lo0 = 0, hi1 = 0, lo1 = 0;
        mulhilo(kM0, c[0], hi0, lo0);
        mulhilo(kM1, c[2], hi1, lo1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// A reproducible random stream identified by (master_seed, stream_index).
/// Satisfies UniformRandomBitGenerator. Not thread-safe; one stream per task.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
        : key_{master_seed, stream_index} {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (pos_ == 4) {
            buffer_ = Philox4x64::generate({block_, 0, 0, 0}, key_);
            ++block_;
            pos_ = 0;
        }
        return buffer_[pos_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    std::uint64_t master_seed() const noexcept { return key_[0]; }
    std::uint64_t stream_index() const noexcept { return key_[1]; }

private:
    Philox4x64::Key key_;
    Philox4x64::Block buffer_{};
    std::uint64_t block_ = 0;
    int pos_ = 4;
};

}  // namespace tailwarn
