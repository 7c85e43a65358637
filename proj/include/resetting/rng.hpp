#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11) and the
// per-trajectory stream built on it. Each trajectory owns the counter space
// (draw index, trajectory id) under a key derived from the seed, so results
// do not depend on how trajectories are scheduled across threads.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace resetting {

struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t M0 = 0xD2511F53u;
    static constexpr std::uint32_t M1 = 0xCD9E8D57u;
    static constexpr std::uint32_t W0 = 0x9E3779B9u;
    static constexpr std::uint32_t W1 = 0xBB67AE85u;

    static constexpr Counter generate(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += W0;
            key[1] += W1;
        }
        return ctr;
    }
};

/// Random stream for one trajectory. An antithetic stream replays the same
/// raw draws with uniforms reflected (u -> 1 - u) and normals negated.
class TrajectoryStream {
public:
    TrajectoryStream(std::uint64_t seed, std::uint64_t trajectory, bool antithetic = false) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          trajectory_(trajectory),
          antithetic_(antithetic) {}

    std::uint64_t next_u64() noexcept {
        if (buffered_ == 0) refill();
        return buffer_[--buffered_];
    }

    /// Uniform on the open interval (0, 1), 53 bits.
    double uniform() noexcept {
        const std::uint64_t bits = next_u64() >> 11;
        return (static_cast<double>(antithetic_ ? (kMask53 - bits) : bits) + 0.5) * 0x1.0p-53;
    }

    double standard_normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return antithetic_ ? -spare_ : spare_;
        }
        const double u1 = raw_uniform();
        const double u2 = raw_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        const double z = radius * std::cos(angle);
        return antithetic_ ? -z : z;
    }

    double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

private:
    static constexpr std::uint64_t kMask53 = (std::uint64_t{1} << 53) - 1;

    double raw_uniform() noexcept { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    void refill() noexcept {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                      static_cast<std::uint32_t>(trajectory_),
                                      static_cast<std::uint32_t>(trajectory_ >> 32)};
        const auto out = Philox4x32::generate(ctr, key_);
        ++block_;
        // Stored in reverse so that draws come out in block order.
        buffer_[1] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        buffer_[0] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        buffered_ = 2;
    }

    Philox4x32::Key key_;
    std::uint64_t trajectory_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
    bool antithetic_;
};

} // namespace resetting
