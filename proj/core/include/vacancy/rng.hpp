#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string_view>

namespace vacancy {

/// Philox4x32-10 keyed counter permutation (Salmon et al., Random123 family).
/// 128-bit counter, 64-bit key: every draw is a pure function of
/// (key, counter), which is what makes replicate-level parallelism and the
/// refine/thin couplings reproducible regardless of scheduling.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        constexpr std::uint32_t kMul0 = 0xD2511F53u;
        constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
        constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

/// Sequential stream view over the Philox permutation: a 64-bit seed is the
/// key, the 128-bit counter advances one block per four 32-bit outputs.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)} {}

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            buffer_ = Philox4x32::block(counter_, key_);
            bump_counter();
            pos_ = 0;
        }
        return buffer_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Exact Poisson sample. Knuth's product method, split into chunks of
    /// mean <= 32 so the running product never underflows; the sum of
    /// independent Poissons with the chunk means is Poisson with the total.
    std::int64_t poisson(double mean);

  private:
    void bump_counter() {
        for (int i = 0; i < 4; ++i) {
            if (++counter_[i] != 0) break;
        }
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_{0, 0, 0, 0};
    std::array<std::uint32_t, 4> buffer_{};
    int pos_ = 4;
};

/// FNV-1a 64 over a byte stream; the published hash used to derive child
/// seeds for refinement, thinning and replicate streams.
class SeedHash {
  public:
    SeedHash& mix(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            step(static_cast<unsigned char>(v >> (8 * i)));
        }
        return *this;
    }
    SeedHash& mix(std::string_view tag) {
        for (const char c : tag) step(static_cast<unsigned char>(c));
        return *this;
    }
    SeedHash& mix_double(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        return mix(bits);
    }
    std::uint64_t value() const { return state_; }

  private:
    void step(unsigned char byte) {
        state_ ^= byte;
        state_ *= 0x100000001B3ull;
    }
    std::uint64_t state_ = 0xCBF29CE484222325ull;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                                 std::uint64_t param) {
    return SeedHash{}.mix(seed).mix(tag).mix(param).value();
}

} // namespace vacancy
