#pragma once

#include <cstdint>
#include <random>

namespace chronomix {

// splitmix64 step; used both as a seed scrambler and to derive named
// sub-streams from one master seed.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Deterministic sub-seed derivation: hash the (seed, tag...) path so that
// distinct tags give statistically unrelated streams. Chain calls to go
// deeper, e.g. derive_seed(derive_seed(master, rep), stream_tag).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) noexcept;

// Stream tags for one scenario realization.
enum class Stream : std::uint64_t {
    Chain = 0x636861696e,        // latent selection chain
    Gold = 0x676f6c64,           // AR(1) gold-standard path
    Poison = 0x706f69736f6e,     // i.i.d. poisoning draws
    RefMarginal = 0x7265666d,    // reference marginal sample
    RefPair = 0x72656670,        // reference consecutive-pair sample
};

// Seeded random stream with fully specified uniform and normal mappings, so
// that output is reproducible bit-for-bit for a given seed.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);
    RngStream(std::uint64_t seed, Stream stream);

    // Uniform on [0, 1) with 53 random bits.
    double uniform();

    // Standard normal via the Marsaglia polar method (one spare cached).
    double normal();

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace chronomix
