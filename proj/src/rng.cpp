#include "chronomix/rng.hpp"

#include <cmath>

namespace chronomix {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) noexcept {
    std::uint64_t s = base;
    std::uint64_t mixed = splitmix64(s);
    s = mixed ^ (tag * 0x9e3779b97f4a7c15ULL);
    return splitmix64(s);
}

RngStream::RngStream(std::uint64_t seed) : engine_(seed) {}

RngStream::RngStream(std::uint64_t seed, Stream stream)
    : engine_(derive_seed(seed, static_cast<std::uint64_t>(stream))) {}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

}  // namespace chronomix
