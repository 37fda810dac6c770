#pragma once

#include <cstdint>

namespace fcomp::rng {

/// SplitMix64 finalizer; bijective 64-bit mixer.
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Folds a word into a key; chains of derive() build hierarchical streams
/// (seed -> run -> setting -> shot) without any sequential state, so samples
/// are independent of evaluation order and thread partitioning.
inline uint64_t derive(uint64_t key, uint64_t word) {
    return mix64(key ^ (0xD1342543DE82EF95ULL * (word + 1)));
}

inline double to_unit(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53; // [0, 1)
}

/// Uniform in [0,1) for one (key, index) pair; stateless.
inline double unit_at(uint64_t key, uint64_t index) {
    return to_unit(mix64(key + 0x9E3779B97F4A7C15ULL * index));
}

/// Sequential generator over one derived stream, for samplers that consume
/// a variable number of uniforms (e.g. Poisson totals).
class Stream {
public:
    explicit Stream(uint64_t key) : key_(key) {}
    double next_unit() { return unit_at(key_, counter_++); }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

/// Poisson sample with mean lambda. Inversion by sequential search for small
/// means, Hormann's PTRD transformed-rejection sampler otherwise.
uint64_t poisson(Stream& stream, double lambda);

} // namespace fcomp::rng
