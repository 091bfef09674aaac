#pragma once

#include <cstdint>
#include <random>

namespace telsim {

// SplitMix64 finalizer. Used to derive independent substream seeds from a
// master seed and a stream index, so results never depend on how trials are
// distributed across workers.
std::uint64_t mix64(std::uint64_t z);

// Substream seed for stream `index` under master `seed`.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index);

// Deterministic random stream.
//
// The engine is std::mt19937_64 (its output sequence is fully specified by
// the standard) and doubles are produced from the top 53 bits directly, so a
// given seed yields bit-identical values on every platform. Distributions
// from <random> are deliberately avoided: their mapping is
// implementation-defined.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    // Stream for trial `index` of a run started with `seed`.
    static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
        return RandomStream(derive_stream_seed(seed, index));
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (one spare value cached).
    double gaussian();

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace telsim
