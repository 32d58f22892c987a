#pragma once

#include <array>
#include <cstdint>

namespace ferro {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

/// Inverse standard normal CDF: Acklam's rational approximation plus one Halley step.
double inverse_normal_cdf(double p);

/// SplitMix64 finalizer, used to derive member seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t member);

/// Stateless generator: every draw is a pure function of (seed, stream, index).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)} {}

    std::array<std::uint32_t, 4> block(std::uint64_t stream, std::uint64_t index) const
    {
        return philox4x32({std::uint32_t(index), std::uint32_t(index >> 32), std::uint32_t(stream),
                           std::uint32_t(stream >> 32)},
                          key_);
    }
    /// Uniform on (0, 1), 53-bit resolution, never 0 or 1.
    double uniform(std::uint64_t stream, std::uint64_t index) const;
    double normal(std::uint64_t stream, std::uint64_t index) const { return inverse_normal_cdf(uniform(stream, index)); }

private:
    std::array<std::uint32_t, 2> key_;
};

/// Sequential view of one stream.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) : rng_(seed), stream_(stream) {}
    double uniform() { return rng_.uniform(stream_, next_++); }
    double normal() { return rng_.normal(stream_, next_++); }

private:
    CounterRng rng_;
    std::uint64_t stream_;
    std::uint64_t next_ = 0;
};

}  // namespace ferro
