#pragma once

#include <cstdint>

namespace gasvar {

/// Counter-based uniform generator: draw `i` of stream `stream` under `seed`
/// is a pure function of the triple, so draws can be produced in any order
/// or from any thread without changing the result.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

    [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix(key_ + mix(counter * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL));
    }

    /// Uniform on the open interval (0, 1).
    [[nodiscard]] constexpr double uniform(std::uint64_t counter) const noexcept {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    // SplitMix64 finalizer.
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
};

}  // namespace gasvar
