#pragma once

#include <cstdint>
#include <random>

namespace gksec {

/// All stochastic code draws from 64-bit Mersenne Twister streams.
using Rng = std::mt19937_64;

/// Independent stream `stream` of the family identified by `seed`.
/// Both words go through seed_seq mixing, so (seed, 0), (seed, 1), ...
/// and (seed + 1, 0) start from unrelated states.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x6b73ecU};
    return Rng(seq);
}

}  // namespace gksec
