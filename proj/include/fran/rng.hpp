#pragma once

#include <cstdint>
#include <random>

namespace fran
{

using Rng = std::mt19937_64;

/// SplitMix64 finaliser; decorrelates nearby seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
	z += 0x9e3779b97f4a7c15ULL;
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

/// Seed of the independent stream `index` under `master`. Trial i of a Monte
/// Carlo run always draws from stream_seed(master, i), whatever the thread.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept
{
	return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng make_stream(std::uint64_t master, std::uint64_t index)
{
	return Rng{stream_seed(master, index)};
}

}  // namespace fran
