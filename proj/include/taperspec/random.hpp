#pragma once

#include <cstdint>

namespace taperspec {

/// One step of the splitmix64 generator (Steele, Lea, Flood). Used only to
/// decorrelate seeds; the bulk generator is std::mt19937_64.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for replicate `index` of stream `stream` (e.g. a half-window T).
/// Distinct (stream, index) pairs map to well-separated generator states.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                    std::uint64_t index) noexcept {
  return splitmix64(base ^ splitmix64(splitmix64(stream) ^ index));
}

}  // namespace taperspec
