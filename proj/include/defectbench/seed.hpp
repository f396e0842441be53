#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace defectbench {

/// 64-bit FNV-1a over raw bytes.
constexpr std::uint64_t fnv1a64(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for a named sub-task: mix64(master ^ fnv1a64(parts joined by '|')).
/// Depends only on the text, never on scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> parts) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  bool first = true;
  for (auto p : parts) {
    if (!first) h = fnv1a64("|", h);
    h = fnv1a64(p, h);
    first = false;
  }
  return mix64(master ^ h);
}

/// Seed for the i-th child stream of `seed`.
constexpr std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace defectbench
