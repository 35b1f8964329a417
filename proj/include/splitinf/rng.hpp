#pragma once

#include "splitinf/common.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace splitinf {

/// Every stochastic operation draws from an explicit stream of this type.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hashes (seed, path...) into a stream seed. Streams derived from distinct
/// paths are independent for practical purposes, so work can be scheduled in
/// any order without changing results.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {});

/// Draws a fresh child stream from a parent stream.
Rng split_stream(Rng& parent);

Vector standard_normal(Index n, Rng& rng);

/// Uniform random permutation of {0..n-1} (Fisher-Yates).
IndexSet random_permutation(Index n, Rng& rng);

/// Uniform random subset of size k from {0..n-1}, sorted.
IndexSet sample_without_replacement(Index n, Index k, Rng& rng);

}  // namespace splitinf
