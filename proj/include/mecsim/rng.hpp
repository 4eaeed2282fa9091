#pragma once

#include <cstddef>
#include <cstdint>

namespace mecsim {

/// What a random stream is used for. Part of the stream key, so two purposes
/// on the same entity and slot never share draws.
enum class Purpose : std::uint32_t {
  kPlacement = 1,
  kProfile = 2,
  kTask = 3,
  kMobility = 4,
  kSmallScale = 5,
  kShadow = 6,
  kDecision = 7,
  kRounding = 8,
  kGenetic = 9,
  kMatchingInit = 10,
  kFuzz = 11,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for replication `rep` of a sweep or paired comparison.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t rep) noexcept;

/// Counter-based random stream keyed by (seed, entity, purpose, slot).
///
/// Every draw is a pure function of the key and a draw counter, so the values
/// an entity sees never depend on how many threads run or in which order
/// servers are processed. Distributions are implemented here rather than with
/// <random> so that output is identical across standard libraries.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t entity, Purpose purpose, std::uint64_t slot) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1).
  double uniform() noexcept;
  /// Uniform on [lo, hi]; returns lo exactly when lo == hi.
  double uniform(double lo, double hi) noexcept;
  /// Standard normal (Box-Muller, two draws per call).
  double normal() noexcept;
  bool bernoulli(double p) noexcept;
  /// Uniform index in [0, n). n must be > 0.
  std::size_t index(std::size_t n) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mecsim
