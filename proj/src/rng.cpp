#include "mecsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace mecsim {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t rep) noexcept {
  return splitmix64(base ^ splitmix64(rep + 0x5851f42d4c957f2dULL));
}

Stream::Stream(std::uint64_t seed, std::uint64_t entity, Purpose purpose,
               std::uint64_t slot) noexcept {
  std::uint64_t k = splitmix64(seed);
  k = splitmix64(k ^ entity);
  k = splitmix64(k ^ static_cast<std::uint64_t>(purpose));
  key_ = splitmix64(k ^ slot);
}

std::uint64_t Stream::next_u64() noexcept {
  ++counter_;
  return splitmix64(key_ + counter_ * kGolden);
}

double Stream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::uniform(double lo, double hi) noexcept {
  if (lo == hi) return lo;
  const double v = lo + (hi - lo) * uniform();
  return v > hi ? hi : v;
}

double Stream::normal() noexcept {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

bool Stream::bernoulli(double p) noexcept { return uniform() < p; }

std::size_t Stream::index(std::size_t n) noexcept {
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

}  // namespace mecsim
