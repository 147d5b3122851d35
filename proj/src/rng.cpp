#include "mixspec/rng.hpp"

#include <cmath>
#include <numbers>

namespace mixspec {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

double u64_to_unit(std::uint64_t x) {
  // 53 high bits -> [0,1)
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

double box_muller(double u1, double u2) {
  // 1-u1 keeps the log argument in (0,1]
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_stream(std::uint64_t base, std::uint64_t stream) {
  return mix64(base + kGolden * (stream + 1));
}

double uniform_at(std::uint64_t key, std::uint64_t counter) {
  return u64_to_unit(mix64(key + kGolden * (counter + 1)));
}

double normal_at(std::uint64_t key, std::uint64_t counter) {
  const double u1 = uniform_at(key, 2 * counter);
  const double u2 = uniform_at(key, 2 * counter + 1);
  return box_muller(u1, u2);
}

std::uint64_t SplitMix::next() {
  state_ += kGolden;
  return mix64(state_);
}

double SplitMix::uniform() { return u64_to_unit(next()); }

double SplitMix::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return box_muller(u1, u2);
}

}  // namespace mixspec
