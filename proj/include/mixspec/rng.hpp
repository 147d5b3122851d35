#pragma once

#include <cstdint>

namespace mixspec {

// Deterministic random number toolkit. Everything is built on the splitmix64
// output function, so results are bit-for-bit reproducible across platforms
// and independent of how work is split across threads: a draw is a pure
// function of (key, counter).

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream key from a base seed and a stream index.
std::uint64_t derive_stream(std::uint64_t base, std::uint64_t stream);

/// Uniform draw in [0,1) addressed by (key, counter).
double uniform_at(std::uint64_t key, std::uint64_t counter);

/// Standard normal draw addressed by (key, counter); consumes the
/// uniform counters 2*counter and 2*counter+1.
double normal_at(std::uint64_t key, std::uint64_t counter);

/// Sequential splitmix64 stream for block-local sampling.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform();  // [0,1)
  double normal();   // N(0,1), Box-Muller, two uniforms per draw

 private:
  std::uint64_t state_;
};

}  // namespace mixspec
