#pragma once

#include <array>
#include <cstdint>

namespace lsflow {

// Small counter-seeded PRNG (xoshiro256++ with splitmix64 seeding).
//
// Every stochastic component takes an explicit stream so that runs are
// reproducible bit-for-bit and batch kernels can hand one independent
// stream to each record regardless of thread count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0);

  // Hash-derives an independent stream; used to split a master seed into
  // per-record / per-episode / per-thread streams.
  static RngStream derive(std::uint64_t seed, std::uint64_t stream);
  static RngStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [0, n), n >= 1. Unbiased.
  int uniform_int(int n);
  // Standard normal via Box-Muller (stateless pairing: two uniforms per draw).
  double normal();
  // Gamma(shape, 1) via Marsaglia-Tsang, shape > 0.
  double gamma(double shape);
  // Beta(a, b).
  double beta(double a, double b);

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace lsflow
