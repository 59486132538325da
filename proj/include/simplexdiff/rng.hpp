#pragma once

#include <array>
#include <cstdint>

namespace simplexdiff {

// Counter-based random streams (Philox4x32-10, Salmon et al. 2011).
//
// Stream layout, fixed so that any language can reproduce the draws:
//   key     = (seed & 0xffffffff, seed >> 32)
//   counter = (block_lo, block_hi, trajectory_index, module_tag)
// where block is a 64-bit output-block counter starting at 0. Each block
// yields four 32-bit words. Derived variates:
//   uniform64: two consecutive words w0, w1 -> ((w1<<32 | w0) >> 11) * 2^-53
//   normal:    Marsaglia polar rejection on pairs of uniforms
//   exponential(rate): -log(1 - uniform) / rate
//
// Module tags: ssa=1, ode=3, sde=4, wf=5, sampling=6, tests=7.
class RngStream {
 public:
  RngStream(uint64_t seed, uint32_t module_tag, uint64_t trajectory_index);

  uint32_t next_u32();
  uint64_t next_u64();
  double uniform();                  // [0, 1)
  double normal();                   // standard normal, polar method
  double exponential(double rate);   // rate > 0

  // One Philox block; exposed for known-answer tests.
  static std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> ctr,
                                               std::array<uint32_t, 2> key);

 private:
  void refill();

  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 4> base_ctr_;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buf_{};
  int pos_ = 4;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

namespace rng_tags {
inline constexpr uint32_t kSsa = 1;
inline constexpr uint32_t kOde = 3;
inline constexpr uint32_t kSde = 4;
inline constexpr uint32_t kWrightFisher = 5;
inline constexpr uint32_t kSampling = 6;
inline constexpr uint32_t kTests = 7;
}  // namespace rng_tags

}  // namespace simplexdiff
