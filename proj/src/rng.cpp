#include "simplexdiff/rng.hpp"

#include <cmath>

#include "simplexdiff/errors.hpp"

namespace simplexdiff {

namespace {

constexpr uint32_t kM0 = 0xD2511F53u;
constexpr uint32_t kM1 = 0xCD9E8D57u;
constexpr uint32_t kW0 = 0x9E3779B9u;
constexpr uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  const uint64_t p = static_cast<uint64_t>(a) * b;
  hi = static_cast<uint32_t>(p >> 32);
  lo = static_cast<uint32_t>(p);
}

inline std::array<uint32_t, 4> round_once(const std::array<uint32_t, 4>& c,
                                          const std::array<uint32_t, 2>& k) {
  uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kM0, c[0], hi0, lo0);
  mulhilo(kM1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<uint32_t, 4> RngStream::philox4x32_10(std::array<uint32_t, 4> ctr,
                                                 std::array<uint32_t, 2> key) {
  ctr = round_once(ctr, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kW0;
    key[1] += kW1;
    ctr = round_once(ctr, key);
  }
  return ctr;
}

RngStream::RngStream(uint64_t seed, uint32_t module_tag, uint64_t trajectory_index) {
  if (trajectory_index > 0xffffffffull)
    throw invalid_argument_error("RngStream: trajectory index exceeds 2^32-1");
  key_ = {static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)};
  base_ctr_ = {0, 0, static_cast<uint32_t>(trajectory_index), module_tag};
}

void RngStream::refill() {
  std::array<uint32_t, 4> ctr = base_ctr_;
  ctr[0] = static_cast<uint32_t>(block_);
  ctr[1] = static_cast<uint32_t>(block_ >> 32);
  buf_ = philox4x32_10(ctr, key_);
  ++block_;
  pos_ = 0;
}

uint32_t RngStream::next_u32() {
  if (pos_ >= 4) refill();
  return buf_[pos_++];
}

uint64_t RngStream::next_u64() {
  const uint32_t lo = next_u32();
  const uint32_t hi = next_u32();
  return (static_cast<uint64_t>(hi) << 32) | lo;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * m;
    have_cached_normal_ = true;
    return u * m;
  }
}

double RngStream::exponential(double rate) {
  return -std::log1p(-uniform()) / rate;
}

}  // namespace simplexdiff
