#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace blotto {

// Philox4x64-10 counter-based generator. A (seed, stream) pair selects an
// independent sequence; the block counter walks through it.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed = 0, std::uint64_t stream = 0)
      : key_{seed, stream} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    if (pos_ == 4) {
      block_ = philox4x64({counter_, 0, 0, 0}, key_);
      ++counter_;
      pos_ = 0;
    }
    return block_[pos_++];
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);

  // A generator for a derived stream, independent of this one.
  CounterRng split(std::uint64_t substream) const;

  std::uint64_t seed() const { return key_[0]; }
  std::uint64_t stream() const { return key_[1]; }

  static std::array<std::uint64_t, 4> philox4x64(
      std::array<std::uint64_t, 4> ctr, std::array<std::uint64_t, 2> key);

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 4> block_{};
  int pos_ = 4;
};

}  // namespace blotto
