#pragma once

#include <cstdint>
#include <limits>

namespace tlg {

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  bool operator==(const RngSpec&) const = default;
};

// Counter-based generator: stream (seed, stream) is a SplitMix64 sequence
// started from a hash of both numbers, so any stream can be produced on its
// own and in any order. Normals come from Box-Muller.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(RngSpec spec);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  double uniform();  // in (0, 1)
  double normal();

  const RngSpec& spec() const { return spec_; }
  std::uint64_t counter() const { return counter_; }

 private:
  RngSpec spec_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace tlg
