#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "ensim/bytes.hpp"

namespace ensim {

/// Deterministic random stream. mt19937_64 is fully specified by the
/// standard, and the gaussian transform below is fixed Box-Muller, so a
/// stream's output is byte-reproducible across platforms and compilers
/// (std::normal_distribution is not, which is why it is not used here).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 bits of entropy.
  double next_unit() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double next_gaussian(double sigma);

  Bytes16 next_bytes16();

 private:
  std::mt19937_64 gen_;
};

/// Derives independent labeled sub-streams from one master seed, so that
/// every device owns its own stream and per-device output does not depend
/// on what other devices draw.
class StreamFactory {
 public:
  explicit StreamFactory(std::uint64_t master_seed) : master_seed_(master_seed) {}

  RngStream stream(const std::string& label) const {
    return RngStream(stream_seed(label));
  }

  std::uint64_t stream_seed(const std::string& label) const;

 private:
  std::uint64_t master_seed_;
};

}  // namespace ensim
