#include "ensim/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "ensim/hash.hpp"

namespace ensim {

double RngStream::next_gaussian(double sigma) {
  if (sigma == 0.0) return 0.0;
  // Box-Muller, cosine branch only. u1 shifted into (0, 1] so log is finite.
  double u1 = 1.0 - next_unit();
  double u2 = next_unit();
  double r = std::sqrt(-2.0 * std::log(u1));
  return sigma * r * std::cos(2.0 * std::numbers::pi * u2);
}

Bytes16 RngStream::next_bytes16() {
  Bytes16 out{};
  put_u64_be(out.data(), gen_());
  put_u64_be(out.data() + 8, gen_());
  return out;
}

std::uint64_t StreamFactory::stream_seed(const std::string& label) const {
  std::vector<std::uint8_t> msg;
  msg.reserve(12 + 8 + label.size());
  const char* tag = "ensim-stream";
  msg.insert(msg.end(), tag, tag + 12);
  std::uint8_t seed_be[8];
  put_u64_be(seed_be, master_seed_);
  msg.insert(msg.end(), seed_be, seed_be + 8);
  msg.insert(msg.end(), label.begin(), label.end());
  Sha256Digest d = sha256(msg);
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out = (out << 8) | d[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace ensim
