#include "ensim/keyschedule.hpp"

#include <stdexcept>

#include "ensim/hash.hpp"

namespace ensim {

TemporaryExposureKey generate_tek(RngStream& rng, DayIndex day) {
  if (day < 0) {
    throw std::out_of_range("day index must be non-negative");
  }
  return TemporaryExposureKey{day, rng.next_bytes16()};
}

EphemeralId derive_epi(const TemporaryExposureKey& tek, IntervalIndex interval,
                       int intervals_per_day) {
  if (interval < 0 || interval >= intervals_per_day) {
    throw std::out_of_range("interval " + std::to_string(interval) + " outside [0, " +
                            std::to_string(intervals_per_day) + ")");
  }
  std::array<std::uint8_t, 24> msg{};
  std::copy(tek.key.begin(), tek.key.end(), msg.begin());
  put_u32_be(msg.data() + 16, static_cast<std::uint32_t>(tek.day));
  put_u32_be(msg.data() + 20, static_cast<std::uint32_t>(interval));
  Sha256Digest digest = sha256(msg);
  EphemeralId epi;
  std::copy(digest.begin(), digest.begin() + 16, epi.bytes.begin());
  return epi;
}

std::vector<EphemeralId> derive_day_identifiers(const TemporaryExposureKey& tek,
                                                int intervals_per_day) {
  std::vector<EphemeralId> ids;
  ids.reserve(static_cast<std::size_t>(intervals_per_day));
  for (IntervalIndex i = 0; i < intervals_per_day; ++i) {
    ids.push_back(derive_epi(tek, i, intervals_per_day));
  }
  return ids;
}

std::vector<std::uint8_t> encode_epi(const EphemeralId& epi) {
  return std::vector<std::uint8_t>(epi.bytes.begin(), epi.bytes.end());
}

EphemeralId decode_epi(std::span<const std::uint8_t> wire) {
  if (wire.size() != 16) {
    throw std::invalid_argument("identifier wire form must be 16 bytes, got " +
                                std::to_string(wire.size()));
  }
  EphemeralId epi;
  std::copy(wire.begin(), wire.end(), epi.bytes.begin());
  return epi;
}

}  // namespace ensim
