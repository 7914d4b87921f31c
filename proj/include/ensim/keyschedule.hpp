#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "ensim/bytes.hpp"
#include "ensim/rng.hpp"

namespace ensim {

/// Days since scenario start; day 0 is the first simulated day.
using DayIndex = std::int32_t;
/// Rotation interval within a day, in [0, intervals_per_day).
using IntervalIndex = std::int32_t;
/// Simulation time in minutes since scenario start.
using Minute = std::int64_t;

constexpr int kMinutesPerDay = 1440;
constexpr int kDefaultRotationMinutes = 10;
constexpr int kDefaultIntervalsPerDay = kMinutesPerDay / kDefaultRotationMinutes;

/// Per-day random root secret of a device's broadcast identity. One key per
/// device per day; every identifier broadcast that day derives from it.
struct TemporaryExposureKey {
  DayIndex day = 0;
  Bytes16 key{};

  auto operator<=>(const TemporaryExposureKey&) const = default;
};

/// Rotating identifier actually broadcast over the radio. Fully determined
/// by (key, interval); carries no other structure.
struct EphemeralId {
  Bytes16 bytes{};

  auto operator<=>(const EphemeralId&) const = default;
};

/// Draws a fresh daily key from the device's own stream. Reproducible under
/// a fixed seed; uniqueness across devices and days is statistical (16
/// random bytes) and asserted in tests.
TemporaryExposureKey generate_tek(RngStream& rng, DayIndex day);

/// The public derivation function f: first 16 bytes of
/// SHA-256(key || day_be32 || interval_be32). Interval outside
/// [0, intervals_per_day) throws std::out_of_range.
EphemeralId derive_epi(const TemporaryExposureKey& tek, IntervalIndex interval,
                       int intervals_per_day = kDefaultIntervalsPerDay);

/// All identifiers of one key's day, in interval order. This is the
/// reconstruction the match API relies on: a day of broadcasts can always
/// be regenerated from the daily key alone.
std::vector<EphemeralId> derive_day_identifiers(const TemporaryExposureKey& tek,
                                                int intervals_per_day = kDefaultIntervalsPerDay);

/// Wire form is the raw 16 bytes, no framing. Android- and iOS-flavored
/// devices share this format byte for byte.
std::vector<std::uint8_t> encode_epi(const EphemeralId& epi);

/// Throws std::invalid_argument unless given exactly 16 bytes.
EphemeralId decode_epi(std::span<const std::uint8_t> wire);

}  // namespace ensim
