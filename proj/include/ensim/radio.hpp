#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ensim/keyschedule.hpp"
#include "ensim/rng.hpp"

namespace ensim {

using DeviceId = std::string;

/// Log-distance path loss plus seeded gaussian shadowing. Attenuation in dB
/// grows with distance; lower means closer.
struct ChannelConfig {
  double a_db = 45.0;            // intercept: attenuation at 1 m
  double b_db = 20.0;            // slope per decade of distance
  double noise_sigma_db = 2.0;   // per-sighting gaussian shadowing
  double max_detect_db = 90.0;   // beyond this the receiver hears nothing
  double close_contact_db = 55.0;  // at or below counts as close contact (~2 m)
};

/// One identifier heard by one receiver at one minute.
struct Sighting {
  EphemeralId epi;
  Minute time = 0;
  double attenuation_db = 0.0;
};

/// a + b*log10(d) + N(0, sigma). Throws std::invalid_argument for d <= 0.
double attenuation(double distance_m, const ChannelConfig& cfg, RngStream& noise);

/// Zero-noise attenuation; also the form the ground-truth oracle uses.
double attenuation_at(double distance_m, const ChannelConfig& cfg);

/// Delivers one broadcast to every listed receiver in range. Receivers whose
/// sampled attenuation exceeds max_detect_db get nothing. The sender never
/// appears in receiver_distances (devices do not hear themselves).
std::vector<std::pair<DeviceId, Sighting>> broadcast(
    const EphemeralId& sender_epi,
    const std::vector<std::pair<DeviceId, double>>& receiver_distances,
    const ChannelConfig& cfg, RngStream& noise, Minute time);

}  // namespace ensim
