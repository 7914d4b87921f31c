#include "ensim/radio.hpp"

#include <cmath>
#include <stdexcept>

namespace ensim {

double attenuation_at(double distance_m, const ChannelConfig& cfg) {
  if (distance_m <= 0.0) {
    throw std::invalid_argument("distance must be positive");
  }
  return cfg.a_db + cfg.b_db * std::log10(distance_m);
}

double attenuation(double distance_m, const ChannelConfig& cfg, RngStream& noise) {
  return attenuation_at(distance_m, cfg) + noise.next_gaussian(cfg.noise_sigma_db);
}

std::vector<std::pair<DeviceId, Sighting>> broadcast(
    const EphemeralId& sender_epi,
    const std::vector<std::pair<DeviceId, double>>& receiver_distances,
    const ChannelConfig& cfg, RngStream& noise, Minute time) {
  std::vector<std::pair<DeviceId, Sighting>> delivered;
  for (const auto& [receiver, distance_m] : receiver_distances) {
    double att = attenuation(distance_m, cfg, noise);
    if (att <= cfg.max_detect_db) {
      delivered.emplace_back(receiver, Sighting{sender_epi, time, att});
    }
  }
  return delivered;
}

}  // namespace ensim
