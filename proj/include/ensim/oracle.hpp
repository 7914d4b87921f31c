#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ensim/scenario.hpp"

namespace ensim {

/// Ground truth: receiver r holds matchable exposure to uploader u's key of
/// day `day`. Derived from scenario geometry alone, never from the stores.
struct MatchEdge {
  DeviceId receiver;
  std::string uploader;
  DayIndex day = 0;
  double exposure_minutes = 0.0;
  double min_attenuation_db = 0.0;
  double risk = 0.0;
};

struct NotificationEdge {
  DeviceId device_id;
  DayIndex day = 0;
  double total_risk = 0.0;
};

struct CentralEdge {
  DeviceId device_id;
  DayIndex day = 0;
};

/// What a correct implementation must produce for a scenario, computed by
/// brute force over the contact geometry: per rotation window, count the
/// scan ticks each link was audible, apply the promotion rule, pool per key
/// day, score, and sum per daily poll. Exact for zero-noise channels; with
/// shadowing enabled it predicts the noise-free outcome instead.
struct OracleResult {
  std::vector<MatchEdge> match_edges;
  std::vector<NotificationEdge> expected_notifications;
  std::vector<CentralEdge> expected_central_reports;

  bool has_match(const std::string& uploader, const DeviceId& receiver, DayIndex day) const;
};

OracleResult compute_oracle(const Scenario& scenario);

}  // namespace ensim
