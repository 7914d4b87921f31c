#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ensim/actors.hpp"

namespace ensim {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DeviceSpec {
  std::string id;
  AppKind app_kind = AppKind::honest;
  bool approved = true;
  bool allowlisted = false;
  Minute enable_at_minute = 0;
  bool consent_policy = true;  // the user's answer to consent prompts
};

struct ContactEvent {
  std::string device_a;
  std::string device_b;
  Minute start_minute = 0;
  double duration_minutes = 0.0;
  double distance_m = 0.0;
};

struct DiagnosisEvent {
  std::string device_id;  // may also name a beacon (attacker-side upload)
  DayIndex day = 0;
  ReportType report_type = ReportType::confirmed_test;
  bool consent = true;
};

struct BeaconSpec {
  std::string beacon_id;
  std::string location_label;
};

struct VisitEvent {
  std::string device_id;
  std::string beacon_id;
  Minute start_minute = 0;
  double duration_minutes = 0.0;
  double distance_m = 1.0;
};

struct CoercionEvent {
  std::string device_id;
  DayIndex day = 0;
};

/// Ground-truth world description. Everything the simulator does is a pure
/// function of this structure; the seed is mandatory because determinism is.
struct Scenario {
  int schema = 1;
  int duration_days = 0;
  int rotation_minutes = kDefaultRotationMinutes;
  int scan_period_minutes = 2;
  int min_sightings = kDefaultMinSightings;
  ChannelConfig channel;
  RiskConfig risk;
  std::vector<DeviceSpec> devices;
  std::vector<ContactEvent> contacts;
  std::vector<DiagnosisEvent> diagnoses;
  std::vector<BeaconSpec> beacons;
  std::vector<VisitEvent> visits;
  std::vector<CoercionEvent> coercions;
  std::uint64_t seed = 0;

  Minute duration_minutes() const { return static_cast<Minute>(duration_days) * kMinutesPerDay; }
};

/// Parses and validates a scenario file. Throws ScenarioError naming the
/// offending field on any schema violation, unknown id, or out-of-range
/// event.
Scenario load_scenario(const std::string& path);

/// Same, from an in-memory JSON document.
Scenario parse_scenario(const std::string& json_text);

/// Re-checks every invariant on an already built scenario.
void validate_scenario(const Scenario& s);

}  // namespace ensim
