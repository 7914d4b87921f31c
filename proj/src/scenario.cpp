#include "ensim/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ensim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioError(where + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, "missing required field '" + key + "'");
  return *it;
}

template <typename T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
  const json& value = require(obj, key, where);
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    fail(where + "." + key, e.what());
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    fail(where + "." + key, e.what());
  }
}

ChannelConfig parse_channel(const json& j) {
  ChannelConfig c;
  c.a_db = get_or(j, "a_db", c.a_db, "channel");
  c.b_db = get_or(j, "b_db", c.b_db, "channel");
  c.noise_sigma_db = get_or(j, "noise_sigma_db", c.noise_sigma_db, "channel");
  c.max_detect_db = get_or(j, "max_detect_db", c.max_detect_db, "channel");
  c.close_contact_db = get_or(j, "close_contact_db", c.close_contact_db, "channel");
  return c;
}

RiskConfig parse_risk(const json& j) {
  RiskConfig r;
  r.attenuation_buckets = get_or(j, "attenuation_buckets", r.attenuation_buckets, "risk");
  r.bucket_weights = get_or(j, "bucket_weights", r.bucket_weights, "risk");
  r.notification_threshold =
      get_or(j, "notification_threshold", r.notification_threshold, "risk");
  if (auto it = j.find("report_type_weights"); it != j.end()) {
    r.report_type_weights.clear();
    for (const auto& [name, weight] : it->items()) {
      try {
        r.report_type_weights[report_type_from_string(name)] = weight.get<double>();
      } catch (const ConfigError& e) {
        fail("risk.report_type_weights", e.what());
      } catch (const json::exception& e) {
        fail("risk.report_type_weights." + name, e.what());
      }
    }
  }
  return r;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ScenarioError("scenario root must be a JSON object");

  Scenario s;
  try {
    s.schema = get_as<int>(j, "schema", "scenario");
    if (s.schema != 1) fail("schema", "unsupported schema version " + std::to_string(s.schema));
    if (!j.contains("seed")) fail("seed", "missing (a fixed seed is mandatory for determinism)");
    s.seed = get_as<std::uint64_t>(j, "seed", "scenario");
    s.duration_days = get_as<int>(j, "duration_days", "scenario");
    s.rotation_minutes = get_or(j, "rotation_minutes", s.rotation_minutes, "scenario");
    s.scan_period_minutes = get_or(j, "scan_period_minutes", s.scan_period_minutes, "scenario");
    s.min_sightings = get_or(j, "min_sightings", s.min_sightings, "scenario");
    if (j.contains("channel")) s.channel = parse_channel(j.at("channel"));
    if (j.contains("risk")) s.risk = parse_risk(j.at("risk"));

    std::size_t i = 0;
    for (const json& d : get_or(j, "devices", json::array(), "scenario")) {
      std::string where = "devices[" + std::to_string(i++) + "]";
      DeviceSpec spec;
      spec.id = get_as<std::string>(d, "id", where);
      try {
        spec.app_kind = app_kind_from_string(get_or(d, "app_kind", std::string("honest"), where));
      } catch (const ConfigError& e) {
        fail(where + ".app_kind", e.what());
      }
      spec.approved = get_or(d, "approved", true, where);
      spec.allowlisted = get_or(d, "allowlisted", false, where);
      spec.enable_at_minute = get_or(d, "enable_at_minute", Minute{0}, where);
      spec.consent_policy = get_or(d, "consent_policy", true, where);
      s.devices.push_back(std::move(spec));
    }

    i = 0;
    for (const json& c : get_or(j, "contacts", json::array(), "scenario")) {
      std::string where = "contacts[" + std::to_string(i++) + "]";
      ContactEvent ev;
      ev.device_a = get_as<std::string>(c, "device_a", where);
      ev.device_b = get_as<std::string>(c, "device_b", where);
      ev.start_minute = get_as<Minute>(c, "start_minute", where);
      ev.duration_minutes = get_as<double>(c, "duration_minutes", where);
      ev.distance_m = get_as<double>(c, "distance_m", where);
      s.contacts.push_back(std::move(ev));
    }

    i = 0;
    for (const json& d : get_or(j, "diagnoses", json::array(), "scenario")) {
      std::string where = "diagnoses[" + std::to_string(i++) + "]";
      DiagnosisEvent ev;
      ev.device_id = get_as<std::string>(d, "device_id", where);
      ev.day = get_as<DayIndex>(d, "day", where);
      try {
        ev.report_type =
            report_type_from_string(get_or(d, "report_type", std::string("confirmed_test"), where));
      } catch (const ConfigError& e) {
        fail(where + ".report_type", e.what());
      }
      ev.consent = get_or(d, "consent", true, where);
      s.diagnoses.push_back(std::move(ev));
    }

    i = 0;
    for (const json& b : get_or(j, "beacons", json::array(), "scenario")) {
      std::string where = "beacons[" + std::to_string(i++) + "]";
      BeaconSpec spec;
      spec.beacon_id = get_as<std::string>(b, "beacon_id", where);
      spec.location_label = get_or(b, "location_label", std::string{}, where);
      s.beacons.push_back(std::move(spec));
    }

    i = 0;
    for (const json& v : get_or(j, "visits", json::array(), "scenario")) {
      std::string where = "visits[" + std::to_string(i++) + "]";
      VisitEvent ev;
      ev.device_id = get_as<std::string>(v, "device_id", where);
      ev.beacon_id = get_as<std::string>(v, "beacon_id", where);
      ev.start_minute = get_as<Minute>(v, "start_minute", where);
      ev.duration_minutes = get_as<double>(v, "duration_minutes", where);
      ev.distance_m = get_or(v, "distance_m", 1.0, where);
      s.visits.push_back(std::move(ev));
    }

    i = 0;
    for (const json& c : get_or(j, "coercions", json::array(), "scenario")) {
      std::string where = "coercions[" + std::to_string(i++) + "]";
      CoercionEvent ev;
      ev.device_id = get_as<std::string>(c, "device_id", where);
      ev.day = get_as<DayIndex>(c, "day", where);
      s.coercions.push_back(std::move(ev));
    }
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario field has wrong type: ") + e.what());
  }

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void validate_scenario(const Scenario& s) {
  if (s.duration_days < 1) fail("duration_days", "must be at least 1");
  if (s.rotation_minutes < 10 || s.rotation_minutes > 20) {
    fail("rotation_minutes", "must lie in [10, 20]");
  }
  if (kMinutesPerDay % s.rotation_minutes != 0) {
    fail("rotation_minutes", "must divide " + std::to_string(kMinutesPerDay));
  }
  if (s.scan_period_minutes < 1 || s.scan_period_minutes > s.rotation_minutes) {
    fail("scan_period_minutes", "must lie in [1, rotation_minutes]");
  }
  if (s.min_sightings < 1) fail("min_sightings", "must be at least 1");
  if (s.channel.noise_sigma_db < 0) fail("channel.noise_sigma_db", "must be non-negative");
  if (!(s.channel.close_contact_db < s.channel.max_detect_db)) {
    fail("channel.close_contact_db", "must be below max_detect_db");
  }
  if (!(s.risk.attenuation_buckets[0] < s.risk.attenuation_buckets[1] &&
        s.risk.attenuation_buckets[1] < s.risk.attenuation_buckets[2])) {
    fail("risk.attenuation_buckets", "thresholds must be strictly increasing");
  }
  for (double w : s.risk.bucket_weights) {
    if (w < 0) fail("risk.bucket_weights", "weights must be non-negative");
  }
  for (const auto& [type, w] : s.risk.report_type_weights) {
    if (w < 0) fail("risk.report_type_weights." + to_string(type), "must be non-negative");
  }

  const Minute total = s.duration_minutes();
  std::set<std::string> device_ids;
  std::set<std::string> beacon_ids;
  std::size_t i = 0;
  for (const DeviceSpec& d : s.devices) {
    std::string where = "devices[" + std::to_string(i++) + "]";
    if (d.id.empty()) fail(where + ".id", "must be non-empty");
    if (!device_ids.insert(d.id).second) fail(where + ".id", "duplicate device id '" + d.id + "'");
    if (d.enable_at_minute < 0 || d.enable_at_minute >= total) {
      fail(where + ".enable_at_minute", "outside the simulated timespan");
    }
  }
  i = 0;
  for (const BeaconSpec& b : s.beacons) {
    std::string where = "beacons[" + std::to_string(i++) + "]";
    if (b.beacon_id.empty()) fail(where + ".beacon_id", "must be non-empty");
    if (device_ids.contains(b.beacon_id) || !beacon_ids.insert(b.beacon_id).second) {
      fail(where + ".beacon_id", "duplicate id '" + b.beacon_id + "'");
    }
  }

  i = 0;
  for (const ContactEvent& c : s.contacts) {
    std::string where = "contacts[" + std::to_string(i++) + "]";
    if (!device_ids.contains(c.device_a)) {
      fail(where + ".device_a", "unknown device '" + c.device_a + "'");
    }
    if (!device_ids.contains(c.device_b)) {
      fail(where + ".device_b", "unknown device '" + c.device_b + "'");
    }
    if (c.device_a == c.device_b) fail(where, "contact endpoints must differ");
    if (c.distance_m <= 0) fail(where + ".distance_m", "must be positive");
    if (c.duration_minutes <= 0) fail(where + ".duration_minutes", "must be positive");
    if (c.start_minute < 0 || c.start_minute + static_cast<Minute>(c.duration_minutes) > total) {
      fail(where, "event lies outside the simulated timespan");
    }
  }

  i = 0;
  for (const DiagnosisEvent& d : s.diagnoses) {
    std::string where = "diagnoses[" + std::to_string(i++) + "]";
    if (!device_ids.contains(d.device_id) && !beacon_ids.contains(d.device_id)) {
      fail(where + ".device_id", "unknown device or beacon '" + d.device_id + "'");
    }
    if (d.day < 0 || d.day >= s.duration_days) fail(where + ".day", "outside the simulated days");
  }

  i = 0;
  for (const VisitEvent& v : s.visits) {
    std::string where = "visits[" + std::to_string(i++) + "]";
    if (!device_ids.contains(v.device_id)) {
      fail(where + ".device_id", "unknown device '" + v.device_id + "'");
    }
    if (!beacon_ids.contains(v.beacon_id)) {
      fail(where + ".beacon_id", "unknown beacon '" + v.beacon_id + "'");
    }
    if (v.distance_m <= 0) fail(where + ".distance_m", "must be positive");
    if (v.duration_minutes <= 0) fail(where + ".duration_minutes", "must be positive");
    if (v.start_minute < 0 || v.start_minute + static_cast<Minute>(v.duration_minutes) > total) {
      fail(where, "event lies outside the simulated timespan");
    }
  }

  i = 0;
  for (const CoercionEvent& c : s.coercions) {
    std::string where = "coercions[" + std::to_string(i++) + "]";
    if (!device_ids.contains(c.device_id)) {
      fail(where + ".device_id", "unknown device '" + c.device_id + "'");
    }
    if (c.day < 0 || c.day >= s.duration_days) fail(where + ".day", "outside the simulated days");
  }
}

}  // namespace ensim
