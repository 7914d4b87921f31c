#include <doctest.h>

#include <set>
#include <string>

#include "ensim/engine.hpp"
#include "ensim/oracle.hpp"
#include "ensim/report.hpp"

using namespace ensim;

namespace {

// The canonical three-device story: A gets diagnosed on day 1 after spending
// 20 close minutes with B on day 0; C was around but ten meters away.
Scenario canonical() {
  Scenario s;
  s.seed = 42;
  s.duration_days = 2;
  s.channel.noise_sigma_db = 0.0;
  s.devices = {{"A"}, {"B"}, {"C"}};
  s.contacts = {{"A", "B", 100, 20.0, 1.0}, {"A", "C", 300, 20.0, 10.0}};
  s.diagnoses = {{"A", 1, ReportType::confirmed_test, true}};
  return s;
}

std::set<std::pair<DeviceId, DayIndex>> notified_set(const RunResult& run) {
  std::set<std::pair<DeviceId, DayIndex>> out;
  for (const Notification& n : run.notifications) out.insert({n.device_id, n.day});
  return out;
}

}  // namespace

TEST_CASE("the canonical scenario notifies the close contact and only them") {
  RunResult run = run_scenario(canonical());
  REQUIRE(run.notifications.size() == 1);
  CHECK(run.notifications[0].device_id == "B");
  CHECK(run.notifications[0].day == 0);
  CHECK(run.notifications[0].total_risk == doctest::Approx(40.0));
  CHECK(run.devices.at("C").notified_days.empty());
  CHECK(run.devices.at("B").received_record_count > 0);
  CHECK(run.central_report_log.empty());
}

TEST_CASE("the oracle agrees on the canonical scenario edge for edge") {
  Scenario s = canonical();
  OracleResult oracle = compute_oracle(s);
  REQUIRE(oracle.match_edges.size() == 1);
  CHECK(oracle.match_edges[0].receiver == "B");
  CHECK(oracle.match_edges[0].uploader == "A");
  CHECK(oracle.match_edges[0].day == 0);
  CHECK(oracle.match_edges[0].exposure_minutes == doctest::Approx(20.0));
  REQUIRE(oracle.expected_notifications.size() == 1);
  CHECK(oracle.expected_notifications[0].device_id == "B");
  CHECK(oracle.has_match("A", "B", 0));
  CHECK_FALSE(oracle.has_match("A", "C", 0));

  RunResult run = run_scenario(s);
  CHECK(notified_set(run) == std::set<std::pair<DeviceId, DayIndex>>{{"B", 0}});
}

TEST_CASE("a contact sixteen days before diagnosis is beyond retention") {
  Scenario s;
  s.seed = 7;
  s.duration_days = 17;
  s.channel.noise_sigma_db = 0.0;
  s.devices = {{"A"}, {"B"}};
  s.contacts = {{"A", "B", 100, 20.0, 1.0}};        // day 0
  s.diagnoses = {{"A", 16, ReportType::confirmed_test, true}};  // sixteen days later
  OracleResult oracle = compute_oracle(s);
  CHECK(oracle.match_edges.empty());
  CHECK(oracle.expected_notifications.empty());
  RunResult run = run_scenario(s);
  CHECK(run.notifications.empty());
  // the upload happened, but the day-0 key had already left the store
  REQUIRE(run.server_batches.size() == 1);
  for (const DiagnosisKey& k : run.server_batches[0].keys) CHECK(k.tek.day > 0);
}

TEST_CASE("a diagnosis without consent uploads nothing") {
  Scenario s = canonical();
  s.diagnoses[0].consent = false;
  OracleResult oracle = compute_oracle(s);
  CHECK(oracle.match_edges.empty());
  RunResult run = run_scenario(s);
  CHECK(run.server_batches.empty());
  CHECK(run.notifications.empty());
  REQUIRE(run.uploads.size() == 1);
  CHECK(run.uploads[0].batch_id == 0);
  CHECK_FALSE(run.uploads[0].consented);
  // the refusal left a consent event trail
  bool saw_refusal = false;
  for (const ConsentEvent& e : run.consent_events) {
    if (e.device_id == "A" && e.purpose == "retrieve_upload" && !e.granted) saw_refusal = true;
  }
  CHECK(saw_refusal);
}

TEST_CASE("zero contacts mean zero notifications") {
  Scenario s = canonical();
  s.contacts.clear();
  RunResult run = run_scenario(s);
  CHECK(run.notifications.empty());
  CHECK(compute_oracle(s).expected_notifications.empty());
}

TEST_CASE("a device that never consented stays silent and stores nothing") {
  Scenario s = canonical();
  s.devices[1].consent_policy = false;  // B refuses the enable prompt
  RunResult run = run_scenario(s);
  CHECK(run.notifications.empty());
  CHECK_FALSE(run.devices.at("B").enabled);
  CHECK(run.devices.at("B").sent_key_count == 0);
  CHECK(run.devices.at("B").received_record_count == 0);
  OracleResult oracle = compute_oracle(s);
  CHECK(oracle.expected_notifications.empty());
}

TEST_CASE("a device never hears itself") {
  Scenario s = canonical();
  World world(s);
  world.run();
  // every record in A's store derives from someone else's key: matching A's
  // own keys against A's store finds nothing
  Device& a = world.device("A");
  RiskConfig risk;
  std::vector<DiagnosisKey> own;
  for (const auto& [day, tek] : a.sent_store().entries) {
    own.push_back({tek, ReportType::confirmed_test});
  }
  auto res = a.api_match(own, risk, s.duration_minutes());
  REQUIRE(res.ok());
  CHECK(res.value.empty());
}

TEST_CASE("the seed override replaces the file seed and is flagged") {
  Scenario s = canonical();
  RunOptions opts;
  opts.seed_override = 777;
  RunResult run = run_scenario(s, opts);
  CHECK(run.seed == 777);
  CHECK(run.seed_overridden);
  RunResult base = run_scenario(s);
  CHECK(base.seed == 42);
  CHECK_FALSE(base.seed_overridden);
}

TEST_CASE("the same seed replays the identical run, a different seed may not") {
  Scenario s = canonical();
  s.channel.noise_sigma_db = 2.0;  // determinism must hold with noise too
  OracleResult oracle = compute_oracle(s);
  std::string a = report_json(run_scenario(s), &oracle);
  std::string b = report_json(run_scenario(s), &oracle);
  CHECK(a == b);
}

TEST_CASE("a late enablement misses the contacts before it") {
  Scenario s = canonical();
  s.devices[1].enable_at_minute = 200;  // B comes online after the A-B contact
  OracleResult oracle = compute_oracle(s);
  CHECK(oracle.expected_notifications.empty());
  RunResult run = run_scenario(s);
  CHECK(run.notifications.empty());
  CHECK(run.devices.at("B").enabled);
}

TEST_CASE("notifications arrive at the poll after publication, not before") {
  Scenario s = canonical();
  RunResult run = run_scenario(s);
  REQUIRE(run.notifications.size() == 1);
  // diagnosis on day 1 publishes at the day-1 boundary; the poll at that
  // same boundary delivers the notification
  CHECK(run.notifications[0].issued_at == 1440);
}

TEST_CASE("the beacon's visitors store its identifiers and get notified after the upload") {
  Scenario s;
  s.seed = 11;
  s.duration_days = 2;
  s.channel.noise_sigma_db = 0.0;
  s.devices = {{"V"}, {"W"}};
  s.beacons = {{"BX", "cafe-34"}};
  s.visits = {{"V", "BX", 100, 30.0, 1.0},   // lingers: records promoted
              {"W", "BX", 600, 2.0, 1.0}};   // passes by: one sighting, discarded
  s.diagnoses = {{"BX", 1, ReportType::confirmed_test, true}};
  OracleResult oracle = compute_oracle(s);
  REQUIRE(oracle.expected_notifications.size() == 1);
  CHECK(oracle.expected_notifications[0].device_id == "V");
  RunResult run = run_scenario(s);
  CHECK(notified_set(run) == std::set<std::pair<DeviceId, DayIndex>>{{"V", 0}});
  // the beacon upload claims the beacon as uploader, server-side
  REQUIRE(run.server_batches.size() == 1);
  CHECK(run.server_batches[0].uploader == "BX");
}

TEST_CASE("a coerced victim's contacts are notified without any consent trail") {
  Scenario s;
  s.seed = 12;
  s.duration_days = 3;
  s.channel.noise_sigma_db = 0.0;
  s.devices = {{"V"}, {"F1"}, {"F2"}};
  s.contacts = {{"V", "F1", 120, 30.0, 1.0},          // day 0
                {"V", "F2", 1500, 16.0, 1.0}};        // day 1
  s.coercions = {{"V", 2}};
  OracleResult oracle = compute_oracle(s);
  REQUIRE(oracle.expected_notifications.size() == 2);
  RunResult run = run_scenario(s);
  CHECK(notified_set(run) ==
        std::set<std::pair<DeviceId, DayIndex>>{{"F1", 0}, {"F2", 1}});
  REQUIRE(run.server_batches.size() == 1);
  CHECK(run.server_batches[0].coerced);
  // no retrieve_upload consent prompt anywhere: coercion bypasses the API
  for (const ConsentEvent& e : run.consent_events) CHECK(e.purpose == "enable");
  REQUIRE(run.uploads.size() == 1);
  CHECK(run.uploads[0].coerced);
  CHECK_FALSE(run.uploads[0].consented);
  // a victim with no contacts triggers nothing
  Scenario lonely = s;
  lonely.contacts.clear();
  CHECK(run_scenario(lonely).notifications.empty());
}

TEST_CASE("unaligned contact windows agree with the oracle too") {
  Scenario s;
  s.seed = 13;
  s.duration_days = 2;
  s.channel.noise_sigma_db = 0.0;
  s.devices = {{"A"}, {"B"}};
  // starts mid-window, straddles three rotation windows, odd duration
  s.contacts = {{"A", "B", 237, 17.0, 1.4}};
  s.diagnoses = {{"A", 1, ReportType::confirmed_test, true}};
  OracleResult oracle = compute_oracle(s);
  RunResult run = run_scenario(s);
  std::set<std::pair<DeviceId, DayIndex>> expected;
  for (const NotificationEdge& e : oracle.expected_notifications) {
    expected.insert({e.device_id, e.day});
  }
  CHECK(notified_set(run) == expected);
}
