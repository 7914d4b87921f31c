#include <doctest.h>

#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ensim/demos.hpp"
#include "ensim/engine.hpp"
#include "ensim/oracle.hpp"
#include "ensim/report.hpp"

using namespace ensim;
using nlohmann::json;

namespace {

Scenario honest_pair() {
  Scenario s;
  s.seed = 21;
  s.duration_days = 2;
  s.channel.noise_sigma_db = 0.0;
  s.devices = {{"A"}, {"B"}};
  s.contacts = {{"A", "B", 100, 20.0, 1.0}};
  s.diagnoses = {{"A", 1, ReportType::confirmed_test, true}};
  return s;
}

json report_of(const Scenario& s) {
  OracleResult oracle = compute_oracle(s);
  RunResult run = run_scenario(s);
  return json::parse(report_json(run, &oracle));
}

}  // namespace

TEST_CASE("the json report survives a parse round trip unchanged") {
  Scenario s = honest_pair();
  OracleResult oracle = compute_oracle(s);
  RunResult run = run_scenario(s);
  std::string text = report_json(run, &oracle);
  json parsed = json::parse(text);
  CHECK(parsed.dump(2) + "\n" == text);
}

TEST_CASE("two runs of the same seed serialize byte for byte") {
  Scenario s = honest_pair();
  OracleResult oracle = compute_oracle(s);
  CHECK(report_json(run_scenario(s), &oracle) == report_json(run_scenario(s), &oracle));
  CHECK(report_csv(run_scenario(s), &oracle) == report_csv(run_scenario(s), &oracle));
}

TEST_CASE("a perfect zero-noise run has an empty diff") {
  json r = report_of(honest_pair());
  CHECK(r.at("oracle_diff").at("missed").empty());
  CHECK(r.at("oracle_diff").at("spurious").empty());
  CHECK(r.at("oracle_diff").at("risk_mismatches").empty());
  CHECK(r.at("oracle_diff").at("agrees").get<bool>());
}

TEST_CASE("an honest-only run renders an all-empty attacks section") {
  json r = report_of(honest_pair());
  const json& attacks = r.at("attacks");
  CHECK(attacks.at("central_report_edges").empty());
  CHECK(attacks.at("beacon_visitors_identified").empty());
  CHECK(attacks.at("probed_keys").get<int>() == 0);
  // vacuous metrics read as perfect, not as failed
  CHECK(attacks.at("central_precision").get<double>() == doctest::Approx(1.0));
  CHECK(attacks.at("central_recall").get<double>() == doctest::Approx(1.0));
  CHECK(attacks.at("probe_accuracy").get<double>() == doctest::Approx(1.0));
  CHECK(attacks.at("beacon_visitor_recall").get<double>() == doctest::Approx(1.0));
  CHECK(r.at("server").at("central_report_log").empty());
}

TEST_CASE("a re-centralized run scores perfect recall against the oracle") {
  Scenario s = honest_pair();
  for (DeviceSpec& d : s.devices) d.app_kind = AppKind::recentralizing;
  json r = report_of(s);
  const json& attacks = r.at("attacks");
  REQUIRE(attacks.at("central_report_edges").size() == 1);
  CHECK(attacks.at("central_report_edges")[0].at("device_id") == "B");
  CHECK(attacks.at("central_precision").get<double>() == doctest::Approx(1.0));
  CHECK(attacks.at("central_recall").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("the csv summary has one row per device and an agree verdict") {
  Scenario s = honest_pair();
  OracleResult oracle = compute_oracle(s);
  RunResult run = run_scenario(s);
  std::string csv = report_csv(run, &oracle);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "device_id,app_kind,notified_days,expected_notified_days,agree");
  int rows = 0;
  bool b_agrees = false;
  while (std::getline(lines, line)) {
    ++rows;
    if (line.rfind("B,", 0) == 0) b_agrees = line.find(",yes") != std::string::npos;
  }
  CHECK(rows == 2);
  CHECK(b_agrees);
}

TEST_CASE("json keys are emitted in sorted order") {
  json r = report_of(honest_pair());
  std::string text = r.dump(2);
  // spot-check the top level ordering in the raw text
  std::size_t attacks = text.find("\"attacks\"");
  std::size_t budget = text.find("\"budget_audit\"");
  std::size_t run_info = text.find("\"run_info\"");
  std::size_t server = text.find("\"server\"");
  REQUIRE(attacks != std::string::npos);
  REQUIRE(budget != std::string::npos);
  REQUIRE(run_info != std::string::npos);
  REQUIRE(server != std::string::npos);
  CHECK(attacks < budget);
  CHECK(budget < run_info);
  CHECK(run_info < server);
}

TEST_CASE("the budget audit counts every api call per app") {
  json r = report_of(honest_pair());
  const json& budget = r.at("budget_audit");
  REQUIRE(budget.contains("A"));
  REQUIRE(budget.contains("B"));
  CHECK(budget.at("A").at("retrieve_calls").get<int>() == 1);
  CHECK(budget.at("B").at("match_calls").get<int>() == 1);
  CHECK(budget.at("B").at("match_rate_limited").get<int>() == 0);
}

TEST_CASE("uploads and batches carry their provenance") {
  Scenario s = honest_pair();
  json r = report_of(s);
  REQUIRE(r.at("uploads").size() == 1);
  CHECK(r.at("uploads")[0].at("uploader") == "A");
  CHECK(r.at("uploads")[0].at("consented").get<bool>());
  CHECK_FALSE(r.at("uploads")[0].at("coerced").get<bool>());
  REQUIRE(r.at("server").at("batches").size() == 1);
  const json& batch = r.at("server").at("batches")[0];
  CHECK(batch.at("uploader") == "A");
  CHECK(batch.at("report_type") == "confirmed_test");
  CHECK(batch.at("keys").size() == 2);  // days 0 and 1 of a two-day run
}

TEST_CASE("a coerced batch is marked in the report") {
  Scenario s;
  s.seed = 5;
  s.duration_days = 2;
  s.channel.noise_sigma_db = 0.0;
  s.devices = {{"V"}, {"F"}};
  s.contacts = {{"V", "F", 100, 20.0, 1.0}};
  s.coercions = {{"V", 1}};
  json r = report_of(s);
  REQUIRE(r.at("server").at("batches").size() == 1);
  CHECK(r.at("server").at("batches")[0].at("coerced").get<bool>());
  CHECK(r.at("notifications").size() == 1);
}

TEST_CASE("the oracle report stands alone") {
  Scenario s = honest_pair();
  OracleResult oracle = compute_oracle(s);
  json j = json::parse(oracle_report_json(oracle));
  REQUIRE(j.at("match_edges").size() == 1);
  CHECK(j.at("match_edges")[0].at("receiver") == "B");
  CHECK(j.at("match_edges")[0].at("uploader") == "A");
  CHECK(j.at("expected_notifications").size() == 1);
}

TEST_CASE("every bundled demo passes") {
  for (const std::string& name : demo_names()) {
    std::ostringstream out;
    INFO("demo: " << name);
    CHECK(run_demo(name, out));
    CHECK(out.str().find("PASS") != std::string::npos);
  }
}
