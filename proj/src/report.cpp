#include "ensim/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace ensim {

namespace {

using nlohmann::json;

json oracle_to_json(const OracleResult& o) {
  json j;
  j["match_edges"] = json::array();
  for (const MatchEdge& e : o.match_edges) {
    j["match_edges"].push_back({{"receiver", e.receiver},
                                {"uploader", e.uploader},
                                {"day", e.day},
                                {"exposure_minutes", e.exposure_minutes},
                                {"min_attenuation_db", e.min_attenuation_db},
                                {"risk", e.risk}});
  }
  j["expected_notifications"] = json::array();
  for (const NotificationEdge& e : o.expected_notifications) {
    j["expected_notifications"].push_back(
        {{"device_id", e.device_id}, {"day", e.day}, {"total_risk", e.total_risk}});
  }
  j["expected_central_reports"] = json::array();
  for (const CentralEdge& e : o.expected_central_reports) {
    j["expected_central_reports"].push_back({{"device_id", e.device_id}, {"day", e.day}});
  }
  return j;
}

json diff_to_json(const RunResult& run, const OracleResult& oracle) {
  std::set<std::pair<DeviceId, DayIndex>> actual;
  std::map<std::pair<DeviceId, DayIndex>, double> actual_risk;
  for (const Notification& n : run.notifications) {
    actual.insert({n.device_id, n.day});
    actual_risk[{n.device_id, n.day}] = n.total_risk;
  }
  std::set<std::pair<DeviceId, DayIndex>> expected;
  json missed = json::array();
  json spurious = json::array();
  json risk_mismatches = json::array();
  for (const NotificationEdge& e : oracle.expected_notifications) {
    expected.insert({e.device_id, e.day});
    auto it = actual_risk.find({e.device_id, e.day});
    if (it == actual_risk.end()) {
      missed.push_back({{"device_id", e.device_id}, {"day", e.day}});
    } else if (std::abs(it->second - e.total_risk) > 1e-9) {
      risk_mismatches.push_back({{"device_id", e.device_id},
                                 {"day", e.day},
                                 {"actual_risk", it->second},
                                 {"expected_risk", e.total_risk}});
    }
  }
  for (const auto& key : actual) {
    if (!expected.contains(key)) {
      spurious.push_back({{"device_id", key.first}, {"day", key.second}});
    }
  }
  json j;
  j["missed"] = missed;
  j["spurious"] = spurious;
  j["risk_mismatches"] = risk_mismatches;
  j["agrees"] = missed.empty() && spurious.empty() && risk_mismatches.empty();
  return j;
}

json edge_array(const std::set<std::pair<DeviceId, DayIndex>>& edges) {
  json out = json::array();
  for (const auto& [id, day] : edges) out.push_back({{"device_id", id}, {"day", day}});
  return out;
}

double ratio(std::size_t hit, std::size_t total) {
  return total == 0 ? 1.0 : static_cast<double>(hit) / static_cast<double>(total);
}

// Attacker-success metrics vs the oracle: what the server-side adversary
// recovered, how accurately the prober resolved keys, which beacon visitors
// were identified.
json attacks_to_json(const RunResult& run, const OracleResult& oracle) {
  using Edge = std::pair<DeviceId, DayIndex>;

  std::set<Edge> central;
  for (const CentralReportEntry& e : run.central_report_log) central.insert({e.user_id, e.day});
  std::set<Edge> central_truth;
  for (const CentralEdge& e : oracle.expected_central_reports) {
    central_truth.insert({e.device_id, e.day});
  }
  std::size_t central_hits = 0;
  for (const Edge& e : central) central_hits += central_truth.contains(e) ? 1 : 0;

  std::map<std::pair<DayIndex, Bytes16>, std::string> key_owner;
  for (const DiagnosisKeyBatch& b : run.server_batches) {
    for (const DiagnosisKey& k : b.keys) key_owner[{k.tek.day, k.tek.key}] = b.uploader;
  }
  std::size_t probed = 0;
  std::size_t probe_correct = 0;
  for (const ProbeRecord& p : run.probe_log) {
    if (!p.probed) continue;
    probed += 1;
    auto it = key_owner.find({p.key.day, p.key.key});
    bool truth = it != key_owner.end() && oracle.has_match(it->second, p.prober, p.key.day);
    probe_correct += p.matched == truth ? 1 : 0;
  }

  // Uploaders that are not devices are beacons; their match edges are the
  // true visitor set of the surveilled location.
  std::set<Edge> visitor_truth;
  for (const MatchEdge& e : oracle.match_edges) {
    if (!run.devices.contains(e.uploader)) visitor_truth.insert({e.receiver, e.day});
  }
  std::set<Edge> visitors_identified;
  for (const Edge& e : central) {
    if (visitor_truth.contains(e)) visitors_identified.insert(e);
  }

  json j;
  j["central_report_edges"] = edge_array(central);
  j["central_precision"] = ratio(central_hits, central.size());
  j["central_recall"] = ratio(central_hits, central_truth.size());
  j["probed_keys"] = probed;
  j["probe_accuracy"] = ratio(probe_correct, probed);
  j["beacon_visitors_identified"] = edge_array(visitors_identified);
  j["beacon_visitor_recall"] = ratio(visitors_identified.size(), visitor_truth.size());
  return j;
}

json run_to_json(const RunResult& run, const OracleResult* oracle) {
  json j;
  j["run_info"] = {{"seed", run.seed},
                   {"seed_overridden", run.seed_overridden},
                   {"duration_days", run.duration_days}};

  j["notifications"] = json::array();
  for (const Notification& n : run.notifications) {
    j["notifications"].push_back({{"device_id", n.device_id},
                                  {"day", n.day},
                                  {"total_risk", n.total_risk},
                                  {"issued_at_minute", n.issued_at}});
  }

  j["consent_events"] = json::array();
  for (const ConsentEvent& e : run.consent_events) {
    j["consent_events"].push_back({{"device_id", e.device_id},
                                   {"minute", e.minute},
                                   {"purpose", e.purpose},
                                   {"granted", e.granted}});
  }

  j["uploads"] = json::array();
  for (const UploadEvent& u : run.uploads) {
    j["uploads"].push_back({{"uploader", u.uploader},
                            {"day", u.day},
                            {"batch_id", u.batch_id},
                            {"coerced", u.coerced},
                            {"consented", u.consented},
                            {"key_count", u.key_count}});
  }

  json batches = json::array();
  for (const DiagnosisKeyBatch& b : run.server_batches) {
    json keys = json::array();
    for (const DiagnosisKey& k : b.keys) {
      keys.push_back({{"day", k.tek.day}, {"key_hex", to_hex(k.tek.key)}});
    }
    batches.push_back({{"batch_id", b.batch_id},
                       {"published_at_minute", b.published_at},
                       {"uploader", b.uploader},
                       {"coerced", b.coerced},
                       {"report_type", b.keys.empty() ? "" : to_string(b.keys.front().report_type)},
                       {"keys", keys}});
  }
  json central = json::array();
  for (const CentralReportEntry& e : run.central_report_log) {
    central.push_back({{"user_id", e.user_id},
                       {"day", e.day},
                       {"total_risk", e.total_risk},
                       {"reported_at_minute", e.reported_at}});
  }
  j["server"] = {{"batches", batches}, {"central_report_log", central}};

  json devices = json::object();
  for (const auto& [id, d] : run.devices) {
    devices[id] = {{"app_kind", to_string(d.app_kind)},
                   {"approved", d.approved},
                   {"allowlisted", d.allowlisted},
                   {"enabled", d.enabled},
                   {"sent_key_count", d.sent_key_count},
                   {"received_record_count", d.received_record_count},
                   {"notified_days", d.notified_days},
                   {"api_audit",
                    {{"retrieve_ok", d.audit.retrieve_ok},
                     {"retrieve_consent_denied", d.audit.retrieve_consent_denied},
                     {"retrieve_access_denied", d.audit.retrieve_access_denied},
                     {"match_ok", d.audit.match_ok},
                     {"match_rate_limited", d.audit.match_rate_limited},
                     {"match_access_denied", d.audit.match_access_denied}}}};
  }
  j["devices"] = devices;

  j["probe_log"] = json::array();
  for (const ProbeRecord& p : run.probe_log) {
    j["probe_log"].push_back({{"prober", p.prober},
                              {"key_day", p.key.day},
                              {"key_hex", to_hex(p.key.key)},
                              {"report_type", to_string(p.report_type)},
                              {"probed", p.probed},
                              {"matched", p.matched},
                              {"matched_day", p.matched_day},
                              {"matched_duration_minutes", p.matched_duration_minutes}});
  }

  json budget = json::object();
  for (const auto& [id, d] : run.devices) {
    if (d.app_kind == AppKind::none) continue;
    budget[id] = {{"retrieve_calls", d.audit.retrieve_ok + d.audit.retrieve_consent_denied +
                                         d.audit.retrieve_access_denied},
                  {"match_calls", d.audit.match_ok + d.audit.match_rate_limited +
                                      d.audit.match_access_denied},
                  {"match_ok", d.audit.match_ok},
                  {"match_rate_limited", d.audit.match_rate_limited}};
  }
  j["budget_audit"] = budget;

  if (oracle != nullptr) {
    j["attacks"] = attacks_to_json(run, *oracle);
    j["oracle"] = oracle_to_json(*oracle);
    j["oracle_diff"] = diff_to_json(run, *oracle);
  }
  if (!run.event_log.empty()) j["event_log"] = run.event_log;
  return j;
}

std::string dump(const json& j, bool pretty) {
  return (pretty ? j.dump(2) : j.dump()) + "\n";
}

}  // namespace

std::string report_json(const RunResult& run, const OracleResult* oracle, bool pretty) {
  return dump(run_to_json(run, oracle), pretty);
}

std::string oracle_report_json(const OracleResult& oracle, bool pretty) {
  return dump(oracle_to_json(oracle), pretty);
}

std::string report_csv(const RunResult& run, const OracleResult* oracle) {
  std::map<DeviceId, std::set<DayIndex>> expected;
  if (oracle != nullptr) {
    for (const NotificationEdge& e : oracle->expected_notifications) {
      expected[e.device_id].insert(e.day);
    }
  }
  auto join = [](const auto& days) {
    std::string out;
    for (DayIndex d : days) {
      if (!out.empty()) out += ';';
      out += std::to_string(d);
    }
    return out;
  };
  std::ostringstream csv;
  csv << "device_id,app_kind,notified_days,expected_notified_days,agree\n";
  for (const auto& [id, d] : run.devices) {
    std::set<DayIndex> actual(d.notified_days.begin(), d.notified_days.end());
    csv << id << ',' << to_string(d.app_kind) << ',' << join(actual) << ',';
    if (oracle == nullptr) {
      csv << ",\n";
    } else {
      const std::set<DayIndex>& exp = expected[id];
      csv << join(exp) << ',' << (actual == exp ? "yes" : "no") << "\n";
    }
  }
  return csv.str();
}

}  // namespace ensim
