#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "ensim/authority.hpp"

namespace ensim {

/// Exposure notification shown to a user: which day carried the risk and
/// how much. Never says who the infected contact was.
struct Notification {
  DeviceId device_id;
  DayIndex day = 0;
  double total_risk = 0.0;
  Minute issued_at = 0;
};

/// Per-app runtime state kept across daily polls.
struct AppState {
  AppConfig cfg;
  int cursor = 0;  // last batch id already processed
  std::set<DayIndex> notified_days;
  std::deque<DiagnosisKey> probe_queue;
  std::set<std::pair<DayIndex, Bytes16>> keys_seen;
};

struct PollOutcome {
  std::vector<Notification> notifications;
  std::vector<DailySummary> central_reports;  // what a malicious app sent home
  bool rate_limited = false;
  int new_batches = 0;
};

struct ProbeRecord {
  DeviceId prober;
  TemporaryExposureKey key;
  ReportType report_type = ReportType::confirmed_test;
  bool probed = false;
  bool matched = false;
  DayIndex matched_day = -1;
  double matched_duration_minutes = 0.0;
};

struct ProbeOutcome {
  std::vector<ProbeRecord> results;
  bool rate_limited = false;
};

/// Daily poll of a well-behaved exposure notification app: download new
/// batches, match them all in one rate-limited call, notify the user when a
/// daily summary crosses the threshold. Sends nothing back to the server.
/// A rate-limit error turns into a skipped poll; the cursor stays put so the
/// batches are retried next time.
PollOutcome honest_poll(AppState& app, Device& device, AuthorityServer& server,
                        const RiskConfig& risk_cfg, Minute now);

/// Identical to honest_poll, plus the re-centralizing step: every positive
/// daily summary is reported to the server together with the device id, with
/// no consent prompt anywhere on the path. One malicious app turns the
/// decentralized design into central contact collection.
PollOutcome recentralize_poll(AppState& app, Device& device, AuthorityServer& server,
                              const RiskConfig& risk_cfg, Minute now);

/// Tests keys one by one, one budget unit each, recording exactly which key
/// matched -- the batch-anonymity bypass. Stops early when the budget runs
/// out; unprobed keys are returned marked probed=false.
ProbeOutcome probe(AppState& app, Device& device, std::span<const DiagnosisKey> keys,
                   const RiskConfig& risk_cfg, Minute now);

/// Daily poll of the probing app: enqueue newly published keys, then probe
/// from the front of the queue while the budget lasts.
ProbeOutcome probe_poll(AppState& app, Device& device, AuthorityServer& server,
                        const RiskConfig& risk_cfg, Minute now);

/// Attacker hardware broadcasting identifiers derived from chosen daily
/// keys at a fixed location. Needs no consent, no approval, no enablement;
/// receiving devices store its identifiers like any other. Never scans.
struct Beacon {
  std::string beacon_id;
  std::string location_label;
  std::map<DayIndex, TemporaryExposureKey> chosen_teks;

  EphemeralId tick(Minute now, int rotation_minutes) const;

  /// The last 14 chosen daily keys up to `day`, mirroring what a diagnosed
  /// device would upload.
  std::vector<TemporaryExposureKey> keys_for_upload(DayIndex day) const;
};

/// Scripted coercion: the victim's stored keys are uploaded as "infected"
/// without any consent gate, flagged as coerced in the batch. Returns the
/// batch id, or nothing when the victim has no keys to take.
std::optional<int> coerced_upload(Device& device, AuthorityServer& server, Minute now);

}  // namespace ensim
