#include "ensim/actors.hpp"

#include <algorithm>

namespace ensim {

namespace {

// Shared poll body. Malicious reporting is the only difference between the
// honest and re-centralizing apps.
PollOutcome poll_impl(AppState& app, Device& device, AuthorityServer& server,
                      const RiskConfig& risk_cfg, Minute now, bool report_centrally) {
  PollOutcome out;
  auto batches = server.download_since(app.cursor);
  out.new_batches = static_cast<int>(batches.size());
  if (batches.empty()) return out;  // no new keys: no match call, budget preserved

  std::vector<DiagnosisKey> keys;
  for (const DiagnosisKeyBatch& b : batches) {
    keys.insert(keys.end(), b.keys.begin(), b.keys.end());
  }

  auto result = device.api_match(keys, risk_cfg, now);
  if (result.status == ApiStatus::rate_limited) {
    out.rate_limited = true;  // skipped poll; cursor untouched so keys retry
    return out;
  }
  if (!result.ok()) return out;
  app.cursor = batches.back().batch_id;

  auto summaries = summarize(result.value);
  for (const DailySummary& s : summaries) {
    if (s.total_risk >= risk_cfg.notification_threshold && !app.notified_days.contains(s.day)) {
      app.notified_days.insert(s.day);
      out.notifications.push_back(Notification{device.id(), s.day, s.total_risk, now});
    }
  }

  if (report_centrally) {
    std::vector<DailySummary> positive;
    for (const DailySummary& s : summaries) {
      if (s.total_risk > 0.0) positive.push_back(s);
    }
    if (!positive.empty()) {
      server.record_central_report(device.id(), positive, now);
      out.central_reports = std::move(positive);
    }
  }
  return out;
}

}  // namespace

PollOutcome honest_poll(AppState& app, Device& device, AuthorityServer& server,
                        const RiskConfig& risk_cfg, Minute now) {
  return poll_impl(app, device, server, risk_cfg, now, false);
}

PollOutcome recentralize_poll(AppState& app, Device& device, AuthorityServer& server,
                              const RiskConfig& risk_cfg, Minute now) {
  return poll_impl(app, device, server, risk_cfg, now, true);
}

ProbeOutcome probe(AppState&, Device& device, std::span<const DiagnosisKey> keys,
                   const RiskConfig& risk_cfg, Minute now) {
  ProbeOutcome out;
  out.results.reserve(keys.size());
  for (const DiagnosisKey& dk : keys) {
    ProbeRecord rec;
    rec.prober = device.id();
    rec.key = dk.tek;
    rec.report_type = dk.report_type;
    if (out.rate_limited) {
      out.results.push_back(rec);  // left unprobed
      continue;
    }
    auto result = device.api_match(std::span<const DiagnosisKey>(&dk, 1), risk_cfg, now);
    if (result.status == ApiStatus::rate_limited) {
      out.rate_limited = true;
      out.results.push_back(rec);
      continue;
    }
    if (!result.ok()) {
      out.results.push_back(rec);
      continue;
    }
    rec.probed = true;
    rec.matched = !result.value.empty();
    if (rec.matched) {
      rec.matched_day = result.value.front().day;
      for (const ExposureWindow& w : result.value) rec.matched_duration_minutes += w.duration_minutes;
    }
    out.results.push_back(rec);
  }
  return out;
}

ProbeOutcome probe_poll(AppState& app, Device& device, AuthorityServer& server,
                        const RiskConfig& risk_cfg, Minute now) {
  auto batches = server.download_since(app.cursor);
  if (!batches.empty()) {
    app.cursor = batches.back().batch_id;
    for (const DiagnosisKeyBatch& b : batches) {
      for (const DiagnosisKey& dk : b.keys) {
        auto tag = std::make_pair(dk.tek.day, dk.tek.key);
        if (app.keys_seen.insert(tag).second) app.probe_queue.push_back(dk);
      }
    }
  }

  std::vector<DiagnosisKey> todays(app.probe_queue.begin(), app.probe_queue.end());
  ProbeOutcome out = probe(app, device, todays, risk_cfg, now);
  std::size_t probed = 0;
  for (const ProbeRecord& r : out.results) {
    if (r.probed) ++probed;
  }
  app.probe_queue.erase(app.probe_queue.begin(),
                        app.probe_queue.begin() + static_cast<std::ptrdiff_t>(probed));
  return out;
}

EphemeralId Beacon::tick(Minute now, int rotation_minutes) const {
  auto day = static_cast<DayIndex>(now / kMinutesPerDay);
  auto it = chosen_teks.find(day);
  if (it == chosen_teks.end()) {
    throw std::out_of_range("beacon " + beacon_id + " has no chosen key for day " +
                            std::to_string(day));
  }
  auto interval = static_cast<IntervalIndex>((now % kMinutesPerDay) / rotation_minutes);
  return derive_epi(it->second, interval, kMinutesPerDay / rotation_minutes);
}

std::vector<TemporaryExposureKey> Beacon::keys_for_upload(DayIndex day) const {
  std::vector<TemporaryExposureKey> keys;
  for (const auto& [d, tek] : chosen_teks) {
    if (d <= day && day - d < kMaxStoredKeys) keys.push_back(tek);
  }
  return keys;
}

std::optional<int> coerced_upload(Device& device, AuthorityServer& server, Minute now) {
  std::vector<TemporaryExposureKey> keys;
  for (const auto& [day, tek] : device.sent_store().entries) keys.push_back(tek);
  if (keys.empty()) return std::nullopt;
  return server.upload_keys(std::move(keys), ReportType::confirmed_test, now, device.id(),
                            /*coerced=*/true);
}

}  // namespace ensim
