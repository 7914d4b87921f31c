#include "ensim/device.hpp"

#include <algorithm>
#include <set>

namespace ensim {

namespace {

template <class T>
concept exposes_epi = requires(T t) { t.epi; };
template <class T>
concept exposes_key = requires(T t) { t.key; } || requires(T t) { t.tek; };

// The match result must stay opaque: day, duration, bucket, risk and nothing
// else. If a field ever leaks the matched key or identifier this fails to
// compile.
static_assert(!exposes_epi<ExposureWindow>);
static_assert(!exposes_key<ExposureWindow>);

}  // namespace

std::string to_string(AppKind k) {
  switch (k) {
    case AppKind::none: return "none";
    case AppKind::honest: return "honest";
    case AppKind::recentralizing: return "recentralizing";
    case AppKind::probing: return "probing";
  }
  return "none";
}

AppKind app_kind_from_string(const std::string& s) {
  if (s == "none") return AppKind::none;
  if (s == "honest") return AppKind::honest;
  if (s == "recentralizing") return AppKind::recentralizing;
  if (s == "probing") return AppKind::probing;
  throw ConfigError("unknown app kind '" + s + "'");
}

std::string to_string(ApiStatus s) {
  switch (s) {
    case ApiStatus::ok: return "ok";
    case ApiStatus::consent_denied: return "consent_denied";
    case ApiStatus::access_denied: return "access_denied";
    case ApiStatus::rate_limited: return "rate_limited";
  }
  return "ok";
}

int MatchBudget::calls_in_window(Minute now) const {
  int n = 0;
  for (Minute t : call_times) {
    if (now - t < kMinutesPerDay) ++n;
  }
  return n;
}

bool MatchBudget::check(Minute now) const { return calls_in_window(now) < limit(); }

void MatchBudget::record(Minute now) {
  call_times.push_back(now);
  // Entries that fell out of the trailing window can never count again.
  std::erase_if(call_times, [now](Minute t) { return now - t >= kMinutesPerDay; });
}

Device::Device(DeviceId id, DeviceConfig cfg, RngStream tek_stream, AppConfig app)
    : id_(std::move(id)), cfg_(cfg), tek_stream_(std::move(tek_stream)), app_(app) {
  budget_.allowlisted = app.allowlisted;
}

void Device::ensure_tek_for(DayIndex day) {
  if (current_tek_ && current_tek_->day == day) return;
  current_tek_ = generate_tek(tek_stream_, day);
  s_store_.entries[day] = *current_tek_;
  while (s_store_.entries.size() > static_cast<std::size_t>(kMaxStoredKeys)) {
    s_store_.entries.erase(s_store_.entries.begin());
  }
}

void Device::enable_exposure_notification(bool user_consent, Minute now) {
  if (!user_consent || en_enabled_) return;
  en_enabled_ = true;
  ensure_tek_for(static_cast<DayIndex>(now / kMinutesPerDay));
}

void Device::roll_day(DayIndex day) {
  if (en_enabled_) ensure_tek_for(day);
}

std::optional<EphemeralId> Device::on_tick(Minute now) {
  if (!en_enabled_) return std::nullopt;
  auto day = static_cast<DayIndex>(now / kMinutesPerDay);
  ensure_tek_for(day);
  auto interval = static_cast<IntervalIndex>((now % kMinutesPerDay) / cfg_.rotation_minutes);
  return derive_epi(*current_tek_, interval, cfg_.intervals_per_day());
}

void Device::on_sighting(const Sighting& sighting) {
  if (!en_enabled_) return;
  auto day = static_cast<DayIndex>(sighting.time / kMinutesPerDay);
  PendingSighting& p = r_store_.pending[sighting.epi];
  if (p.count == 0) {
    p.day = day;
    p.min_attenuation_db = sighting.attenuation_db;
  }
  p.count += 1;
  p.min_attenuation_db = std::min(p.min_attenuation_db, sighting.attenuation_db);

  if (!p.promoted && p.count >= cfg_.min_sightings &&
      p.min_attenuation_db <= cfg_.close_contact_db) {
    p.promoted = true;
  }
  if (p.promoted) {
    ReceivedRecord& rec = r_store_.records[sighting.epi];
    rec.epi = sighting.epi;
    rec.day = p.day;
    rec.sighting_count = p.count;
    rec.exposure_minutes = static_cast<double>(p.count) * cfg_.scan_period_minutes;
    rec.min_attenuation_db = p.min_attenuation_db;
  }
}

void Device::close_rotation_window() { r_store_.pending.clear(); }

void Device::prune(DayIndex current_day) {
  // R keeps anything collected up to 14 days ago; strictly older goes.
  std::erase_if(r_store_.records,
                [current_day](const auto& kv) { return current_day - kv.second.day > kRetentionDays; });
  // S is the upload set: the 14 most recent daily keys.
  std::erase_if(s_store_.entries,
                [current_day](const auto& kv) { return kv.first < current_day - (kMaxStoredKeys - 1); });
}

ApiResult<std::vector<TemporaryExposureKey>> Device::api_retrieve_keys(bool user_consent) {
  if (app_.kind == AppKind::none || !app_.approved) {
    audit_.retrieve_access_denied += 1;
    return {ApiStatus::access_denied, {}};
  }
  if (!user_consent) {
    audit_.retrieve_consent_denied += 1;
    return {ApiStatus::consent_denied, {}};
  }
  audit_.retrieve_ok += 1;
  std::vector<TemporaryExposureKey> keys;
  keys.reserve(s_store_.entries.size());
  for (const auto& [day, tek] : s_store_.entries) keys.push_back(tek);
  return {ApiStatus::ok, std::move(keys)};
}

ApiResult<std::vector<ExposureWindow>> Device::api_match(
    std::span<const DiagnosisKey> diagnosis_keys, const RiskConfig& risk_cfg, Minute now) {
  if (app_.kind == AppKind::none || !app_.approved) {
    audit_.match_access_denied += 1;
    return {ApiStatus::access_denied, {}};
  }
  if (!budget_.check(now)) {
    audit_.match_rate_limited += 1;
    return {ApiStatus::rate_limited, {}};
  }
  budget_.record(now);
  audit_.match_ok += 1;

  std::vector<ExposureWindow> windows;
  for (const DiagnosisKey& dk : diagnosis_keys) {
    std::set<EphemeralId> ids;
    for (const EphemeralId& epi : derive_day_identifiers(dk.tek, cfg_.intervals_per_day())) {
      ids.insert(epi);
    }
    std::vector<ReceivedRecord> matched;
    for (const auto& [epi, rec] : r_store_.records) {
      if (ids.contains(epi)) matched.push_back(rec);
    }
    auto key_windows = windows_from_match(matched, dk.report_type, risk_cfg);
    windows.insert(windows.end(), key_windows.begin(), key_windows.end());
  }
  return {ApiStatus::ok, std::move(windows)};
}

}  // namespace ensim
