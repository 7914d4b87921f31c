#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ensim/radio.hpp"
#include "ensim/riskscore.hpp"

namespace ensim {

constexpr int kRetentionDays = 14;
constexpr int kDefaultMinSightings = 3;
constexpr int kMatchCallsPer24h = 6;
constexpr int kAllowlistedCallsPer24h = 1'000'000;
constexpr int kMaxStoredKeys = 14;

enum class AppKind { none, honest, recentralizing, probing };

std::string to_string(AppKind k);
AppKind app_kind_from_string(const std::string& s);

/// What the OS knows about the installed app: its behavior class, whether
/// the platform vendor approved its API access, and whether it holds an
/// allowlisted (testing) account.
struct AppConfig {
  AppKind kind = AppKind::none;
  bool approved = true;
  bool allowlisted = false;
};

enum class ApiStatus { ok, consent_denied, access_denied, rate_limited };

std::string to_string(ApiStatus s);

template <typename T>
struct ApiResult {
  ApiStatus status = ApiStatus::ok;
  T value{};

  bool ok() const { return status == ApiStatus::ok; }
};

/// Own daily keys, at most the 14 most recent days.
struct SentKeyStore {
  std::map<DayIndex, TemporaryExposureKey> entries;
};

struct PendingSighting {
  DayIndex day = 0;
  int count = 0;
  double min_attenuation_db = 0.0;
  bool promoted = false;
};

/// Identifiers received from others. pending holds sightings of the current
/// rotation window that have not met the promotion rule yet; they are
/// discarded when the window closes.
struct ReceivedIdStore {
  std::map<EphemeralId, ReceivedRecord> records;
  std::map<EphemeralId, PendingSighting> pending;
};

/// Rolling 24-hour budget for the match API.
struct MatchBudget {
  std::vector<Minute> call_times;
  bool allowlisted = false;

  int limit() const { return allowlisted ? kAllowlistedCallsPer24h : kMatchCallsPer24h; }
  bool check(Minute now) const;
  void record(Minute now);
  int calls_in_window(Minute now) const;
};

struct DiagnosisKey {
  TemporaryExposureKey tek;
  ReportType report_type = ReportType::confirmed_test;
};

struct DeviceConfig {
  int rotation_minutes = kDefaultRotationMinutes;
  int scan_period_minutes = 2;
  int min_sightings = kDefaultMinSightings;
  double close_contact_db = 55.0;

  int intervals_per_day() const { return kMinutesPerDay / rotation_minutes; }
};

struct ApiAudit {
  int retrieve_ok = 0;
  int retrieve_consent_denied = 0;
  int retrieve_access_denied = 0;
  int match_ok = 0;
  int match_rate_limited = 0;
  int match_access_denied = 0;
};

/// The OS-layer exposure notification service of one simulated device. Owns
/// the key schedule, the stores S and R, and the rate-limited API offered to
/// the installed app. Apps never touch the stores directly; everything they
/// can learn flows through api_retrieve_keys and api_match.
class Device {
 public:
  Device(DeviceId id, DeviceConfig cfg, RngStream tek_stream,
         AppConfig app = AppConfig{});

  const DeviceId& id() const { return id_; }
  bool en_enabled() const { return en_enabled_; }
  const AppConfig& installed_app() const { return app_; }
  const DeviceConfig& config() const { return cfg_; }

  /// Consent true enables the service and generates the first daily key;
  /// consent false is a no-op. Disabled devices neither broadcast nor scan.
  void enable_exposure_notification(bool user_consent, Minute now);

  /// Called once per scan period. Returns the identifier to broadcast, or
  /// nothing while disabled. Generates a fresh daily key at day boundaries.
  std::optional<EphemeralId> on_tick(Minute now);

  /// Day-boundary housekeeping: generates the daily key even on days without
  /// any radio activity, so S always covers the days the device was on.
  void roll_day(DayIndex day);

  /// Accumulates a sighting into the pending window and promotes it to R
  /// once it has been seen min_sightings times with a close-range minimum
  /// attenuation. Further sightings keep updating the promoted record.
  void on_sighting(const Sighting& sighting);

  /// Discards pending sightings that never met the promotion rule.
  void close_rotation_window();

  /// Drops R records older than 14 days and trims S to the 14 most recent
  /// daily keys.
  void prune(DayIndex current_day);

  // --- exposure-notification API surface (the only path apps have to S and R) ---

  /// Requires an approved app and explicit user consent on every call.
  ApiResult<std::vector<TemporaryExposureKey>> api_retrieve_keys(bool user_consent);

  /// Matches diagnosis keys against R. No consent needed; one budget unit
  /// per call, empty key lists included. Results carry day, duration,
  /// bucket and risk only -- never which key or identifier matched.
  ApiResult<std::vector<ExposureWindow>> api_match(std::span<const DiagnosisKey> diagnosis_keys,
                                                   const RiskConfig& risk_cfg, Minute now);

  bool budget_check(Minute now) const { return budget_.check(now); }

  // OS-internal inspection used by the event loop, reporting and tests.
  // Not reachable from app behaviors, which only see the api_* calls.
  const SentKeyStore& sent_store() const { return s_store_; }
  const ReceivedIdStore& received_store() const { return r_store_; }
  const MatchBudget& budget() const { return budget_; }
  const ApiAudit& audit() const { return audit_; }

 private:
  void ensure_tek_for(DayIndex day);

  DeviceId id_;
  DeviceConfig cfg_;
  RngStream tek_stream_;
  AppConfig app_;
  bool en_enabled_ = false;
  std::optional<TemporaryExposureKey> current_tek_;
  SentKeyStore s_store_;
  ReceivedIdStore r_store_;
  MatchBudget budget_;
  ApiAudit audit_;
};

}  // namespace ensim
