#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ensim/actors.hpp"
#include "ensim/authority.hpp"
#include "ensim/scenario.hpp"

namespace ensim {

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  bool event_log = false;  // collect a per-event trace for verbose runs
};

/// Every moment the OS asked the user for permission, and the answer. The
/// interesting rows are the ones that are missing: attack paths that never
/// produced a prompt.
struct ConsentEvent {
  DeviceId device_id;
  Minute minute = 0;
  std::string purpose;  // "enable" or "retrieve_upload"
  bool granted = false;
};

/// One attempted key upload. batch_id 0 means it never reached the server
/// (consent refused, or no keys to send).
struct UploadEvent {
  std::string uploader;
  DayIndex day = 0;
  int batch_id = 0;
  bool coerced = false;
  bool consented = false;
  int key_count = 0;
};

struct DeviceEndState {
  AppKind app_kind = AppKind::none;
  bool approved = true;
  bool allowlisted = false;
  bool enabled = false;
  int sent_key_count = 0;
  int received_record_count = 0;
  ApiAudit audit;
  std::vector<DayIndex> notified_days;
};

struct RunResult {
  std::uint64_t seed = 0;
  bool seed_overridden = false;
  int duration_days = 0;
  std::vector<Notification> notifications;
  std::vector<ProbeRecord> probe_log;
  std::vector<ConsentEvent> consent_events;
  std::vector<UploadEvent> uploads;
  std::vector<std::string> event_log;
  std::vector<DiagnosisKeyBatch> server_batches;
  std::vector<CentralReportEntry> central_report_log;
  std::map<DeviceId, DeviceEndState> devices;
};

/// Deterministic minute-resolution event loop over one scenario.
///
/// Day boundary order: rotation windows close, stores are pruned, daily keys
/// roll, scheduled diagnoses upload (consent permitting), coercions strike,
/// then every app polls in device-id order. Within the day, broadcasts run
/// on the scan grid and rotation windows close on the interval grid. All
/// randomness comes from labeled sub-streams of one master seed, so a rerun
/// with the same seed replays the identical history.
class World {
 public:
  explicit World(Scenario scenario, RunOptions options = {});

  /// Runs every remaining day and returns the collected result.
  RunResult run();

  /// Boundary phases of the next day, then its minutes.
  void run_day();
  bool done() const { return next_day_ >= scenario_.duration_days; }

  /// Called after the boundary phases of each day (stores pruned, uploads
  /// and polls done), before any of that day's broadcasts.
  std::function<void(World&, DayIndex)> on_day_start;

  Device& device(const DeviceId& id);
  const AuthorityServer& server() const { return server_; }
  const Scenario& scenario() const { return scenario_; }

  /// Snapshots end-of-run state into the result and moves it out.
  RunResult take_result();

 private:
  void apply_enables(Minute now);
  void day_boundary(DayIndex day, Minute now);
  void close_windows();
  void handle_diagnosis(const DiagnosisEvent& ev, Minute now);
  void handle_coercion(const CoercionEvent& ev, Minute now);
  void run_polls(Minute now);
  void broadcast_step(Minute now);
  void deliver(const EphemeralId& epi, const DeviceId& receiver, double distance_m, Minute now);
  void log(Minute now, const std::string& line);

  Scenario scenario_;
  RunOptions opts_;
  StreamFactory streams_;
  RngStream noise_;
  AuthorityServer server_;
  std::map<DeviceId, Device> devices_;
  std::map<DeviceId, AppState> apps_;
  std::map<std::string, Beacon> beacons_;
  std::map<DayIndex, std::vector<DiagnosisEvent>> diagnoses_by_day_;
  std::map<DayIndex, std::vector<CoercionEvent>> coercions_by_day_;
  std::map<Minute, std::vector<DeviceId>> enables_by_minute_;
  std::map<DeviceId, bool> consent_policy_;
  DayIndex next_day_ = 0;
  RunResult result_;
};

RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

}  // namespace ensim
