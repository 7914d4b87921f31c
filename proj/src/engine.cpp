#include "ensim/engine.hpp"

#include <algorithm>
#include <cstdio>

namespace ensim {

World::World(Scenario scenario, RunOptions options)
    : scenario_(std::move(scenario)),
      opts_(std::move(options)),
      streams_(opts_.seed_override.value_or(scenario_.seed)),
      noise_(streams_.stream("channel")) {
  validate_scenario(scenario_);
  result_.seed = opts_.seed_override.value_or(scenario_.seed);
  result_.seed_overridden = opts_.seed_override.has_value();
  result_.duration_days = scenario_.duration_days;

  DeviceConfig dev_cfg;
  dev_cfg.rotation_minutes = scenario_.rotation_minutes;
  dev_cfg.scan_period_minutes = scenario_.scan_period_minutes;
  dev_cfg.min_sightings = scenario_.min_sightings;
  dev_cfg.close_contact_db = scenario_.channel.close_contact_db;

  for (const DeviceSpec& spec : scenario_.devices) {
    AppConfig app{spec.app_kind, spec.approved, spec.allowlisted};
    devices_.emplace(spec.id,
                     Device(spec.id, dev_cfg, streams_.stream("tek:" + spec.id), app));
    if (spec.app_kind != AppKind::none) {
      apps_.emplace(spec.id, AppState{.cfg = app});
    }
    consent_policy_[spec.id] = spec.consent_policy;
    enables_by_minute_[spec.enable_at_minute].push_back(spec.id);
  }

  // Beacon keys are chosen by the attacker up front, one per simulated day,
  // from the beacon's own stream (order-independent of everything else).
  for (const BeaconSpec& spec : scenario_.beacons) {
    Beacon b{.beacon_id = spec.beacon_id, .location_label = spec.location_label};
    RngStream key_stream = streams_.stream("beacon:" + spec.beacon_id);
    for (DayIndex d = 0; d < scenario_.duration_days; ++d) {
      b.chosen_teks.emplace(d, generate_tek(key_stream, d));
    }
    beacons_.emplace(spec.beacon_id, std::move(b));
  }

  for (const DiagnosisEvent& ev : scenario_.diagnoses) diagnoses_by_day_[ev.day].push_back(ev);
  for (const CoercionEvent& ev : scenario_.coercions) coercions_by_day_[ev.day].push_back(ev);
}

Device& World::device(const DeviceId& id) {
  auto it = devices_.find(id);
  if (it == devices_.end()) throw std::out_of_range("no such device: " + id);
  return it->second;
}

void World::log(Minute now, const std::string& line) {
  if (opts_.event_log) {
    result_.event_log.push_back("t=" + std::to_string(now) + " " + line);
  }
}

void World::apply_enables(Minute now) {
  auto it = enables_by_minute_.find(now);
  if (it == enables_by_minute_.end()) return;
  for (const DeviceId& id : it->second) {
    Device& dev = devices_.at(id);
    bool granted = consent_policy_.at(id);
    result_.consent_events.push_back({id, now, "enable", granted});
    dev.enable_exposure_notification(granted, now);
    log(now, "enable " + id + " consent=" + (granted ? "yes" : "no"));
  }
}

void World::close_windows() {
  for (auto& [id, dev] : devices_) dev.close_rotation_window();
}

void World::handle_diagnosis(const DiagnosisEvent& ev, Minute now) {
  if (auto bit = beacons_.find(ev.device_id); bit != beacons_.end()) {
    // The beacon operator self-reports the chosen keys as "infected"; no
    // user, no consent prompt, no device involved.
    std::vector<TemporaryExposureKey> keys = bit->second.keys_for_upload(ev.day);
    int batch = keys.empty() ? 0
                             : server_.upload_keys(keys, ev.report_type, now, ev.device_id);
    result_.uploads.push_back({ev.device_id, ev.day, batch, false, true,
                               static_cast<int>(keys.size())});
    log(now, "diagnose beacon " + ev.device_id + " -> batch " + std::to_string(batch) + " (" +
                 std::to_string(keys.size()) + " keys)");
    return;
  }

  // A real diagnosis: the health authority asks the patient to share keys.
  // Key release prompts the user on every single call.
  Device& dev = devices_.at(ev.device_id);
  result_.consent_events.push_back({ev.device_id, now, "retrieve_upload", ev.consent});
  auto res = dev.api_retrieve_keys(ev.consent);
  if (!res.ok() || res.value.empty()) {
    result_.uploads.push_back({ev.device_id, ev.day, 0, false, ev.consent, 0});
    log(now, "diagnose " + ev.device_id + ": no upload (" +
                 (res.ok() ? "no keys" : to_string(res.status)) + ")");
    return;
  }
  int batch = server_.upload_keys(res.value, ev.report_type, now, ev.device_id);
  result_.uploads.push_back({ev.device_id, ev.day, batch, false, true,
                             static_cast<int>(res.value.size())});
  log(now, "diagnose " + ev.device_id + " -> batch " + std::to_string(batch) + " (" +
               std::to_string(res.value.size()) + " keys)");
}

void World::handle_coercion(const CoercionEvent& ev, Minute now) {
  Device& dev = devices_.at(ev.device_id);
  int count = static_cast<int>(dev.sent_store().entries.size());
  std::optional<int> batch = coerced_upload(dev, server_, now);
  result_.uploads.push_back({ev.device_id, ev.day, batch.value_or(0), true, false, count});
  log(now, "coerce " + ev.device_id + " -> batch " + std::to_string(batch.value_or(0)) + " (" +
               std::to_string(count) + " keys)");
}

void World::run_polls(Minute now) {
  for (auto& [id, app] : apps_) {
    Device& dev = devices_.at(id);
    switch (app.cfg.kind) {
      case AppKind::none:
        break;
      case AppKind::honest:
      case AppKind::recentralizing: {
        PollOutcome out = app.cfg.kind == AppKind::honest
                              ? honest_poll(app, dev, server_, scenario_.risk, now)
                              : recentralize_poll(app, dev, server_, scenario_.risk, now);
        for (const Notification& n : out.notifications) {
          result_.notifications.push_back(n);
          char risk[32];
          std::snprintf(risk, sizeof risk, "%.2f", n.total_risk);
          log(now, "notify " + n.device_id + " day=" + std::to_string(n.day) + " risk=" + risk);
        }
        if (out.rate_limited) log(now, "poll " + id + " rate-limited");
        break;
      }
      case AppKind::probing: {
        ProbeOutcome out = probe_poll(app, dev, server_, scenario_.risk, now);
        for (const ProbeRecord& r : out.results) {
          result_.probe_log.push_back(r);
          if (r.probed) {
            log(now, "probe " + id + " day=" + std::to_string(r.key.day) + " key=" +
                         to_hex(r.key.key) + " matched=" + (r.matched ? "yes" : "no"));
          }
        }
        break;
      }
    }
  }
}

void World::day_boundary(DayIndex day, Minute now) {
  close_windows();
  for (auto& [id, dev] : devices_) {
    dev.prune(day);
    dev.roll_day(day);
  }
  if (auto it = diagnoses_by_day_.find(day); it != diagnoses_by_day_.end()) {
    for (const DiagnosisEvent& ev : it->second) handle_diagnosis(ev, now);
  }
  if (auto it = coercions_by_day_.find(day); it != coercions_by_day_.end()) {
    for (const CoercionEvent& ev : it->second) handle_coercion(ev, now);
  }
  run_polls(now);
}

void World::deliver(const EphemeralId& epi, const DeviceId& receiver, double distance_m,
                    Minute now) {
  Device& dev = devices_.at(receiver);
  if (!dev.en_enabled()) return;
  for (auto& [id, sighting] : broadcast(epi, {{receiver, distance_m}}, scenario_.channel,
                                        noise_, now)) {
    dev.on_sighting(sighting);
  }
}

void World::broadcast_step(Minute now) {
  for (const ContactEvent& c : scenario_.contacts) {
    if (now < c.start_minute || now >= c.start_minute + static_cast<Minute>(c.duration_minutes)) {
      continue;
    }
    if (auto epi = devices_.at(c.device_a).on_tick(now)) {
      deliver(*epi, c.device_b, c.distance_m, now);
    }
    if (auto epi = devices_.at(c.device_b).on_tick(now)) {
      deliver(*epi, c.device_a, c.distance_m, now);
    }
  }
  for (const VisitEvent& v : scenario_.visits) {
    if (now < v.start_minute || now >= v.start_minute + static_cast<Minute>(v.duration_minutes)) {
      continue;
    }
    EphemeralId epi = beacons_.at(v.beacon_id).tick(now, scenario_.rotation_minutes);
    deliver(epi, v.device_id, v.distance_m, now);
  }
}

void World::run_day() {
  DayIndex day = next_day_;
  Minute start = static_cast<Minute>(day) * kMinutesPerDay;
  for (Minute m = start; m < start + kMinutesPerDay; ++m) {
    apply_enables(m);
    if (m == start) {
      day_boundary(day, m);
      if (on_day_start) on_day_start(*this, day);
    } else if (m % scenario_.rotation_minutes == 0) {
      close_windows();
    }
    if (m % scenario_.scan_period_minutes == 0) broadcast_step(m);
  }
  next_day_ = day + 1;
}

RunResult World::run() {
  while (!done()) run_day();
  return take_result();
}

RunResult World::take_result() {
  result_.server_batches = server_.batches();
  result_.central_report_log = server_.central_report_log();
  result_.devices.clear();
  for (const auto& [id, dev] : devices_) {
    DeviceEndState end;
    const AppConfig& app = dev.installed_app();
    end.app_kind = app.kind;
    end.approved = app.approved;
    end.allowlisted = app.allowlisted;
    end.enabled = dev.en_enabled();
    end.sent_key_count = static_cast<int>(dev.sent_store().entries.size());
    end.received_record_count = static_cast<int>(dev.received_store().records.size());
    end.audit = dev.audit();
    if (auto it = apps_.find(id); it != apps_.end()) {
      end.notified_days.assign(it->second.notified_days.begin(),
                               it->second.notified_days.end());
    }
    result_.devices.emplace(id, std::move(end));
  }
  std::sort(result_.notifications.begin(), result_.notifications.end(),
            [](const Notification& a, const Notification& b) {
              return std::tie(a.device_id, a.day) < std::tie(b.device_id, b.day);
            });
  return std::move(result_);
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  World world(scenario, options);
  return world.run();
}

}  // namespace ensim
