#include "ensim/oracle.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "ensim/radio.hpp"
#include "ensim/riskscore.hpp"

namespace ensim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Link {
  Minute start = 0;
  Minute end = 0;
  double distance_m = 0.0;
};

struct Upload {
  std::string uploader;
  DayIndex published_day = 0;
  std::vector<DayIndex> key_days;
  ReportType report_type = ReportType::confirmed_test;
};

// Pooled (minutes, min attenuation) a receiver ends up holding for one
// sender's key day: per rotation window, count audible scan ticks and apply
// the promotion rule, then pool the promoted windows.
struct PooledExposure {
  double minutes = 0.0;
  double min_attenuation_db = kInf;
};

class OracleBuilder {
 public:
  explicit OracleBuilder(const Scenario& s) : s_(s) {
    for (const DeviceSpec& d : s.devices) {
      device_ids_.push_back(d.id);
      if (d.consent_policy) enabled_at_[d.id] = d.enable_at_minute;
      spec_of_[d.id] = &d;
    }
    for (const BeaconSpec& b : s.beacons) beacon_ids_.insert(b.beacon_id);
    for (const ContactEvent& c : s.contacts) {
      Minute end = c.start_minute + static_cast<Minute>(c.duration_minutes);
      links_[{c.device_a, c.device_b}].push_back({c.start_minute, end, c.distance_m});
      links_[{c.device_b, c.device_a}].push_back({c.start_minute, end, c.distance_m});
    }
    for (const VisitEvent& v : s.visits) {
      Minute end = v.start_minute + static_cast<Minute>(v.duration_minutes);
      links_[{v.beacon_id, v.device_id}].push_back({v.start_minute, end, v.distance_m});
    }
  }

  OracleResult build() {
    collect_uploads();
    OracleResult out;
    std::set<std::tuple<DeviceId, std::string, DayIndex>> edge_seen;
    std::set<std::pair<DeviceId, DayIndex>> notified;
    std::set<std::pair<DeviceId, DayIndex>> central_seen;

    for (const auto& [day, day_uploads] : uploads_by_day_) {
      // One poll per app per day: everything published today lands in the
      // same match call, so risks sum per exposure day across uploads.
      std::map<std::pair<DeviceId, DayIndex>, double> poll_risk;
      for (const Upload& u : day_uploads) {
        for (const DeviceId& r : device_ids_) {
          if (r == u.uploader) continue;
          if (!links_.contains({u.uploader, r})) continue;
          for (DayIndex d : u.key_days) {
            if (d >= day) continue;  // that key's sightings postdate the poll
            PooledExposure pe = pooled(u.uploader, r, d);
            if (pe.minutes <= 0.0) continue;
            if (edge_seen.insert({r, u.uploader, d}).second) {
              out.match_edges.push_back(
                  {r, u.uploader, d, pe.minutes, pe.min_attenuation_db,
                   total_risk(pe, u.report_type)});
            }
            add_sliced_risk(poll_risk[{r, d}], pe, u.report_type);
          }
        }
      }
      for (const auto& [key, risk] : poll_risk) {
        const auto& [r, d] = key;
        const DeviceSpec* spec = spec_of_.at(r);
        bool can_poll = spec->approved && (spec->app_kind == AppKind::honest ||
                                           spec->app_kind == AppKind::recentralizing);
        if (!can_poll) continue;
        if (risk >= s_.risk.notification_threshold && notified.insert({r, d}).second) {
          out.expected_notifications.push_back({r, d, risk});
        }
        if (spec->app_kind == AppKind::recentralizing && risk > 0.0 &&
            central_seen.insert({r, d}).second) {
          out.expected_central_reports.push_back({r, d});
        }
      }
    }

    std::sort(out.match_edges.begin(), out.match_edges.end(),
              [](const MatchEdge& a, const MatchEdge& b) {
                return std::tie(a.receiver, a.uploader, a.day) <
                       std::tie(b.receiver, b.uploader, b.day);
              });
    std::sort(out.expected_notifications.begin(), out.expected_notifications.end(),
              [](const NotificationEdge& a, const NotificationEdge& b) {
                return std::tie(a.device_id, a.day) < std::tie(b.device_id, b.day);
              });
    std::sort(out.expected_central_reports.begin(), out.expected_central_reports.end(),
              [](const CentralEdge& a, const CentralEdge& b) {
                return std::tie(a.device_id, a.day) < std::tie(b.device_id, b.day);
              });
    return out;
  }

 private:
  // Key days a device would upload on day T: the retained window of days it
  // actually generated keys for, bounded by its enable time.
  std::vector<DayIndex> device_key_days(const DeviceId& id, DayIndex t) const {
    auto it = enabled_at_.find(id);
    if (it == enabled_at_.end()) return {};
    if (it->second > static_cast<Minute>(t) * kMinutesPerDay) return {};
    auto enable_day = static_cast<DayIndex>(it->second / kMinutesPerDay);
    std::vector<DayIndex> days;
    for (DayIndex d = std::max(enable_day, t - (kMaxStoredKeys - 1)); d <= t; ++d) {
      days.push_back(d);
    }
    return days;
  }

  void collect_uploads() {
    for (const DiagnosisEvent& ev : s_.diagnoses) {
      if (beacon_ids_.contains(ev.device_id)) {
        std::vector<DayIndex> days;
        for (DayIndex d = std::max(0, ev.day - (kMaxStoredKeys - 1)); d <= ev.day; ++d) {
          days.push_back(d);
        }
        uploads_by_day_[ev.day].push_back({ev.device_id, ev.day, days, ev.report_type});
        continue;
      }
      const DeviceSpec* spec = spec_of_.at(ev.device_id);
      if (!ev.consent) continue;
      if (spec->app_kind == AppKind::none || !spec->approved) continue;  // no app, no upload path
      std::vector<DayIndex> days = device_key_days(ev.device_id, ev.day);
      if (days.empty()) continue;
      uploads_by_day_[ev.day].push_back({ev.device_id, ev.day, days, ev.report_type});
    }
    // Coercions strike after the day's consent-based uploads.
    for (const CoercionEvent& ev : s_.coercions) {
      std::vector<DayIndex> days = device_key_days(ev.device_id, ev.day);
      if (days.empty()) continue;
      uploads_by_day_[ev.day].push_back(
          {ev.device_id, ev.day, days, ReportType::confirmed_test});
    }
  }

  PooledExposure pooled(const std::string& sender, const DeviceId& receiver, DayIndex day) {
    auto cache_key = std::tuple{sender, receiver, day};
    if (auto it = cache_.find(cache_key); it != cache_.end()) return it->second;

    PooledExposure pe;
    const std::vector<Link>& ls = links_.at({sender, receiver});
    Minute sender_on = 0;
    if (!beacon_ids_.contains(sender)) {
      auto it = enabled_at_.find(sender);
      sender_on = it == enabled_at_.end() ? std::numeric_limits<Minute>::max() : it->second;
    }
    Minute receiver_on = std::numeric_limits<Minute>::max();
    if (auto it = enabled_at_.find(receiver); it != enabled_at_.end()) receiver_on = it->second;

    int intervals = kMinutesPerDay / s_.rotation_minutes;
    for (int w = 0; w < intervals; ++w) {
      Minute w_start = static_cast<Minute>(day) * kMinutesPerDay + static_cast<Minute>(w) * s_.rotation_minutes;
      int count = 0;
      double att_min = kInf;
      for (Minute m = w_start; m < w_start + s_.rotation_minutes; ++m) {
        if (m % s_.scan_period_minutes != 0) continue;
        if (m < sender_on || m < receiver_on) continue;
        for (const Link& l : ls) {
          if (l.start > m || m >= l.end) continue;
          double att = attenuation_at(l.distance_m, s_.channel);
          if (att > s_.channel.max_detect_db) continue;
          count += 1;
          att_min = std::min(att_min, att);
        }
      }
      if (count >= s_.min_sightings && att_min <= s_.channel.close_contact_db) {
        pe.minutes += count * s_.scan_period_minutes;
        pe.min_attenuation_db = std::min(pe.min_attenuation_db, att_min);
      }
    }
    cache_.emplace(cache_key, pe);
    return pe;
  }

  // Same slicing and addition order as the scoring pipeline, so the summed
  // doubles come out identical.
  void add_sliced_risk(double& acc, const PooledExposure& pe, ReportType rt) const {
    double remaining = pe.minutes;
    while (remaining > 0.0) {
      double slice = std::min(remaining, kMaxWindowMinutes);
      acc += score_window(slice, pe.min_attenuation_db, rt, s_.risk);
      remaining -= slice;
    }
  }

  double total_risk(const PooledExposure& pe, ReportType rt) const {
    double acc = 0.0;
    add_sliced_risk(acc, pe, rt);
    return acc;
  }

  const Scenario& s_;
  std::vector<DeviceId> device_ids_;
  std::map<DeviceId, Minute> enabled_at_;
  std::map<DeviceId, const DeviceSpec*> spec_of_;
  std::set<std::string> beacon_ids_;
  std::map<std::pair<std::string, DeviceId>, std::vector<Link>> links_;
  std::map<DayIndex, std::vector<Upload>> uploads_by_day_;
  std::map<std::tuple<std::string, DeviceId, DayIndex>, PooledExposure> cache_;
};

}  // namespace

bool OracleResult::has_match(const std::string& uploader, const DeviceId& receiver,
                             DayIndex day) const {
  return std::any_of(match_edges.begin(), match_edges.end(), [&](const MatchEdge& e) {
    return e.uploader == uploader && e.receiver == receiver && e.day == day;
  });
}

OracleResult compute_oracle(const Scenario& scenario) {
  validate_scenario(scenario);
  return OracleBuilder(scenario).build();
}

}  // namespace ensim
