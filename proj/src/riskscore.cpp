#include "ensim/riskscore.hpp"

#include <algorithm>
#include <limits>

namespace ensim {

std::string to_string(ReportType t) {
  switch (t) {
    case ReportType::confirmed_test: return "confirmed_test";
    case ReportType::clinical_diagnosis: return "clinical_diagnosis";
    case ReportType::self_report: return "self_report";
  }
  return "unknown";
}

ReportType report_type_from_string(const std::string& s) {
  if (s == "confirmed_test") return ReportType::confirmed_test;
  if (s == "clinical_diagnosis") return ReportType::clinical_diagnosis;
  if (s == "self_report") return ReportType::self_report;
  throw ConfigError("unknown report type '" + s + "'");
}

int bucket_for(double attenuation_db, const RiskConfig& cfg) {
  for (int i = 0; i < 3; ++i) {
    if (attenuation_db <= cfg.attenuation_buckets[static_cast<std::size_t>(i)]) return i;
  }
  return 3;
}

double score_window(double duration_minutes, double min_attenuation_db, ReportType report_type,
                    const RiskConfig& cfg) {
  if (duration_minutes <= 0.0) {
    throw std::invalid_argument("window duration must be positive");
  }
  auto it = cfg.report_type_weights.find(report_type);
  if (it == cfg.report_type_weights.end()) {
    throw ConfigError("no weight configured for report type '" + to_string(report_type) + "'");
  }
  double bucket_weight = cfg.bucket_weights[static_cast<std::size_t>(bucket_for(min_attenuation_db, cfg))];
  return duration_minutes * bucket_weight * it->second;
}

std::vector<ExposureWindow> windows_from_match(std::span<const ReceivedRecord> matched,
                                               ReportType report_type, const RiskConfig& cfg) {
  std::vector<ExposureWindow> windows;
  if (matched.empty()) return windows;

  DayIndex day = matched.front().day;
  double total_minutes = 0.0;
  double min_att = std::numeric_limits<double>::infinity();
  for (const ReceivedRecord& rec : matched) {
    total_minutes += rec.exposure_minutes;
    min_att = std::min(min_att, rec.min_attenuation_db);
  }

  int bucket = bucket_for(min_att, cfg);
  while (total_minutes > 0.0) {
    double slice = std::min(total_minutes, kMaxWindowMinutes);
    windows.push_back(
        ExposureWindow{day, slice, bucket, score_window(slice, min_att, report_type, cfg)});
    total_minutes -= slice;
  }
  return windows;
}

std::vector<DailySummary> summarize(std::span<const ExposureWindow> windows) {
  std::map<DayIndex, double> by_day;
  for (const ExposureWindow& w : windows) {
    by_day[w.day] += w.risk;
  }
  std::vector<DailySummary> out;
  out.reserve(by_day.size());
  for (const auto& [day, risk] : by_day) {
    out.push_back(DailySummary{day, risk});
  }
  return out;
}

}  // namespace ensim
