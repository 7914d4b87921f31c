#pragma once

#include <array>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ensim/keyschedule.hpp"

namespace ensim {

enum class ReportType { confirmed_test, clinical_diagnosis, self_report };

std::string to_string(ReportType t);
ReportType report_type_from_string(const std::string& s);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Developer-tunable scoring weights. Three attenuation thresholds split
/// [0, inf) into four buckets; each bucket and each report type carries a
/// weight. A daily summary at or above notification_threshold notifies.
struct RiskConfig {
  std::array<double, 3> attenuation_buckets{50.0, 55.0, 70.0};
  std::array<double, 4> bucket_weights{2.0, 1.0, 0.5, 0.0};
  std::map<ReportType, double> report_type_weights{{ReportType::confirmed_test, 1.0}};
  double notification_threshold = 15.0;  // weighted minutes
};

constexpr double kMaxWindowMinutes = 30.0;

/// A scored slice of matched exposure, capped at 30 minutes. This is the
/// whole shape of what the match API reveals: day, duration, attenuation
/// bucket, risk. No key, no identifier, no exact time.
struct ExposureWindow {
  DayIndex day = 0;
  double duration_minutes = 0.0;
  int bucket = 0;
  double risk = 0.0;
};

struct DailySummary {
  DayIndex day = 0;
  double total_risk = 0.0;
};

/// Matched exposure to one identifier, as accumulated by the receiving OS.
struct ReceivedRecord {
  EphemeralId epi;
  DayIndex day = 0;
  double exposure_minutes = 0.0;
  double min_attenuation_db = 0.0;
  int sighting_count = 0;
};

int bucket_for(double attenuation_db, const RiskConfig& cfg);

/// risk = duration * bucket_weight * report_type_weight. Duration must be
/// positive; a report type without a configured weight is a ConfigError.
double score_window(double duration_minutes, double min_attenuation_db, ReportType report_type,
                    const RiskConfig& cfg);

/// Pools the matched records of one key's day and splits the total exposure
/// into scored <=30 minute windows. The pooled attenuation is the minimum
/// over the records (the strongest contact dominates).
std::vector<ExposureWindow> windows_from_match(std::span<const ReceivedRecord> matched,
                                               ReportType report_type, const RiskConfig& cfg);

/// Groups windows by day and sums risks; output sorted by day.
std::vector<DailySummary> summarize(std::span<const ExposureWindow> windows);

}  // namespace ensim
