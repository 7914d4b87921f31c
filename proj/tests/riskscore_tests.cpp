#include <doctest.h>

#include <vector>

#include "ensim/riskscore.hpp"

using namespace ensim;

namespace {

ReceivedRecord record(DayIndex day, double minutes, double att) {
  ReceivedRecord r;
  r.day = day;
  r.exposure_minutes = minutes;
  r.min_attenuation_db = att;
  r.sighting_count = static_cast<int>(minutes / 2.0);
  return r;
}

}  // namespace

TEST_CASE("attenuation buckets split at the configured thresholds") {
  RiskConfig cfg;
  CHECK(bucket_for(45.0, cfg) == 0);
  CHECK(bucket_for(50.0, cfg) == 0);
  CHECK(bucket_for(51.02, cfg) == 1);
  CHECK(bucket_for(55.0, cfg) == 1);
  CHECK(bucket_for(60.0, cfg) == 2);
  CHECK(bucket_for(70.0, cfg) == 2);
  CHECK(bucket_for(80.0, cfg) == 3);
}

TEST_CASE("risk is duration times bucket weight times report weight") {
  RiskConfig cfg;
  CHECK(score_window(20.0, 45.0, ReportType::confirmed_test, cfg) == doctest::Approx(40.0));
  // bucket 3 has weight zero: far contacts score nothing
  CHECK(score_window(20.0, 80.0, ReportType::confirmed_test, cfg) == doctest::Approx(0.0));
  // vanishing duration scores vanishing risk, far below any sane threshold
  CHECK(score_window(0.0001, 45.0, ReportType::confirmed_test, cfg) < 0.001);
}

TEST_CASE("scoring rejects bad inputs") {
  RiskConfig cfg;
  CHECK_THROWS_AS(score_window(0.0, 45.0, ReportType::confirmed_test, cfg), std::invalid_argument);
  CHECK_THROWS_AS(score_window(-5.0, 45.0, ReportType::confirmed_test, cfg), std::invalid_argument);
  // report type without a configured weight
  CHECK_THROWS_AS(score_window(10.0, 45.0, ReportType::self_report, cfg), ConfigError);
}

TEST_CASE("20 close minutes give one window of 20") {
  RiskConfig cfg;
  std::vector<ReceivedRecord> matched{record(0, 20.0, 45.0)};
  auto windows = windows_from_match(matched, ReportType::confirmed_test, cfg);
  REQUIRE(windows.size() == 1);
  CHECK(windows[0].day == 0);
  CHECK(windows[0].duration_minutes == doctest::Approx(20.0));
  CHECK(windows[0].bucket == 0);
  CHECK(windows[0].risk == doctest::Approx(40.0));
}

TEST_CASE("70 close minutes split into 30+30+10") {
  RiskConfig cfg;
  std::vector<ReceivedRecord> matched{record(2, 70.0, 45.0)};
  auto windows = windows_from_match(matched, ReportType::confirmed_test, cfg);
  REQUIRE(windows.size() == 3);
  CHECK(windows[0].duration_minutes == doctest::Approx(30.0));
  CHECK(windows[1].duration_minutes == doctest::Approx(30.0));
  CHECK(windows[2].duration_minutes == doctest::Approx(10.0));
  for (const ExposureWindow& w : windows) CHECK(w.day == 2);
}

TEST_CASE("zero matched records give an empty window list") {
  RiskConfig cfg;
  CHECK(windows_from_match({}, ReportType::confirmed_test, cfg).empty());
}

TEST_CASE("records of one day pool their minutes under the strongest attenuation") {
  RiskConfig cfg;
  std::vector<ReceivedRecord> matched{record(1, 20.0, 45.0), record(1, 10.0, 52.0)};
  auto windows = windows_from_match(matched, ReportType::confirmed_test, cfg);
  REQUIRE(windows.size() == 1);
  CHECK(windows[0].duration_minutes == doctest::Approx(30.0));
  CHECK(windows[0].bucket == 0);  // min(45, 52) = 45
  CHECK(windows[0].risk == doctest::Approx(60.0));
}

TEST_CASE("no window ever exceeds 30 minutes") {
  RiskConfig cfg;
  for (double minutes : {1.0, 29.9, 30.0, 30.1, 59.0, 61.0, 240.0, 1439.0}) {
    std::vector<ReceivedRecord> matched{record(0, minutes, 45.0)};
    double total = 0.0;
    for (const ExposureWindow& w : windows_from_match(matched, ReportType::confirmed_test, cfg)) {
      CHECK(w.duration_minutes <= kMaxWindowMinutes);
      total += w.duration_minutes;
    }
    CHECK(total == doctest::Approx(minutes));
  }
}

TEST_CASE("summaries add same-day windows and keep days apart") {
  std::vector<ExposureWindow> windows{
      {3, 10.0, 0, 10.0}, {3, 5.0, 1, 5.0}, {5, 8.0, 0, 16.0}};
  auto days = summarize(windows);
  REQUIRE(days.size() == 2);
  CHECK(days[0].day == 3);
  CHECK(days[0].total_risk == doctest::Approx(15.0));
  CHECK(days[1].day == 5);
  CHECK(days[1].total_risk == doctest::Approx(16.0));
  CHECK(summarize({}).empty());
}

TEST_CASE("risk is monotone in duration and bucket weight") {
  RiskConfig cfg;
  double prev = 0.0;
  for (double minutes = 2.0; minutes <= 30.0; minutes += 2.0) {
    double r = score_window(minutes, 45.0, ReportType::confirmed_test, cfg);
    CHECK(r >= prev);
    prev = r;
  }
  // stronger signal (lower attenuation, heavier bucket) never lowers risk
  CHECK(score_window(10.0, 45.0, ReportType::confirmed_test, cfg) >=
        score_window(10.0, 52.0, ReportType::confirmed_test, cfg));
  CHECK(score_window(10.0, 52.0, ReportType::confirmed_test, cfg) >=
        score_window(10.0, 60.0, ReportType::confirmed_test, cfg));
}

TEST_CASE("doubling every bucket weight doubles every risk") {
  RiskConfig cfg;
  RiskConfig doubled = cfg;
  for (double& w : doubled.bucket_weights) w *= 2.0;
  std::vector<ReceivedRecord> matched{record(0, 25.0, 45.0), record(0, 12.0, 53.0),
                                      record(0, 40.0, 60.0)};
  auto base = windows_from_match(matched, ReportType::confirmed_test, cfg);
  auto twice = windows_from_match(matched, ReportType::confirmed_test, doubled);
  REQUIRE(base.size() == twice.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(twice[i].risk == doctest::Approx(2.0 * base[i].risk));
  }
  auto sum_base = summarize(base);
  auto sum_twice = summarize(twice);
  REQUIRE(sum_base.size() == sum_twice.size());
  for (std::size_t i = 0; i < sum_base.size(); ++i) {
    CHECK(sum_twice[i].total_risk == doctest::Approx(2.0 * sum_base[i].total_risk));
  }
}
