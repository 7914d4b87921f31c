#include <doctest.h>

#include <vector>

#include "ensim/authority.hpp"

using namespace ensim;

namespace {

std::vector<TemporaryExposureKey> some_keys(int n, std::uint64_t seed = 9) {
  StreamFactory f(seed);
  RngStream s = f.stream("tek:upload");
  std::vector<TemporaryExposureKey> keys;
  for (DayIndex day = 0; day < n; ++day) keys.push_back(generate_tek(s, day));
  return keys;
}

}  // namespace

TEST_CASE("a fourteen-key upload publishes a fourteen-key batch") {
  AuthorityServer server;
  int id = server.upload_keys(some_keys(14), ReportType::confirmed_test, 1440, "A");
  CHECK(id == 1);
  REQUIRE(server.batches().size() == 1);
  const DiagnosisKeyBatch& batch = server.batches()[0];
  CHECK(batch.batch_id == 1);
  CHECK(batch.keys.size() == 14);
  CHECK(batch.uploader == "A");
  CHECK(batch.published_at == 1440);
  CHECK_FALSE(batch.coerced);
}

TEST_CASE("an empty upload is rejected") {
  AuthorityServer server;
  CHECK_THROWS_AS(server.upload_keys({}, ReportType::confirmed_test, 0, "A"),
                  std::invalid_argument);
  CHECK(server.batches().empty());
}

TEST_CASE("batch ids are an append-only 1-based sequence") {
  AuthorityServer server;
  CHECK(server.upload_keys(some_keys(2), ReportType::confirmed_test, 0, "A") == 1);
  CHECK(server.upload_keys(some_keys(3), ReportType::confirmed_test, 10, "B") == 2);
  CHECK(server.latest_batch_id() == 2);
  auto all = server.download_since(0);
  REQUIRE(all.size() == 2);
  CHECK(all[0].batch_id == 1);
  CHECK(all[0].keys.size() == 2);
  CHECK(all[1].batch_id == 2);
  CHECK(all[1].keys.size() == 3);
}

TEST_CASE("downloads are cursor based") {
  AuthorityServer server;
  for (int i = 0; i < 3; ++i) {
    server.upload_keys(some_keys(1, static_cast<std::uint64_t>(i)), ReportType::confirmed_test,
                       i, "A");
  }
  CHECK(server.download_since(0).size() == 3);
  CHECK(server.download_since(2).size() == 1);
  CHECK(server.download_since(3).empty());
  CHECK(server.download_since(99).empty());
}

TEST_CASE("a cursor-advancing client sees every batch exactly once") {
  AuthorityServer server;
  int cursor = 0;
  std::vector<int> seen;
  auto drain = [&] {
    for (const DiagnosisKeyBatch& b : server.download_since(cursor)) {
      seen.push_back(b.batch_id);
      cursor = b.batch_id;
    }
  };
  server.upload_keys(some_keys(1, 1), ReportType::confirmed_test, 0, "A");
  drain();
  server.upload_keys(some_keys(1, 2), ReportType::confirmed_test, 1, "B");
  server.upload_keys(some_keys(1, 3), ReportType::confirmed_test, 2, "C");
  drain();
  drain();  // nothing new
  server.upload_keys(some_keys(1, 4), ReportType::confirmed_test, 3, "D");
  drain();
  CHECK(seen == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("central reports are recorded in arrival order with their risk") {
  AuthorityServer server;
  std::vector<DailySummary> x{{3, 40.0}};
  std::vector<DailySummary> y{{2, 17.5}, {4, 22.0}};
  server.record_central_report("X", x, 5000);
  server.record_central_report("Y", y, 5001);
  const auto& log = server.central_report_log();
  REQUIRE(log.size() == 3);
  CHECK(log[0].user_id == "X");
  CHECK(log[0].day == 3);
  CHECK(log[0].total_risk == doctest::Approx(40.0));
  CHECK(log[0].reported_at == 5000);
  CHECK(log[1].user_id == "Y");
  CHECK(log[1].day == 2);
  CHECK(log[2].user_id == "Y");
  CHECK(log[2].day == 4);
}

TEST_CASE("a coerced upload is flagged as such") {
  AuthorityServer server;
  server.upload_keys(some_keys(3), ReportType::confirmed_test, 100, "V", /*coerced=*/true);
  REQUIRE(server.batches().size() == 1);
  CHECK(server.batches()[0].coerced);
}
