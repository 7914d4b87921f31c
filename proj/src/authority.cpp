#include "ensim/authority.hpp"

#include <stdexcept>

namespace ensim {

namespace {

template <class T>
concept exposes_epi = requires(T t) { t.epi; };

// The server's input types carry daily keys and app-computed summaries,
// never ephemeral identifiers or R-store records.
static_assert(!exposes_epi<DiagnosisKeyBatch>);
static_assert(!exposes_epi<CentralReportEntry>);

}  // namespace

int AuthorityServer::upload_keys(std::vector<TemporaryExposureKey> keys, ReportType report_type,
                                 Minute now, const std::string& uploader, bool coerced) {
  if (keys.empty()) {
    throw std::invalid_argument("diagnosis key upload must contain at least one key");
  }
  DiagnosisKeyBatch batch;
  batch.batch_id = static_cast<int>(batches_.size()) + 1;
  batch.published_at = now;
  batch.uploader = uploader;
  batch.coerced = coerced;
  batch.keys.reserve(keys.size());
  for (TemporaryExposureKey& tek : keys) {
    batch.keys.push_back(DiagnosisKey{tek, report_type});
  }
  batches_.push_back(std::move(batch));
  return batches_.back().batch_id;
}

std::vector<DiagnosisKeyBatch> AuthorityServer::download_since(int last_seen_batch_id) const {
  std::vector<DiagnosisKeyBatch> out;
  for (const DiagnosisKeyBatch& b : batches_) {
    if (b.batch_id > last_seen_batch_id) out.push_back(b);
  }
  return out;
}

void AuthorityServer::record_central_report(const std::string& user_id,
                                            std::span<const DailySummary> summaries, Minute now) {
  for (const DailySummary& s : summaries) {
    central_log_.push_back(CentralReportEntry{user_id, s.day, s.total_risk, now});
  }
}

}  // namespace ensim
