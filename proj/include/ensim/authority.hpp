#pragma once

#include <span>
#include <string>
#include <vector>

#include "ensim/device.hpp"

namespace ensim {

/// One upload of diagnosis keys. Immutable once published; batch ids are a
/// 1-based append-only sequence. uploader is server-side knowledge: the
/// health authority knows who submitted which keys.
struct DiagnosisKeyBatch {
  int batch_id = 0;
  Minute published_at = 0;
  std::string uploader;
  bool coerced = false;
  std::vector<DiagnosisKey> keys;
};

/// Evidence of re-centralization: written only by malicious apps. In an
/// all-honest run this log stays empty for the whole simulation.
struct CentralReportEntry {
  std::string user_id;
  DayIndex day = 0;
  double total_risk = 0.0;
  Minute reported_at = 0;
};

/// The health-authority diagnosis-key server. Its legitimate input alphabet
/// is uploads of daily keys and cursor-based downloads; it never sees an
/// ephemeral identifier or anything out of a device's R store.
class AuthorityServer {
 public:
  /// Appends an immutable batch and returns its id. Empty uploads are
  /// rejected with std::invalid_argument.
  int upload_keys(std::vector<TemporaryExposureKey> keys, ReportType report_type, Minute now,
                  const std::string& uploader, bool coerced = false);

  /// All batches with id > last_seen_batch_id, oldest first.
  std::vector<DiagnosisKeyBatch> download_since(int last_seen_batch_id) const;

  /// The re-centralization sink. Honest apps never call this.
  void record_central_report(const std::string& user_id, std::span<const DailySummary> summaries,
                             Minute now);

  const std::vector<DiagnosisKeyBatch>& batches() const { return batches_; }
  const std::vector<CentralReportEntry>& central_report_log() const { return central_log_; }
  int latest_batch_id() const { return static_cast<int>(batches_.size()); }

 private:
  std::vector<DiagnosisKeyBatch> batches_;
  std::vector<CentralReportEntry> central_log_;
};

}  // namespace ensim
