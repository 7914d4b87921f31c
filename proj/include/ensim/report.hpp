#pragma once

#include <string>

#include "ensim/engine.hpp"
#include "ensim/oracle.hpp"

namespace ensim {

/// Full machine-readable run report. Keys are emitted sorted and doubles use
/// shortest round-trip form, so the same seed yields byte-identical output.
/// When an oracle result is supplied the report embeds it plus a diff of
/// actual vs expected notifications.
std::string report_json(const RunResult& run, const OracleResult* oracle, bool pretty = true);

/// One-line-per-device summary: who got notified on which days, and whether
/// that agrees with the oracle.
std::string report_csv(const RunResult& run, const OracleResult* oracle);

std::string oracle_report_json(const OracleResult& oracle, bool pretty = true);

}  // namespace ensim
