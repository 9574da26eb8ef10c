#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "vmfkl/divergence.hpp"
#include "vmfkl/vmf.hpp"

namespace vmfkl::io {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

// SampleBatch: CSV has one row per point with columns x1..xd.
void write_batch_csv(std::ostream& os, const SampleBatch& batch);
nlohmann::json batch_to_json(const SampleBatch& batch);

/// Reads the points back from write_batch_csv output.
std::vector<UnitVector> read_points_csv(std::istream& is);

// KlReport: columns d, kappa_q, kappa_p, cos_theta, exact, bound, corollary,
// mc, mc_stderr, padded_dim, flags. Absent optional values are empty cells;
// flags are ';'-separated.
extern const std::vector<std::string> kReportColumns;
void write_report_csv_header(std::ostream& os);
void write_report_csv_row(std::ostream& os, const KlReport& report);
nlohmann::json report_to_json(const KlReport& report);

/// Grid spec file: {"dims": [...], "kappas_q": [...], "kappas_p": [...],
/// "cosines": [...], "n_mc": N, "seed": S}. n_mc and seed default to 0.
AuditGrid grid_from_json(const nlohmann::json& spec);

}  // namespace vmfkl::io
