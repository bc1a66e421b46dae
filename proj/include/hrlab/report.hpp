#pragma once
// Report assembly: every check result becomes a flat ReportRow; reports are
// emitted as a tab-separated table (one row per check) and/or a structured
// JSON document that additionally carries the full quantile grids of the
// rate checks.  Rows are sorted by (check_id, model_id, params) so output is
// byte-identical for any execution order or thread count.  Wall-clock fields
// are serialized only when timing is enabled, keeping the default output
// reproducible.
//
// Trend verdicts map into the fixed report vocabulary:
//   Decaying / Bounded      -> Holds      (configured trend expectation met)
//   NotDecaying / Unbounded -> Violated   (expectation falsified at this scale)
//   NotApplicable           -> NotApplicable

#include <cstdint>
#include <string>
#include <vector>

#include "hrlab/slln.hpp"
#include "hrlab/verify.hpp"

namespace hrlab {

struct ReportRow {
    std::string check_id;
    std::string model_id;
    std::string params;
    std::string statistic;  // label of the left-hand side
    double estimate = 0.0;
    CI ci{};
    bool exact = false;
    double bound = 0.0;
    std::string bound_source;
    std::string verdict;
    double margin = 0.0;
    std::string note;
    double wall_ms = 0.0;  // excluded from output unless timing is on
};

struct Report {
    std::uint64_t seed = 0;
    bool timing = false;
    std::vector<ReportRow> rows;
    std::vector<RateCheckReport> rates;  // grid detail for the structured format
};

[[nodiscard]] ReportRow row_from_record(const VerificationRecord& rec, std::uint64_t seed);
[[nodiscard]] std::string verdict_of(TrendVerdict v);

// Appends the 1-2 trend-summary rows and stores the grid detail.
void append_rate_report(Report& report, const RateCheckReport& rate);
void append_records(Report& report, const std::vector<VerificationRecord>& recs);

// Sorts rows by (check_id, model_id, params); rate details by the same key.
void sort_report(Report& report);

[[nodiscard]] bool any_violated(const Report& report);

// Serializers.  %.10g for table numbers; non-finite JSON numbers are emitted
// as strings ("inf", "-inf", "nan") since JSON has no literal for them.
[[nodiscard]] std::string to_tsv(const Report& report);
[[nodiscard]] std::string to_json(const Report& report);

}  // namespace hrlab
