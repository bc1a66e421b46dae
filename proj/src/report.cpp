#include "hrlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include <json.hpp>

namespace hrlab {

namespace {

std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

nlohmann::json json_num(double x) {
    if (std::isfinite(x)) return x;
    return fmt_double(x);
}

nlohmann::json json_row(const ReportRow& row, bool timing) {
    nlohmann::json j{
        {"check_id", row.check_id},
        {"model_id", row.model_id},
        {"params", row.params},
        {"statistic", row.statistic},
        {"estimate", json_num(row.estimate)},
        {"ci", {json_num(row.ci.low), json_num(row.ci.high)}},
        {"exact", row.exact},
        {"bound", json_num(row.bound)},
        {"bound_source", row.bound_source},
        {"verdict", row.verdict},
        {"margin", json_num(row.margin)},
        {"note", row.note},
    };
    if (timing) j["wall_ms"] = json_num(row.wall_ms);
    return j;
}

nlohmann::json json_rate(const RateCheckReport& r) {
    nlohmann::json j{
        {"check_id", r.check_id},
        {"model_id", r.model_id},
        {"grid", r.grid},
        {"levels", r.levels},
        {"verdict", to_string(r.verdict)},
        {"note", r.note},
    };
    auto rows = [](const std::vector<std::vector<double>>& m) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& row : m) {
            nlohmann::json jr = nlohmann::json::array();
            for (double v : row) jr.push_back(json_num(v));
            out.push_back(std::move(jr));
        }
        return out;
    };
    j["primary"] = {{"label", r.primary_label}, {"quantiles", rows(r.primary)}};
    if (!r.secondary.empty())
        j["secondary"] = {{"label", r.secondary_label},
                          {"quantiles", rows(r.secondary)},
                          {"verdict", to_string(r.secondary_verdict)}};
    return j;
}

}  // namespace

ReportRow row_from_record(const VerificationRecord& rec, std::uint64_t /*seed*/) {
    ReportRow row;
    row.check_id = rec.check_id;
    row.model_id = rec.model_id;
    row.params = rec.params;
    row.statistic = rec.statistic.label();
    row.estimate = rec.statistic.estimate;
    row.ci = rec.statistic.ci;
    row.exact = rec.statistic.exact;
    row.bound = rec.bound_value;
    row.bound_source = rec.bound_source;
    row.verdict = to_string(rec.verdict);
    row.margin = rec.margin;
    row.note = rec.note;
    return row;
}

std::string verdict_of(TrendVerdict v) {
    switch (v) {
        case TrendVerdict::Decaying:
        case TrendVerdict::Bounded: return "Holds";
        case TrendVerdict::NotDecaying:
        case TrendVerdict::Unbounded: return "Violated";
        case TrendVerdict::NotApplicable: return "NotApplicable";
    }
    return "?";
}

void append_records(Report& report, const std::vector<VerificationRecord>& recs) {
    for (const VerificationRecord& rec : recs)
        report.rows.push_back(row_from_record(rec, report.seed));
}

void append_rate_report(Report& report, const RateCheckReport& rate) {
    auto last_median = [&](const std::vector<std::vector<double>>& rows) {
        if (rows.empty() || rows.front().empty()) return 0.0;
        std::size_t med = 0;
        for (std::size_t i = 1; i < rate.levels.size(); ++i)
            if (std::abs(rate.levels[i] - 0.5) < std::abs(rate.levels[med] - 0.5)) med = i;
        return rows[med].back();
    };
    ReportRow row;
    row.check_id = rate.check_id;
    row.model_id = rate.model_id;
    row.params = "trend=primary";
    row.statistic = rate.primary_label;
    row.estimate = last_median(rate.primary);
    row.ci = {row.estimate, row.estimate};
    row.verdict = verdict_of(rate.verdict);
    row.note = rate.note;
    report.rows.push_back(row);
    if (!rate.secondary.empty()) {
        ReportRow sec = row;
        sec.params = "trend=secondary";
        sec.statistic = rate.secondary_label;
        sec.estimate = last_median(rate.secondary);
        sec.ci = {sec.estimate, sec.estimate};
        sec.verdict = verdict_of(rate.secondary_verdict);
        report.rows.push_back(std::move(sec));
    }
    report.rates.push_back(rate);
}

void sort_report(Report& report) {
    auto key = [](const ReportRow& r) { return std::tie(r.check_id, r.model_id, r.params); };
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [&](const ReportRow& a, const ReportRow& b) { return key(a) < key(b); });
    std::stable_sort(report.rates.begin(), report.rates.end(),
                     [](const RateCheckReport& a, const RateCheckReport& b) {
                         return std::tie(a.check_id, a.model_id) < std::tie(b.check_id, b.model_id);
                     });
}

bool any_violated(const Report& report) {
    for (const ReportRow& row : report.rows)
        if (row.verdict == "Violated") return true;
    return false;
}

std::string to_tsv(const Report& report) {
    std::string out;
    out += "check_id\tmodel_id\tparams\tstatistic\testimate\tci_low\tci_high\texact\tbound\t"
           "verdict\tmargin\tseed\tbound_source\tnote";
    if (report.timing) out += "\twall_ms";
    out += "\n";
    const std::string seed = std::to_string(report.seed);
    for (const ReportRow& r : report.rows) {
        out += r.check_id + "\t" + r.model_id + "\t" + r.params + "\t" + r.statistic + "\t" +
               fmt_double(r.estimate) + "\t" + fmt_double(r.ci.low) + "\t" +
               fmt_double(r.ci.high) + "\t" + (r.exact ? "1" : "0") + "\t" +
               fmt_double(r.bound) + "\t" + r.verdict + "\t" + fmt_double(r.margin) + "\t" +
               seed + "\t" + r.bound_source + "\t" + r.note;
        if (report.timing) out += "\t" + fmt_double(r.wall_ms);
        out += "\n";
    }
    return out;
}

std::string to_json(const Report& report) {
    nlohmann::json j;
    j["seed"] = report.seed;
    j["rows"] = nlohmann::json::array();
    for (const ReportRow& r : report.rows) j["rows"].push_back(json_row(r, report.timing));
    j["rates"] = nlohmann::json::array();
    for (const RateCheckReport& r : report.rates) j["rates"].push_back(json_rate(r));
    return j.dump(2) + "\n";
}

}  // namespace hrlab
