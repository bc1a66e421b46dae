#pragma once
// Configuration-driven experiment runner: parses a JSON experiment config,
// instantiates models, dispatches every configured check, and assembles the
// sorted report.  Exit-code contract:
//   0  all checks ran, no Violated rows
//   1  at least one Violated row
//   2  config error (unparseable, unknown check, missing seed, invalid model)
//
// Config schema (all keys lower_snake; unknown keys rejected):
// {
//   "seed": 1,                     // required (or --seed override)
//   "paths": 10000,                // >= 100 when statistical checks present
//   "threads": 1,
//   "timing": false,               // wall-clock columns (off => reproducible)
//   "bound_scale": 1.0,            // negative-control multiplier on bounds
//   "epsilon_points": 10,
//   "bootstrap": {"resamples": 1000, "level": 0.99},
//   "report": {"out": ".", "formats": ["table", "structured"]},
//   "models": [ {"id": "...", "kind": "iid|martingale_diff|na_gaussian|ar1|
//                 aana|logou|demimartingale", "n": 1000, ...kind fields...} ],
//   "checks": [ {"op": "<catalog name>", "model": "<id>", ...op fields...} ]
// }
// Sequence fields ("alpha", "b", "beta") accept {"family":"power","c":1,
// "e":1}, {"family":"constant","c":1}, or {"values":[...]}.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hrlab/report.hpp"

namespace hrlab {

struct CatalogEntry {
    std::string name;
    std::string citation;  // inequality/theorem tag, or "plumbing"
    std::string synopsis;
};

// Stable catalog, sorted by name.
[[nodiscard]] const std::vector<CatalogEntry>& check_catalog();
[[nodiscard]] const CatalogEntry* find_check(const std::string& name);

// CLI-level overrides applied on top of the config.
struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<unsigned> threads;
    std::optional<bool> timing;
};

struct RunResult {
    Report report;
    std::string out_dir = ".";
    std::vector<std::string> formats;  // "table" and/or "structured"
    std::vector<std::string> written;  // files written (run_experiment_file)
    int exit_code = 0;
    std::string error;  // set when exit_code == 2
};

// Parses, validates, and runs the config text.  Config problems come back as
// exit_code 2 with the message; nothing is written to disk.
[[nodiscard]] RunResult run_experiment(const std::string& config_text, const RunOptions& opts = {});

// Loads the config file, runs it, and writes the requested report formats
// (report.tsv / report.json) into the output directory.  Non-empty overrides
// replace the config's report settings.
[[nodiscard]] RunResult run_experiment_file(const std::string& config_path, const RunOptions& opts,
                                            const std::string& out_override = "",
                                            const std::vector<std::string>& format_override = {});

}  // namespace hrlab
