// hrlab command-line driver.
//
//   hrlab run --config cfg.json [--seed S] [--paths P] [--threads T]
//             [--out DIR] [--format table|structured|both] [--timing]
//   hrlab list-checks
//   hrlab describe <check>
//
// Exit codes for `run`: 0 all checks pass, 1 at least one Violated verdict,
// 2 configuration or usage error.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hrlab/experiment.hpp"

namespace {

int run_cmd(const std::string& config, const hrlab::RunOptions& opts, const std::string& out,
            const std::string& format) {
    std::vector<std::string> formats;
    if (format == "table") formats = {"table"};
    else if (format == "structured") formats = {"structured"};
    else if (format == "both") formats = {"table", "structured"};

    hrlab::RunResult res = hrlab::run_experiment_file(config, opts, out, formats);
    if (res.exit_code == 2) {
        std::fprintf(stderr, "error: %s\n", res.error.c_str());
        return 2;
    }
    std::size_t violated = 0;
    for (const hrlab::ReportRow& row : res.report.rows)
        if (row.verdict == "Violated") ++violated;
    std::printf("seed %llu: %zu rows, %zu violated\n",
                static_cast<unsigned long long>(res.report.seed), res.report.rows.size(),
                violated);
    for (const std::string& path : res.written) std::printf("wrote %s\n", path.c_str());
    return res.exit_code;
}

int list_cmd() {
    for (const hrlab::CatalogEntry& e : hrlab::check_catalog())
        std::printf("%-26s %s\n", e.name.c_str(), e.citation.c_str());
    return 0;
}

int describe_cmd(const std::string& name) {
    const hrlab::CatalogEntry* e = hrlab::find_check(name);
    if (e == nullptr) {
        std::fprintf(stderr, "error: unknown check '%s' (see `hrlab list-checks`)\n",
                     name.c_str());
        return 2;
    }
    std::printf("%s\n  citation: %s\n  synopsis: %s\n", e->name.c_str(), e->citation.c_str(),
                e->synopsis.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximal-inequality and SLLN verification harness"};
    app.require_subcommand(1);

    std::string config, out, format = "both", describe_name;
    std::uint64_t seed = 0;
    std::size_t paths = 0;
    unsigned threads = 0;
    bool timing = false;

    CLI::App* run = app.add_subcommand("run", "run the checks in a config file");
    run->add_option("--config", config, "JSON experiment config")->required();
    CLI::Option* seed_opt = run->add_option("--seed", seed, "override the master seed");
    CLI::Option* paths_opt = run->add_option("--paths", paths, "override the path count");
    CLI::Option* threads_opt = run->add_option("--threads", threads, "override the worker count");
    run->add_option("--out", out, "output directory for reports");
    run->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"table", "structured", "both"}));
    run->add_flag("--timing", timing, "include wall-clock timings in the report");

    CLI::App* list = app.add_subcommand("list-checks", "list the check catalog");
    CLI::App* describe = app.add_subcommand("describe", "describe one check");
    describe->add_option("check", describe_name, "check name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (run->parsed()) {
        hrlab::RunOptions opts;
        if (seed_opt->count() > 0) opts.seed = seed;
        if (paths_opt->count() > 0) opts.paths = paths;
        if (threads_opt->count() > 0) opts.threads = threads;
        if (timing) opts.timing = true;
        return run_cmd(config, opts, out, format);
    }
    if (list->parsed()) return list_cmd();
    if (describe->parsed()) return describe_cmd(describe_name);
    return 2;
}
