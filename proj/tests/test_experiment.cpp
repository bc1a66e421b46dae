// Config-driven runner: the exit-code contract, schema rejection, catalog,
// reproducible serialization, and the file/CLI surfaces.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hrlab/experiment.hpp"

using namespace hrlab;
namespace fs = std::filesystem;

namespace {

const char* kSmallConfig = R"({
  "seed": 7,
  "paths": 300,
  "models": [{"id": "m", "kind": "iid", "n": 256}],
  "checks": [
    {"op": "check_kolmogorov", "model": "m", "form": "prob"},
    {"op": "rademacher_battery", "n_min": 3, "n_max": 5}
  ]
})";

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int shell_exit(const std::string& cmd) {
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

fs::path temp_dir(const char* tag) {
    fs::path p = fs::temp_directory_path() / (std::string("hrlab_test_") + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("config errors exit 2 with a message and write nothing") {
    auto expect_error = [](const std::string& cfg, const char* hint) {
        auto r = run_experiment(cfg);
        INFO("config: ", cfg);
        CHECK(r.exit_code == 2);
        CHECK_FALSE(r.error.empty());
        CHECK(r.report.rows.empty());
        if (hint) CHECK(r.error.find(hint) != std::string::npos);
    };
    expect_error("{not json", nullptr);
    expect_error(R"({"paths": 300, "models": [], "checks": [{"op": "transfer_trials"}]})",
                 "seed");
    expect_error(R"({"seed": 1, "models": [], "checks": []})", "checks");
    expect_error(R"({"seed": 1, "models": [], "checks": [{"op": "check_nonesuch"}]})",
                 "check_nonesuch");
    expect_error(R"({"seed": 1, "models": [],
                     "checks": [{"op": "check_kolmogorov", "model": "ghost"}]})",
                 "ghost");
    expect_error(R"({"seed": 1, "paths": 50,
                     "models": [{"id": "m", "kind": "iid", "n": 64}],
                     "checks": [{"op": "check_kolmogorov", "model": "m"}]})",
                 "paths");
    expect_error(R"({"seed": 1, "surprise": true, "models": [],
                     "checks": [{"op": "transfer_trials"}]})",
                 "surprise");
    expect_error(R"({"seed": 1, "models": [],
                     "checks": [{"op": "transfer_trials", "bogus_key": 1}]})",
                 "bogus_key");
    expect_error(R"({"seed": 1, "models": [{"id": "m", "kind": "brownian", "n": 8}],
                     "checks": [{"op": "transfer_trials"}]})",
                 "brownian");
    expect_error(R"({"seed": 1, "models": [{"id": "m", "kind": "iid", "n": 8, "zed": 1}],
                     "checks": [{"op": "transfer_trials"}]})",
                 "zed");
}

TEST_CASE("exact-only configs run below the statistical path floor") {
    auto r = run_experiment(R"({
        "seed": 3, "paths": 10, "models": [],
        "checks": [{"op": "rademacher_battery", "n_min": 3, "n_max": 4}]
    })");
    CHECK(r.exit_code == 0);
    CHECK(r.error.empty());
    CHECK_FALSE(r.report.rows.empty());
    for (const auto& row : r.report.rows) {
        CHECK(row.exact);
        CHECK(row.verdict == "Holds");
    }
}

TEST_CASE("catalog is sorted, complete, and queryable") {
    const auto& cat = check_catalog();
    CHECK(cat.size() >= 15);
    for (std::size_t i = 1; i < cat.size(); ++i) CHECK(cat[i - 1].name < cat[i].name);
    for (const auto& e : cat) {
        CHECK_FALSE(e.name.empty());
        CHECK_FALSE(e.citation.empty());
        CHECK_FALSE(e.synopsis.empty());
    }
    const CatalogEntry* cg = find_check("check_chandra_ghosal");
    REQUIRE(cg != nullptr);
    CHECK(cg->citation.find("(5.4)") != std::string::npos);
    CHECK(find_check("check_kolmogorov") != nullptr);
    CHECK(find_check("does_not_exist") == nullptr);
}

TEST_CASE("seed is mandatory in the config or the overrides") {
    std::string cfg = R"({"models": [], "checks": [{"op": "transfer_trials", "count": 5}]})";
    CHECK(run_experiment(cfg).exit_code == 2);
    RunOptions opts;
    opts.seed = 99;
    auto r = run_experiment(cfg, opts);
    CHECK(r.exit_code == 0);
    CHECK(r.report.seed == 99);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
    auto a = run_experiment(kSmallConfig);
    auto b = run_experiment(kSmallConfig);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(to_tsv(a.report) == to_tsv(b.report));
    CHECK(to_json(a.report) == to_json(b.report));

    RunOptions threaded;
    threaded.threads = 3;
    auto c = run_experiment(kSmallConfig, threaded);
    REQUIRE(c.exit_code == 0);
    CHECK(to_tsv(a.report) == to_tsv(c.report));
    CHECK(to_json(a.report) == to_json(c.report));

    // a different seed must change the monte carlo rows
    RunOptions reseeded;
    reseeded.seed = 8;
    auto d = run_experiment(kSmallConfig, reseeded);
    REQUIRE(d.exit_code == 0);
    CHECK(to_tsv(a.report) != to_tsv(d.report));
}

TEST_CASE("rows come out sorted by (check_id, model_id, params)") {
    auto r = run_experiment(kSmallConfig);
    REQUIRE(r.exit_code == 0);
    const auto& rows = r.report.rows;
    REQUIRE(rows.size() > 2);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        auto key = [](const ReportRow& row) {
            return std::tie(row.check_id, row.model_id, row.params);
        };
        CHECK(key(rows[i - 1]) <= key(rows[i]));
    }
}

TEST_CASE("timing column appears only when requested") {
    auto plain = run_experiment(kSmallConfig);
    REQUIRE(plain.exit_code == 0);
    CHECK(to_tsv(plain.report).find("wall_ms") == std::string::npos);
    CHECK(to_json(plain.report).find("wall_ms") == std::string::npos);

    RunOptions timed;
    timed.timing = true;
    auto t = run_experiment(kSmallConfig, timed);
    REQUIRE(t.exit_code == 0);
    CHECK(t.report.timing);
    CHECK(to_tsv(t.report).find("wall_ms") != std::string::npos);
    CHECK(to_json(t.report).find("wall_ms") != std::string::npos);
}

TEST_CASE("bound scaling is the negative control: violations flip the exit code") {
    std::string cfg = R"({
        "seed": 7, "paths": 2000, "bound_scale": 0.1,
        "models": [{"id": "m", "kind": "iid", "n": 256}],
        "checks": [{"op": "check_kolmogorov", "model": "m", "form": "prob"}]
    })";
    auto r = run_experiment(cfg);
    CHECK(r.exit_code == 1);
    std::size_t violated = 0;
    for (const auto& row : r.report.rows)
        if (row.verdict == "Violated") ++violated;
    CHECK(violated >= 1);
    CHECK(any_violated(r.report));
}

TEST_CASE("trend verdicts map into the report vocabulary") {
    CHECK(verdict_of(TrendVerdict::Decaying) == "Holds");
    CHECK(verdict_of(TrendVerdict::Bounded) == "Holds");
    CHECK(verdict_of(TrendVerdict::NotDecaying) == "Violated");
    CHECK(verdict_of(TrendVerdict::Unbounded) == "Violated");
    CHECK(verdict_of(TrendVerdict::NotApplicable) == "NotApplicable");
}

TEST_CASE("file runner writes the requested formats into the output directory") {
    fs::path dir = temp_dir("filerun");
    fs::path cfg_path = dir / "config.json";
    {
        std::ofstream out(cfg_path);
        out << R"({
            "seed": 11, "paths": 200,
            "models": [],
            "checks": [{"op": "transfer_trials", "count": 10}],
            "report": {"out": ")" << (dir / "reports").string() << R"(",
                       "formats": ["table", "structured"]}
        })";
    }
    auto r = run_experiment_file(cfg_path.string(), {});
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.written.size() == 2);
    CHECK(fs::exists(dir / "reports" / "report.tsv"));
    CHECK(fs::exists(dir / "reports" / "report.json"));
    std::string tsv = read_file(dir / "reports" / "report.tsv");
    CHECK(tsv.find("transfer_trials") != std::string::npos);
    std::string json_text = read_file(dir / "reports" / "report.json");
    CHECK(json_text.find("\"seed\"") != std::string::npos);
    CHECK(to_tsv(r.report) == tsv);

    // out/format overrides replace the config's report block
    fs::path alt = dir / "alt";
    auto r2 = run_experiment_file(cfg_path.string(), {}, alt.string(), {"table"});
    REQUIRE(r2.exit_code == 0);
    CHECK(fs::exists(alt / "report.tsv"));
    CHECK_FALSE(fs::exists(alt / "report.json"));

    auto missing = run_experiment_file((dir / "nope.json").string(), {});
    CHECK(missing.exit_code == 2);
    CHECK_FALSE(missing.error.empty());
    fs::remove_all(dir);
}

TEST_CASE("unknown report format is a config error") {
    auto r = run_experiment(R"({
        "seed": 1, "models": [],
        "checks": [{"op": "transfer_trials", "count": 5}],
        "report": {"out": ".", "formats": ["yaml"]}
    })");
    CHECK(r.exit_code == 2);
    CHECK(r.error.find("yaml") != std::string::npos);
}

TEST_CASE("cli binary honors the exit-code contract") {
    std::string cli = "./hrlab";
    if (const char* env = std::getenv("HRLAB_CLI_PATH")) cli = env;
    if (!fs::exists(cli)) {
        MESSAGE("cli binary not found at ", cli, "; skipping cli smoke checks");
        return;
    }
    CHECK(shell_exit(cli + " list-checks > /dev/null") == 0);
    CHECK(shell_exit(cli + " describe check_kolmogorov > /dev/null") == 0);
    CHECK(shell_exit(cli + " describe nonesuch > /dev/null 2>&1") == 2);
    CHECK(shell_exit(cli + " run --config /nonexistent.json > /dev/null 2>&1") == 2);

    fs::path dir = temp_dir("clirun");
    fs::path cfg_path = dir / "c.json";
    {
        std::ofstream out(cfg_path);
        out << R"({"seed": 5, "models": [],
                   "checks": [{"op": "rademacher_battery", "n_min": 3, "n_max": 4}]})";
    }
    std::string run_cmd = cli + " run --config " + cfg_path.string() + " --out " +
                          (dir / "out").string() + " > /dev/null";
    CHECK(shell_exit(run_cmd) == 0);
    CHECK(fs::exists(dir / "out" / "report.tsv"));
    fs::remove_all(dir);
}
