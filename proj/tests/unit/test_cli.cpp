#include <doctest.h>

#include <cstdlib>
#include <set>
#include <sys/wait.h>
#include <sstream>

#include <json.hpp>

#include "optday/cli.hpp"
#include "optday/error.hpp"
#include "../support.hpp"

using namespace optday;
using testing::read_text;
using testing::TempDir;
using testing::write_text;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "optday");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json small_config() {
    return nlohmann::json::parse(R"({
        "synth": {"n_continuous": 120, "n_short": 100, "seed": 5,
                  "group_day_signal": {"day": 186, "strength": 0.9}},
        "output_dir": "out",
        "seed": 3,
        "jobs": 1,
        "boosted": {"n_trees": 40},
        "imputation": {"forest": {"n_trees": 20}, "boosted": {"n_trees": 40},
                       "max_training_cells": 3000}
    })");
}

std::string config_file(const TempDir& dir, const nlohmann::json& doc) {
    const auto path = dir / "config.json";
    write_text(path, doc.dump(2));
    return path.string();
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("config parsing") {
        const RunConfig c = parse_run_config(small_config(), "/base");
        REQUIRE(c.synth.has_value());
        CHECK(c.synth->n_continuous == 120);
        CHECK(c.synth->group_day_signal->day == 186);
        CHECK(c.output_dir == "/base/out");
        CHECK(c.staged_dir == "/base/out/staged");
        CHECK(c.pipeline.boosted.n_trees == 40);
        CHECK(c.pipeline.boosted.max_depth == 6);

        const RunConfig again = parse_run_config(to_json(c), "/elsewhere");
        CHECK(to_json(again) == to_json(c));

        auto bad = small_config();
        bad["sede"] = 1;
        CHECK_THROWS_AS(parse_run_config(bad, "."), UsageError);
        bad = small_config();
        bad["days"] = "200-100";
        CHECK_THROWS_AS(parse_run_config(bad, "."), UsageError);
        bad = small_config();
        bad["split"] = {{"train", 0.9}};
        CHECK_THROWS_AS(parse_run_config(bad, "."), UsageError);
        bad = small_config();
        bad["inputs"] = {{"continuous", "c.csv"}};
        CHECK_THROWS_AS(parse_run_config(bad, "."), UsageError);
    }

    TEST_CASE("usage errors exit with 2") {
        CHECK(cli({}).code == 2);
        CHECK(cli({"run"}).code == 2);
        CHECK(cli({"bogus"}).code == 2);
        TempDir dir("cli");
        CHECK(cli({"run", "--config", (dir / "missing.json").string()}).code == 2);
    }

    TEST_CASE("a missing column is a schema error naming the column") {
        TempDir dir("cli");
        write_text(dir / "c.csv",
                   "station_id,latitude,longitude,functional_class,lanes,date,hour,volume\n"
                   "x,30,-97,interstate,2,2022-07-05,,100\n");
        nlohmann::json doc = {{"inputs", {{"continuous", "c.csv"}}}};
        const CliResult r = cli({"ingest", "--config", config_file(dir, doc)});
        CHECK(r.code == 2);
        CHECK(r.err.find("area_type") != std::string::npos);
    }

    TEST_CASE("a directory or empty staging is a usage error") {
        TempDir dir("cli");
        std::filesystem::create_directories(dir / "empty");
        nlohmann::json doc = {{"inputs", {{"continuous", "empty"}}}};
        CHECK(cli({"ingest", "--config", config_file(dir, doc)}).code == 2);
        // run before ingest: nothing staged yet
        CHECK(cli({"run", "--config", config_file(dir, small_config())}).code == 2);
    }

    TEST_CASE("plotdata rejects empty results") {
        TempDir dir("cli");
        write_text(dir / "results.csv", "");
        CHECK(cli({"plotdata", "--results", (dir / "results.csv").string()}).code == 1);
        CHECK(cli({"plotdata", "--results", (dir / "none.csv").string()}).code == 2);
    }

    TEST_CASE("ingest, run and plotdata end to end") {
        TempDir dir("cli");
        const std::string cfg = config_file(dir, small_config());
        const CliResult ingest = cli({"ingest", "--config", cfg});
        REQUIRE_MESSAGE(ingest.code == 0, ingest.err);
        CHECK(std::filesystem::exists(dir / "out/staged/stations.csv"));
        CHECK(std::filesystem::exists(dir / "out/staged/rejects.csv"));

        const CliResult run = cli({"run", "--config", cfg, "--days", "180-190"});
        REQUIRE_MESSAGE(run.code == 0, run.err);
        CHECK(run.out.find("Top days by validation RMSE") != std::string::npos);

        const std::string results = read_text(dir / "out/results.csv");
        std::istringstream lines(results);
        std::string line;
        std::getline(lines, line);
        CHECK(line == "day,split,rmse,mae,r2,mape,n,dropped_rows");
        std::set<int> days;
        bool skipped = false;
        while (std::getline(lines, line)) {
            days.insert(std::stoi(line.substr(0, line.find(','))));
            if (line.find(",skipped,") != std::string::npos) skipped = true;
        }
        CHECK(days.size() == 11);
        CHECK(*days.begin() == 180);
        CHECK(skipped);
        for (const char* f : {"baseline.csv", "comparison.csv", "manifest.json", "imputation.json",
                              "features_baseline.csv"}) {
            CHECK_MESSAGE(std::filesystem::exists(dir / "out" / f), f);
        }
        const auto manifest = nlohmann::json::parse(read_text(dir / "out/manifest.json"));
        CHECK(manifest.at("format") == "optday-manifest 1");
        CHECK(manifest.at("config").at("days") == "180-190");

        // A rerun from the manifest into a fresh directory reproduces the outputs.
        const CliResult rerun = cli({"run", "--config", (dir / "out/manifest.json").string(), "--out",
                                     (dir / "again").string()});
        REQUIRE_MESSAGE(rerun.code == 0, rerun.err);
        CHECK(read_text(dir / "again/results.csv") == results);
        CHECK(read_text(dir / "again/comparison.csv") == read_text(dir / "out/comparison.csv"));

        const CliResult plot = cli({"plotdata", "--results", (dir / "out/results.csv").string()});
        REQUIRE_MESSAGE(plot.code == 0, plot.err);
        const std::string series = read_text(dir / "out/rmse_series.csv");
        CHECK(series.rfind("day,validation_rmse,test_rmse,status\n", 0) == 0);
        CHECK(series.find(",skipped") != std::string::npos);
    }

    TEST_CASE("the installed binary reports help and exit codes") {
        const std::string bin = OPTDAY_BIN;
        CHECK(std::system((bin + " --help > /dev/null").c_str()) == 0);
        const int status = std::system((bin + " run > /dev/null 2>&1").c_str());
        CHECK(WEXITSTATUS(status) == 2);
    }
}
