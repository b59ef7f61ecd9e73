#include "optday/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "optday/csv.hpp"
#include "optday/error.hpp"
#include "optday/hash.hpp"

namespace optday {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Reads members of one JSON object and rejects any it did not ask for.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
        if (!obj_.is_object()) throw UsageError(fmt::format("{} must be a JSON object", where_));
    }
    ~ObjectReader() = default;

    bool has(const std::string& key) {
        seen_.insert(key);
        return obj_.contains(key) && !obj_.at(key).is_null();
    }

    template <class T>
    void get(const std::string& key, T& target) {
        if (!has(key)) return;
        try {
            target = obj_.at(key).get<T>();
        } catch (const json::exception&) {
            throw UsageError(fmt::format("{}.{} has the wrong type", where_, key));
        }
    }

    const json& at(const std::string& key) {
        seen_.insert(key);
        return obj_.at(key);
    }

    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!seen_.contains(key)) {
                throw UsageError(fmt::format("unknown key '{}' in {}", key, where_));
            }
        }
    }

private:
    const json& obj_;
    std::string where_;
    std::set<std::string> seen_;
};

FitParams parse_fit(const json& obj, FitParams p, const std::string& where) {
    ObjectReader r(obj, where);
    r.get("n_trees", p.n_trees);
    r.get("max_depth", p.max_depth);
    r.get("learning_rate", p.learning_rate);
    r.get("lambda", p.lambda);
    r.get("gamma", p.gamma);
    r.get("min_samples_leaf", p.min_samples_leaf);
    r.get("features_per_split", p.features_per_split);
    r.get("bootstrap", p.bootstrap);
    r.get("seed", p.seed);
    r.finish();
    if (p.n_trees < 1) throw UsageError(fmt::format("{}.n_trees must be >= 1", where));
    if (p.min_samples_leaf < 1) throw UsageError(fmt::format("{}.min_samples_leaf must be >= 1", where));
    if (!(p.learning_rate > 0.0)) throw UsageError(fmt::format("{}.learning_rate must be > 0", where));
    if (p.lambda < 0.0 || p.gamma < 0.0) {
        throw UsageError(fmt::format("{}: lambda and gamma must be >= 0", where));
    }
    return p;
}

json fit_json(const FitParams& p) {
    return {{"n_trees", p.n_trees},
            {"max_depth", p.max_depth},
            {"learning_rate", p.learning_rate},
            {"lambda", p.lambda},
            {"gamma", p.gamma},
            {"min_samples_leaf", p.min_samples_leaf},
            {"features_per_split", p.features_per_split},
            {"bootstrap", p.bootstrap},
            {"seed", p.seed}};
}

StudyBox parse_box(const json& obj) {
    StudyBox b;
    ObjectReader r(obj, "study_box");
    r.get("min_latitude", b.min_latitude);
    r.get("max_latitude", b.max_latitude);
    r.get("min_longitude", b.min_longitude);
    r.get("max_longitude", b.max_longitude);
    r.finish();
    return b;
}

json box_json(const StudyBox& b) {
    return {{"min_latitude", b.min_latitude},
            {"max_latitude", b.max_latitude},
            {"min_longitude", b.min_longitude},
            {"max_longitude", b.max_longitude}};
}

SynthConfig parse_synth(const json& obj) {
    SynthConfig s;
    ObjectReader r(obj, "synth");
    r.get("n_continuous", s.n_continuous);
    r.get("n_short", s.n_short);
    r.get("years", s.years);
    r.get("seed", s.seed);
    r.get("seasonal_amplitude", s.seasonal_amplitude);
    r.get("summer_bump", s.summer_bump);
    r.get("weekday_profile", s.weekday_profile);
    r.get("weekend_spread", s.weekend_spread);
    r.get("noise_sigma", s.noise_sigma);
    r.get("missing_fraction", s.missing_fraction);
    if (r.has("group_day_signal")) {
        GroupDaySignal g;
        ObjectReader gr(r.at("group_day_signal"), "synth.group_day_signal");
        gr.get("day", g.day);
        gr.get("strength", g.strength);
        gr.finish();
        s.group_day_signal = g;
    }
    if (r.has("class_mix")) {
        s.class_mix.clear();
        ObjectReader cr(r.at("class_mix"), "synth.class_mix");
        for (const auto& [name, weight] : r.at("class_mix").items()) {
            double w = 0.0;
            cr.get(name, w);
            try {
                s.class_mix.emplace_back(parse_functional_class(name), w);
            } catch (const InvalidArgument& e) {
                throw UsageError(fmt::format("synth.class_mix: {}", e.what()));
            }
        }
    }
    if (r.has("area_mix")) {
        s.area_mix.clear();
        ObjectReader ar(r.at("area_mix"), "synth.area_mix");
        for (const auto& [name, weight] : r.at("area_mix").items()) {
            double w = 0.0;
            ar.get(name, w);
            try {
                s.area_mix.emplace_back(parse_area_type(name), w);
            } catch (const InvalidArgument& e) {
                throw UsageError(fmt::format("synth.area_mix: {}", e.what()));
            }
        }
    }
    if (r.has("volume_ranges")) {
        s.volume_ranges.clear();
        for (const auto& [name, range] : r.at("volume_ranges").items()) {
            // "<class>_<area>", e.g. "arterial_urban".
            const auto sep = name.find('_');
            if (sep == std::string::npos || !range.is_array() || range.size() != 2) {
                throw UsageError(fmt::format(
                    "synth.volume_ranges.{} must be named <class>_<area> and hold [low, high]",
                    name));
            }
            const std::string cls = name.substr(0, sep), area = name.substr(sep + 1);
            CombinedClass cc;
            if (cls == "arterial") {
                cc = CombinedClass::Arterial;
            } else if (cls == "collector") {
                cc = CombinedClass::Collector;
            } else {
                throw UsageError(fmt::format("synth.volume_ranges: unknown class '{}'", cls));
            }
            AreaGroup ag;
            if (area == "rural") {
                ag = AreaGroup::Rural;
            } else if (area == "urban") {
                ag = AreaGroup::Urban;
            } else {
                throw UsageError(fmt::format("synth.volume_ranges: unknown area '{}'", area));
            }
            s.volume_ranges[{cc, ag}] = {range[0].get<double>(), range[1].get<double>()};
        }
    }
    if (r.has("study_box")) s.box = parse_box(r.at("study_box"));
    r.finish();
    try {
        s.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    return s;
}

json synth_json(const SynthConfig& s) {
    json j{{"n_continuous", s.n_continuous},
           {"n_short", s.n_short},
           {"years", s.years},
           {"seed", s.seed},
           {"seasonal_amplitude", s.seasonal_amplitude},
           {"summer_bump", s.summer_bump},
           {"weekday_profile", s.weekday_profile},
           {"weekend_spread", s.weekend_spread},
           {"noise_sigma", s.noise_sigma},
           {"missing_fraction", s.missing_fraction},
           {"study_box", box_json(s.box)}};
    if (s.group_day_signal) {
        j["group_day_signal"] = {{"day", s.group_day_signal->day},
                                 {"strength", s.group_day_signal->strength}};
    }
    json classes = json::object();
    for (const auto& [fc, w] : s.class_mix) classes[std::string(to_string(fc))] = w;
    j["class_mix"] = classes;
    json areas = json::object();
    for (const auto& [a, w] : s.area_mix) areas[std::string(to_string(a))] = w;
    j["area_mix"] = areas;
    json ranges = json::object();
    for (const auto& [key, range] : s.volume_ranges) {
        std::string cls(to_string(key.first));
        std::string area(to_string(key.second));
        std::transform(cls.begin(), cls.end(), cls.begin(), ::tolower);
        std::transform(area.begin(), area.end(), area.begin(), ::tolower);
        ranges[cls + "_" + area] = {range.low, range.high};
    }
    j["volume_ranges"] = ranges;
    return j;
}

std::pair<int, int> parse_days(std::string_view text) {
    auto number = [&](std::string_view part) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size()) {
            throw UsageError(fmt::format("invalid day range '{}' (expected A-B)", text));
        }
        return v;
    };
    const auto dash = text.find('-');
    const int first = number(text.substr(0, dash));
    const int last = dash == std::string_view::npos ? first : number(text.substr(dash + 1));
    if (first < 1 || last > kDaysPerYear || first > last) {
        throw UsageError(fmt::format("day range '{}' must satisfy 1 <= A <= B <= 365", text));
    }
    return {first, last};
}

ScenarioSelection parse_scenario(std::string_view s) {
    if (s == "sweep") return ScenarioSelection::Sweep;
    if (s == "baseline") return ScenarioSelection::Baseline;
    if (s == "both") return ScenarioSelection::Both;
    throw UsageError(fmt::format("unknown scenario '{}' (sweep, baseline or both)", s));
}

std::string_view scenario_name(ScenarioSelection s) {
    switch (s) {
        case ScenarioSelection::Sweep:
            return "sweep";
        case ScenarioSelection::Baseline:
            return "baseline";
        case ScenarioSelection::Both:
            return "both";
    }
    return "both";
}

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

RunConfig parse_run_config(const json& input, const fs::path& base_dir) {
    const json& doc = input.contains("config") && input.contains("format") ? input.at("config") : input;
    RunConfig c;
    ObjectReader r(doc, "config");
    if (r.has("inputs") == r.has("synth")) {
        throw UsageError("config needs exactly one of 'inputs' or 'synth'");
    }
    if (r.has("inputs")) {
        IngestInputs in;
        ObjectReader ir(r.at("inputs"), "inputs");
        std::string path;
        if (!ir.has("continuous")) throw UsageError("inputs.continuous is required");
        ir.get("continuous", path);
        in.continuous = resolve(base_dir, path);
        for (const char* key : {"short", "attributes", "aadt"}) {
            if (!ir.has(key)) continue;
            ir.get(key, path);
            const fs::path resolved = resolve(base_dir, path);
            if (std::string_view(key) == "short") {
                in.short_counts = resolved;
            } else if (std::string_view(key) == "attributes") {
                in.attributes = resolved;
            } else {
                in.aadt = resolved;
            }
        }
        ir.finish();
        c.inputs = in;
    } else {
        c.synth = parse_synth(r.at("synth"));
    }

    std::string dir = "out";
    r.get("output_dir", dir);
    c.output_dir = resolve(base_dir, dir);
    c.staged_dir = c.output_dir / "staged";
    if (r.has("staged_dir")) {
        r.get("staged_dir", dir);
        c.staged_dir = resolve(base_dir, dir);
        c.staged_dir_explicit = true;
    }
    if (r.has("study_box")) c.study_box = parse_box(r.at("study_box"));

    PipelineConfig& p = c.pipeline;
    r.get("seed", p.seed);
    r.get("k", p.k);
    r.get("test_year", p.test_year);
    r.get("jobs", p.jobs);
    r.get("top_n", p.top_n);
    if (r.has("boosted")) p.boosted = parse_fit(r.at("boosted"), p.boosted, "boosted");
    if (r.has("imputation")) {
        ObjectReader ir(r.at("imputation"), "imputation");
        if (ir.has("forest")) {
            p.imputation.forest = parse_fit(ir.at("forest"), p.imputation.forest, "imputation.forest");
        }
        if (ir.has("boosted")) {
            p.imputation.boosted =
                parse_fit(ir.at("boosted"), p.imputation.boosted, "imputation.boosted");
        }
        ir.get("holdout_fraction", p.imputation.holdout_fraction);
        ir.get("max_training_cells", p.imputation.max_training_cells);
        ir.finish();
        if (!(p.imputation.holdout_fraction > 0.0 && p.imputation.holdout_fraction < 1.0)) {
            throw UsageError("imputation.holdout_fraction must lie in (0, 1)");
        }
    }
    if (r.has("split")) {
        ObjectReader sr(r.at("split"), "split");
        sr.get("train", p.split.train);
        sr.get("validation", p.split.validation);
        sr.get("test", p.split.test);
        sr.finish();
    }
    const double total = p.split.train + p.split.validation + p.split.test;
    if (p.split.train < 0 || p.split.validation < 0 || p.split.test < 0 ||
        std::abs(total - 1.0) > 1e-9) {
        throw UsageError("split fractions must be non-negative and sum to 1");
    }
    if (r.has("scenario")) {
        std::string s;
        r.get("scenario", s);
        p.scenario = parse_scenario(s);
    }
    if (r.has("days")) {
        std::string d;
        r.get("days", d);
        std::tie(p.first_day, p.last_day) = parse_days(d);
    }
    r.finish();
    if (p.k < 1) throw UsageError("k must be >= 1");
    return c;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError(fmt::format("cannot open config '{}'", path.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(fmt::format("config '{}' is not valid JSON: {}", path.string(), e.what()));
    }
    return parse_run_config(doc, fs::absolute(path).parent_path());
}

json to_json(const RunConfig& c) {
    json j;
    if (c.inputs) {
        json in{{"continuous", c.inputs->continuous.string()}};
        if (c.inputs->short_counts) in["short"] = c.inputs->short_counts->string();
        if (c.inputs->attributes) in["attributes"] = c.inputs->attributes->string();
        if (c.inputs->aadt) in["aadt"] = c.inputs->aadt->string();
        j["inputs"] = in;
    }
    if (c.synth) j["synth"] = synth_json(*c.synth);
    const PipelineConfig& p = c.pipeline;
    j["output_dir"] = c.output_dir.string();
    j["staged_dir"] = c.staged_dir.string();
    j["study_box"] = box_json(c.study_box);
    j["seed"] = p.seed;
    j["k"] = p.k;
    j["test_year"] = p.test_year;
    j["jobs"] = p.jobs;
    j["top_n"] = p.top_n;
    j["boosted"] = fit_json(p.boosted);
    j["imputation"] = {{"forest", fit_json(p.imputation.forest)},
                       {"boosted", fit_json(p.imputation.boosted)},
                       {"holdout_fraction", p.imputation.holdout_fraction},
                       {"max_training_cells", p.imputation.max_training_cells}};
    j["split"] = {{"train", p.split.train},
                  {"validation", p.split.validation},
                  {"test", p.split.test}};
    j["scenario"] = scenario_name(p.scenario);
    j["days"] = fmt::format("{}-{}", p.first_day, p.last_day);
    return j;
}

namespace {

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << j.dump(2) << "\n";
}

int cmd_ingest(const RunConfig& config, std::ostream& out) {
    IngestInputs inputs;
    if (config.synth) {
        const fs::path raw = config.output_dir / "synth";
        const SynthData data = generate(*config.synth);
        write_synth_csv(raw, data);
        inputs.continuous = raw / "continuous.csv";
        inputs.short_counts = raw / "short.csv";
        out << fmt::format("generated synthetic inputs in {}\n", raw.string());
    } else {
        inputs = *config.inputs;
    }
    for (const auto& p : {std::optional<fs::path>(inputs.continuous), inputs.short_counts,
                          inputs.attributes, inputs.aadt}) {
        if (p && fs::is_directory(*p)) {
            throw UsageError(fmt::format("'{}' is a directory, expected a CSV file", p->string()));
        }
    }
    IngestOptions options;
    options.box = config.study_box;
    const IngestResult result = ingest_files(inputs, options);
    fs::create_directories(config.staged_dir);
    write_staged(config.staged_dir, result.dataset);
    write_rejects(config.staged_dir / "rejects.csv", result.report.rejects);

    const IngestReport& r = result.report;
    out << fmt::format(
        "staged {} station-years, {} short counts in {}\n"
        "continuous rows {}, incomplete days {}, short rows {}, short on invalid days {}, "
        "short without AADT {}, rejects {}\n",
        result.dataset.stations.size(), result.dataset.short_counts.size(),
        config.staged_dir.string(), r.continuous_rows, r.incomplete_days, r.short_rows,
        r.short_invalid_day, r.short_unmatched, r.rejects.size());
    return 0;
}

json metrics_json(const std::optional<MetricsBundle>& m) {
    if (!m) return nullptr;
    return {{"rmse", m->rmse},
            {"mae", m->mae},
            {"r2", m->r2 ? json(*m->r2) : json(nullptr)},
            {"mape", m->mape_percent},
            {"n", m->n}};
}

json imputation_json(const std::vector<ImputationReport>& reports) {
    json arr = json::array();
    for (const ImputationReport& r : reports) {
        auto score = [](const LearnerScore& s) {
            return json{{"rmse", s.rmse}, {"r2", s.r2 ? json(*s.r2) : json(nullptr)}};
        };
        arr.push_back({{"year", r.year},
                       {"nothing_to_impute", r.nothing_to_impute},
                       {"missing_cells", r.missing_cells},
                       {"imputed_cells", r.imputed_cells},
                       {"training_cells", r.training_cells},
                       {"holdout_cells", r.holdout_cells},
                       {"random_forest", score(r.forest)},
                       {"gradient_boosting", score(r.boosted)},
                       {"station_mean_rmse", r.mean_baseline_rmse},
                       {"winner", to_string(r.winner)},
                       {"flagged_stations", r.flagged_stations}});
    }
    return arr;
}

json dataset_fingerprints(const fs::path& staged) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(staged)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && entry.path().extension() == ".csv" && name != "rejects.csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    json j = json::object();
    for (const fs::path& f : files) j[f.filename().string()] = file_fingerprint(f);
    return j;
}

int cmd_run(const RunConfig& config, std::ostream& out) {
    const StagedDataset staged = read_staged(config.staged_dir);
    const PipelineConfig& p = config.pipeline;
    const PipelineRun run = run_pipeline(staged, p);

    fs::create_directories(config.output_dir);
    const fs::path dir = config.output_dir;
    json outputs = json::object();
    auto record = [&](const fs::path& file) { outputs[file.filename().string()] = file_fingerprint(file); };

    if (p.scenario != ScenarioSelection::Baseline) {
        write_results_csv(dir / "results.csv", run.sweep.days);
        record(dir / "results.csv");
    }
    if (run.baseline) {
        write_results_csv(dir / "baseline.csv", std::span(&*run.baseline, 1));
        record(dir / "baseline.csv");
        write_feature_rows_csv(dir / "features_baseline.csv", run.dataset, run.clusters,
                               AllValidDays{});
    }
    if (run.baseline && p.scenario == ScenarioSelection::Both) {
        ComparisonReport report;
        if (run.comparison) {
            report = *run.comparison;
        } else if (run.baseline->test) {
            report = compare(*run.baseline, {});
        }
        if (run.baseline->test) {
            write_comparison_csv(dir / "comparison.csv", report);
            record(dir / "comparison.csv");
        }
    }
    if (!run.sweep.ranking.empty()) {
        const int best = run.sweep.ranking.front();
        write_feature_rows_csv(dir / fmt::format("features_day_{:03}.csv", best), run.dataset,
                               run.clusters, DaySpecific{best});
    }
    write_json(dir / "imputation.json", imputation_json(run.imputation));

    json seeds{{"run", p.seed},
               {"clustering", derive_seed(p.seed, 2 + 1000 * (run.cluster_attempts - 1))},
               {"split", derive_seed(p.seed, 3)}};
    json imputation_seeds = json::object();
    for (const ImputationReport& r : run.imputation) {
        imputation_seeds[std::to_string(r.year)] =
            derive_seed(p.seed, 100 + static_cast<std::uint64_t>(r.year));
    }
    seeds["imputation"] = imputation_seeds;
    if (config.synth) seeds["synth"] = config.synth->seed;

    json manifest{{"format", "optday-manifest 1"},
                  {"config", to_json(config)},
                  {"seeds", seeds},
                  {"cluster_attempts", run.cluster_attempts},
                  {"dataset_fingerprints", dataset_fingerprints(config.staged_dir)},
                  {"split_fingerprint", run.dataset.split.fingerprint()},
                  {"split_counts",
                   {{"train", run.dataset.split.count(Subset::Train)},
                    {"validation", run.dataset.split.count(Subset::Validation)},
                    {"test", run.dataset.split.count(Subset::Test)}}},
                  {"model_features", kModelFeatures},
                  {"ranking", run.sweep.ranking},
                  {"excluded_from_comparison", run.excluded_from_comparison},
                  {"outputs", outputs}};
    if (run.baseline) {
        manifest["baseline"] = {{"validation", metrics_json(run.baseline->validation)},
                                {"test", metrics_json(run.baseline->test)},
                                {"test_fingerprint", run.baseline->test_fingerprint}};
    }
    write_json(dir / "manifest.json", manifest);

    if (!run.sweep.days.empty()) {
        out << "Top days by validation RMSE\n" << format_top_days(run.sweep, p.top_n);
    }
    if (run.baseline && run.baseline->validation) {
        out << fmt::format("Baseline validation RMSE {:.2f}", run.baseline->validation->rmse);
        if (run.baseline->test) out << fmt::format(", test RMSE {:.2f}", run.baseline->test->rmse);
        out << "\n";
    }
    if (run.comparison) {
        for (const ComparisonEntry& e : run.comparison->days) {
            out << fmt::format("Day {}: test RMSE {:.2f} ({}% vs baseline)\n", e.day, e.metrics.rmse,
                               e.change.rmse ? fmt::format("{:+.2f}", -*e.change.rmse) : "n/a");
        }
    }
    out << fmt::format("outputs written to {}\n", dir.string());
    return 0;
}

int cmd_plotdata(const fs::path& results, const std::optional<fs::path>& out_dir,
                 std::ostream& out) {
    if (!fs::is_regular_file(results)) {
        throw UsageError(fmt::format("results file '{}' not found", results.string()));
    }
    struct Series {
        std::string validation, test;
        bool skipped = false;
    };
    std::map<int, Series> series;
    try {
        csv::Reader rd(results);
        const auto day_col = rd.require("day"), split_col = rd.require("split"),
                   rmse_col = rd.require("rmse");
        std::vector<std::string> f;
        while (rd.next(f)) {
            if (f.size() != rd.header().size()) {
                throw Error(fmt::format("{}:{}: wrong field count", results.string(), rd.line_number()));
            }
            int day = 0;
            const std::string& d = f[day_col];
            const auto [ptr, ec] = std::from_chars(d.data(), d.data() + d.size(), day);
            if (ec != std::errc{} || ptr != d.data() + d.size()) {
                throw Error(fmt::format("{}:{}: bad day '{}'", results.string(), rd.line_number(), d));
            }
            Series& s = series[day];
            const std::string& split = f[split_col];
            if (split == "validation") {
                s.validation = f[rmse_col];
            } else if (split == "test") {
                s.test = f[rmse_col];
            } else if (split == "skipped") {
                s.skipped = true;
            } else {
                throw Error(fmt::format("{}:{}: unknown split '{}'", results.string(),
                                        rd.line_number(), split));
            }
        }
    } catch (const SchemaError& e) {
        throw Error(fmt::format("malformed results: {}", e.what()));
    }
    if (series.empty()) throw Error(fmt::format("results file '{}' has no rows", results.string()));

    const fs::path dir = out_dir.value_or(results.parent_path());
    fs::create_directories(dir.empty() ? fs::path(".") : dir);
    const fs::path target = (dir.empty() ? fs::path(".") : dir) / "rmse_series.csv";
    csv::Writer w(target);
    w.row({"day", "validation_rmse", "test_rmse", "status"});
    for (const auto& [day, s] : series) {
        w.row({std::to_string(day), s.validation, s.test, s.skipped ? "skipped" : "ok"});
    }
    out << fmt::format("wrote {} days to {}\n", series.size(), target.string());
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal short-count day selection for AADT estimation"};
    app.require_subcommand(1);

    std::string config_path, scenario, days, out_dir, results;
    unsigned jobs = 0;

    auto* ingest = app.add_subcommand("ingest", "Validate raw inputs (or generate synthetic ones) and stage them");
    ingest->add_option("--config", config_path, "Run config (JSON)")->required();
    ingest->add_option("--out", out_dir, "Output directory (overrides config)");

    auto* run = app.add_subcommand("run", "Impute, engineer features, split, train and report");
    run->add_option("--config", config_path, "Run config or manifest (JSON)")->required();
    run->add_option("--scenario", scenario, "sweep, baseline or both");
    run->add_option("--days", days, "Candidate day range A-B");
    run->add_option("--jobs", jobs, "Parallel workers (0 = all cores)");
    run->add_option("--out", out_dir, "Output directory (overrides config)");

    auto* plot = app.add_subcommand("plotdata", "Per-day RMSE series from a results CSV");
    plot->add_option("--results", results, "results.csv from a sweep")->required();
    plot->add_option("--out", out_dir, "Output directory (default: next to results)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (plot->parsed()) {
            return cmd_plotdata(results,
                                out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir), out);
        }
        RunConfig config = load_run_config(config_path);
        if (!out_dir.empty()) {
            config.output_dir = fs::absolute(out_dir).lexically_normal();
            if (!config.staged_dir_explicit) config.staged_dir = config.output_dir / "staged";
        }
        if (ingest->parsed()) return cmd_ingest(config, out);
        if (!scenario.empty()) config.pipeline.scenario = parse_scenario(scenario);
        if (!days.empty()) {
            std::tie(config.pipeline.first_day, config.pipeline.last_day) = parse_days(days);
        }
        if (run->count("--jobs") > 0) config.pipeline.jobs = jobs;
        return cmd_run(config, out);
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace optday
