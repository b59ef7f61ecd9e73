#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include <json.hpp>

#include "optday/ingest.hpp"
#include "optday/pipeline.hpp"
#include "optday/synth.hpp"

namespace optday {

// One declarative run description. Exactly one of `inputs` / `synth` is set.
struct RunConfig {
    std::optional<IngestInputs> inputs;
    std::optional<SynthConfig> synth;
    StudyBox study_box;
    std::filesystem::path output_dir = "out";
    std::filesystem::path staged_dir;  // defaults to <output_dir>/staged
    bool staged_dir_explicit = false;  // false: follows output_dir overrides
    PipelineConfig pipeline;
};

// Relative paths resolve against `base_dir`. Throws UsageError on unknown
// keys, wrong types or violated invariants. A run manifest is accepted too:
// its "config" member is used.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// Fully resolved config as JSON; parse_run_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

// Exit codes: 0 success, 1 runtime failure, 2 usage or schema error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace optday
