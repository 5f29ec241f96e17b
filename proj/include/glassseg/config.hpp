#pragma once

#include <filesystem>
#include <string>

#include "glassseg/pipeline.hpp"
#include "glassseg/scene.hpp"

namespace glassseg {

// Configuration documents are INI text: "[section]" headers, "key = value"
// lines, and full-line comments starting with '#' or ';'. Every key has a
// default, so an empty document is valid. Unknown sections or keys, malformed
// values, and out-of-range parameters are ErrorKind::config errors.

PipelineConfig parse_pipeline_config(const std::string& text);
std::string serialize_pipeline_config(const PipelineConfig& cfg);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Scene documents use a single [scene] section. Explicit shapes are numbered
/// keys: object1 = ellipse|rectangle cx cy half_w half_h intensity, and
/// stain1 = cx cy radius intensity opacity [wobble phase].
SceneSpec parse_scene_spec(const std::string& text);
std::string serialize_scene_spec(const SceneSpec& spec);

}  // namespace glassseg
