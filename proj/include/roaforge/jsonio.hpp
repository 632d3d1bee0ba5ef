#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "roaforge/pipeline.hpp"

namespace roaforge::jsonio {

struct ValidationConfig {
  int samples = 500;
  std::uint64_t seed = 0;
  double dt = 1e-3;
  double horizon = 50.0;
  long area_samples = 1000000;
};

struct OutputsConfig {
  std::string results = "results.json";
  std::string svg;
  std::string csv;
};

struct RunConfig {
  pipeline::PipelineSpec spec;
  ValidationConfig validation;
  OutputsConfig outputs;
};

/// Parses and schema-validates a run config; unknown keys are rejected.
/// Throws std::runtime_error naming the offending field.
RunConfig load_config(const std::string& path);

/// Everything needed to re-verify the run without re-solving.
struct ResultsFile {
  std::vector<pipeline::CaseResult> cases;
  std::vector<pipeline::AreaEstimate> member_areas;
  std::optional<pipeline::AreaEstimate> union_area;
  std::optional<polyalg::BoxDomain> original_box;
  std::uint64_t seed = 0;
};

std::string results_to_json(const ResultsFile& results);
ResultsFile results_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// 800x800 SVG of the original box plus each member's level curve, with a
/// CSV sidecar of the polyline points (case_index, point_index, x1, x2).
struct RenderOutput {
  std::string svg;
  std::string csv;
};
RenderOutput render_region(const pipeline::UnionRegion& region,
                           const polyalg::BoxDomain& original_box, int rays = 512);

}  // namespace roaforge::jsonio
