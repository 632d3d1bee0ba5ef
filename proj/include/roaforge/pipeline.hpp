#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "roaforge/levelset.hpp"
#include "roaforge/lmikit.hpp"
#include "roaforge/polyalg.hpp"
#include "roaforge/tsmodel.hpp"

namespace roaforge::pipeline {

struct SolverOptions {
  std::vector<double> lambda_grid = {0, 0.01, 0.1, 0.5, 1, 2, 5, 10, 50, 100};
  double margin_tol = 1e-9;
};

/// One transform branch: box, premises and factorization are stated in the
/// transformed coordinates xbar = T x.
struct CaseSpec {
  polyalg::Transform transform;
  polyalg::BoxDomain box;
  std::vector<polyalg::Poly> premises;
  tsmodel::Factorization factorization;
};

struct PipelineSpec {
  polyalg::PolyMap system;
  polyalg::BoxDomain original_box;
  std::vector<CaseSpec> cases;
  SolverOptions solver;
};

struct CaseResult {
  bool ok = false;
  std::string failed_stage;  // "transform" | "ts_model" | "lmi" | "level"
  std::string message;
  std::optional<tsmodel::TSModel> model;
  std::optional<lmikit::PwqCertificate> certificate;
  std::optional<levelset::RoaEstimate> estimate;
};

CaseResult run_case(const CaseSpec& cs, const polyalg::PolyMap& system,
                    const SolverOptions& solver);

/// Union of per-case estimates, all queried in original coordinates.
struct UnionRegion {
  std::vector<levelset::RoaEstimate> members;

  /// Bounding box (original coordinates) covering every member.
  polyalg::BoxDomain bounding_box() const;
};

struct MultiResult {
  UnionRegion region;
  std::vector<CaseResult> case_results;  // spec order
  bool all_failed() const { return region.members.empty(); }
};

MultiResult run_multi(const PipelineSpec& spec);

bool union_contains(const UnionRegion& region, const Eigen::VectorXd& x);

struct AreaEstimate {
  double area = 0.0;
  double half_width = 0.0;  // binomial 95% interval half-width
  std::uint64_t seed = 0;
  long samples = 0;
};

/// Monte Carlo hit fraction times box area (n=2).
AreaEstimate area_estimate(const std::function<bool(const Eigen::VectorXd&)>& member,
                           const polyalg::BoxDomain& bounding_box, long n_samples,
                           std::uint64_t seed);

}  // namespace roaforge::pipeline
