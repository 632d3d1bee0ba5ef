#include "roaforge/pipeline.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace roaforge::pipeline {

CaseResult run_case(const CaseSpec& cs, const polyalg::PolyMap& system,
                    const SolverOptions& solver) {
  CaseResult out;

  polyalg::PolyMap transformed;
  try {
    transformed = polyalg::compose_linear(system, cs.transform);
  } catch (const std::exception& e) {
    out.failed_stage = "transform";
    out.message = e.what();
    return out;
  }

  try {
    out.model = tsmodel::build_ts(transformed, cs.premises, cs.factorization, cs.box);
  } catch (const std::exception& e) {
    out.failed_stage = "ts_model";
    out.message = e.what();
    return out;
  }

  lmikit::LdiSystem ldi(out.model->vertices);
  auto cert = lmikit::solve_pwq(ldi, solver.lambda_grid);
  if (!cert) {
    out.failed_stage = "lmi";
    out.message = "no piecewise quadratic certificate found on the lambda grid";
    return out;
  }
  auto report = lmikit::verify_certificate(*cert, ldi, solver.margin_tol);
  if (!report.accepted) {
    out.failed_stage = "lmi";
    out.message = "certificate failed independent eigenvalue verification";
    return out;
  }
  out.certificate = *cert;

  auto level = levelset::max_level(cert->P_list, cs.box);
  if (!(level.k > 0.0) || !std::isfinite(level.k)) {
    out.failed_stage = "level";
    out.message = "degenerate level: no positive k with the sublevel set inside the box";
    return out;
  }
  out.estimate = levelset::RoaEstimate{cert->P_list, level.k, cs.transform, cs.box,
                                       !level.exact};
  out.ok = true;
  return out;
}

MultiResult run_multi(const PipelineSpec& spec) {
  if (spec.cases.empty()) throw std::invalid_argument("run_multi: no cases in spec");
  MultiResult out;
  // Cases are independent by contract; run sequentially in spec order so the
  // merged result is deterministic.
  for (const auto& cs : spec.cases) {
    CaseResult r = run_case(cs, spec.system, spec.solver);
    if (r.ok) out.region.members.push_back(*r.estimate);
    out.case_results.push_back(std::move(r));
  }
  return out;
}

polyalg::BoxDomain UnionRegion::bounding_box() const {
  if (members.empty()) throw std::invalid_argument("UnionRegion::bounding_box: no members");
  Eigen::VectorXd lo, hi;
  for (const auto& m : members) {
    polyalg::Transform inv(m.transform.inverse(), m.transform.matrix());
    polyalg::BoxDomain bb = polyalg::map_box_bounding(m.box, inv);
    if (lo.size() == 0) {
      lo = bb.lower;
      hi = bb.upper;
    } else {
      lo = lo.cwiseMin(bb.lower);
      hi = hi.cwiseMax(bb.upper);
    }
  }
  return polyalg::BoxDomain(lo, hi);
}

bool union_contains(const UnionRegion& region, const Eigen::VectorXd& x) {
  for (const auto& m : region.members)
    if (levelset::contains(m, x)) return true;
  return false;
}

AreaEstimate area_estimate(const std::function<bool(const Eigen::VectorXd&)>& member,
                           const polyalg::BoxDomain& bounding_box, long n_samples,
                           std::uint64_t seed) {
  if (bounding_box.dim() != 2)
    throw std::invalid_argument("area_estimate: only n=2 supported");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(bounding_box.lower[0], bounding_box.upper[0]);
  std::uniform_real_distribution<double> uy(bounding_box.lower[1], bounding_box.upper[1]);
  long hits = 0;
  Eigen::VectorXd x(2);
  for (long i = 0; i < n_samples; ++i) {
    x[0] = ux(rng);
    x[1] = uy(rng);
    if (member(x)) ++hits;
  }
  const double p = static_cast<double>(hits) / n_samples;
  const double box_area = bounding_box.volume();
  AreaEstimate out;
  out.area = p * box_area;
  out.half_width = 1.96 * std::sqrt(p * (1.0 - p) / n_samples) * box_area;
  out.seed = seed;
  out.samples = n_samples;
  return out;
}

}  // namespace roaforge::pipeline
