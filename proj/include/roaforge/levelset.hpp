#pragma once

#include <Eigen/Dense>
#include <vector>

#include "roaforge/polyalg.hpp"

namespace roaforge::levelset {

/// Certified sublevel-set region {x : V(Tx) <= k, Tx in box} with
/// V(y) = max_j y'P_j y. The transform maps original coordinates into the
/// frame the certificate was computed in.
struct RoaEstimate {
  std::vector<Eigen::MatrixXd> P_list;
  double k = 0.0;
  polyalg::Transform transform;
  polyalg::BoxDomain box;  // modeling box, transformed coordinates
  bool approximate = false;  // true when k came from the sampling fallback
};

double v_eval(const std::vector<Eigen::MatrixXd>& P_list, const Eigen::VectorXd& x);

struct LevelResult {
  double k = 0.0;
  bool exact = false;  // n=2 facet enumeration vs boundary-sampling fallback
};

/// Largest k with {V <= k} inside the box: min of V over the box boundary.
/// n=2 uses closed-form facet candidate enumeration; n>=3 falls back to
/// quasi-random boundary sampling (one-sided upper estimate).
LevelResult max_level(const std::vector<Eigen::MatrixXd>& P_list,
                      const polyalg::BoxDomain& box, int fallback_samples = 200000);

bool contains(const RoaEstimate& roa, const Eigen::VectorXd& x);

/// Level-curve polyline in original coordinates, ordered by ray angle (n=2).
std::vector<Eigen::Vector2d> boundary_polyline(const RoaEstimate& roa, int samples);

}  // namespace roaforge::levelset
