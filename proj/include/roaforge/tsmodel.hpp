#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "roaforge/polyalg.hpp"

namespace roaforge::tsmodel {

/// Scalar nonlinearity z_k(x) bounded on the modeling box.
struct PremiseVar {
  polyalg::Poly definition;
  double z_min = 0.0;
  double z_max = 0.0;

  double width() const { return z_max - z_min; }
};

/// c0 + sum_k c_k z_k over the premise variables.
struct AffineExpr {
  double c0 = 0.0;
  Eigen::VectorXd coeffs;  // length p

  double eval(const Eigen::VectorXd& z) const { return c0 + coeffs.dot(z); }
};

/// Entry-wise affine rewrite f(x) = A(z(x)) x. User input; residual-checked.
struct Factorization {
  int dim = 0;                                  // n
  std::vector<std::vector<AffineExpr>> entries; // n x n

  Eigen::MatrixXd eval(const Eigen::VectorXd& z) const;
};

/// Sector-nonlinearity convex model: 2^p vertex matrices plus membership
/// weights interpolating the premise bounds.
///
/// Corner ordering contract: vertex v has premise k at its upper bound iff
/// bit (p-1-k) of v is set; equivalently the vertex list is a binary counter
/// (z1..zp) with the LAST premise fastest-varying and the first premise most
/// significant. This matches the printed vertex enumerations this model
/// reproduces.
struct TSModel {
  std::vector<PremiseVar> premises;
  std::vector<Eigen::MatrixXd> vertices;  // 2^p matrices, n x n
  Factorization factorization;
  polyalg::BoxDomain box;

  int p() const { return static_cast<int>(premises.size()); }
  int dim() const { return factorization.dim; }
  Eigen::VectorXd premise_values(const Eigen::VectorXd& x) const;
};

struct WeightResult {
  Eigen::VectorXd w;   // 2^p entries, convex-sum when in_box
  bool in_box = true;
};

/// Tight bounds of z over the box. Monomials get closed-form per-axis
/// extremes; general polynomials fall back to subdivided interval arithmetic
/// (64 cells per axis) and are flagged possibly non-tight.
struct PremiseBounds {
  double z_min;
  double z_max;
  bool tight;
};
PremiseBounds bound_premise(const polyalg::Poly& z, const polyalg::BoxDomain& box);

/// Builds the 2^p vertex model; rejects factorizations whose residual
/// ||A(z(x))x - f(x)|| exceeds 1e-9 relative at 1000 quasi-random samples.
TSModel build_ts(const polyalg::PolyMap& f, const std::vector<polyalg::Poly>& premise_defs,
                 const Factorization& fact, const polyalg::BoxDomain& box);

WeightResult weights(const TSModel& model, const Eigen::VectorXd& x);

/// Max over quasi-random in-box samples of
/// ||sum_i w_i A_i x - f(x)|| / (1 + ||f(x)||).
double reconstruct_residual(const TSModel& model, const polyalg::PolyMap& f, int samples);

}  // namespace roaforge::tsmodel
