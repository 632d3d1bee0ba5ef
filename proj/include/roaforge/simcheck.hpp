#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "roaforge/levelset.hpp"
#include "roaforge/polyalg.hpp"

namespace roaforge::simcheck {

enum class ExitReason { converged, horizon, left_domain, diverged };

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;  // recorded every record_stride steps
  bool converged = false;
  ExitReason exit_reason = ExitReason::horizon;
};

struct IntegrateOptions {
  double dt = 1e-3;
  double horizon = 50.0;
  double conv_radius = 1e-4;
  double escape_radius = 1e6;
  int record_stride = 1;
  const polyalg::BoxDomain* domain = nullptr;  // optional left_domain detection
};

/// Fixed-step classic RK4; stops early on convergence, divergence, or
/// (when a domain is given) leaving it.
Trajectory integrate(const polyalg::PolyMap& f, const Eigen::VectorXd& x0,
                     const IntegrateOptions& opts);

struct ValidationReport {
  int tested = 0;
  int converged = 0;
  Eigen::VectorXd worst_point;  // first non-converged sample, if any
  double convergence_fraction() const {
    return tested == 0 ? 1.0 : static_cast<double>(converged) / tested;
  }
};

/// Integrates quasi-random in-region samples of the original system and
/// reports the convergence fraction (1.0 for a sound certificate).
ValidationReport validate_region(const std::function<bool(const Eigen::VectorXd&)>& member,
                                 const polyalg::BoxDomain& sample_box,
                                 const polyalg::PolyMap& f, int n_samples, std::uint64_t seed,
                                 const IntegrateOptions& opts = {});

/// Max observed per-step increase of V(Tx(t)) along in-region trajectory
/// segments; should stay below 1e-6 * (1 + V) for a valid certificate.
double lyapunov_decrease_check(const levelset::RoaEstimate& roa, const polyalg::PolyMap& f,
                               int n_samples, std::uint64_t seed,
                               const IntegrateOptions& opts = {});

}  // namespace roaforge::simcheck
