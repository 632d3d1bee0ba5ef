#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace roaforge::lmikit {

/// Enforces the SymMatrix invariant: max|M - M^T| <= 1e-12.
void require_symmetric(const Eigen::MatrixXd& M, const char* what);

/// Vertex set of a linear differential inclusion xdot in co{A_i x}.
struct LdiSystem {
  std::vector<Eigen::MatrixXd> vertices;

  LdiSystem() = default;
  explicit LdiSystem(std::vector<Eigen::MatrixXd> verts);
  int dim() const { return vertices.empty() ? 0 : static_cast<int>(vertices[0].rows()); }
  int count() const { return static_cast<int>(vertices.size()); }
};

/// Piecewise quadratic certificate for V(x) = max_j x'P_j x. P_list holds
/// one matrix (plain quadratic case) or two (N=2 piecewise case).
struct PwqCertificate {
  std::vector<Eigen::MatrixXd> P_list;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double margin = 0.0;  // smallest eigenvalue across all verified constraints
};

struct MarginReport {
  double margin = 0.0;
  bool accepted = false;
  std::vector<double> constraint_margins;
};

/// G(y) = F0 + sum_j y_j * Fj[j], required >= t*I.
struct LmiConstraint {
  Eigen::MatrixXd F0;
  std::vector<Eigen::MatrixXd> Fj;
};

struct FeasibilityResult {
  bool found = false;
  Eigen::VectorXd y;
  double margin = 0.0;  // achieved min eigenvalue over all constraints
  int iterations = 0;
  std::string diagnostics;
};

struct CoreOptions {
  int max_iterations = 5000;
  double accept_margin = 1e-7;
};

/// Maximizes t subject to every constraint matrix >= t*I and the linear
/// normalization eq_coeffs . y = eq_rhs. Smoothed min-eigenvalue ascent with
/// mu-continuation; the returned point is only ever trusted after an
/// independent eigenvalue check by the caller.
FeasibilityResult feasibility_core(const std::vector<LmiConstraint>& constraints,
                                   const Eigen::VectorXd& eq_coeffs, double eq_rhs,
                                   const CoreOptions& opts = {});

/// P > 0 with -(PA + A'P) > 0, trace-normalized to trace(P) = n.
std::optional<Eigen::MatrixXd> solve_quadratic_lti(const Eigen::MatrixXd& A);

/// Common quadratic certificate over all vertices.
std::optional<Eigen::MatrixXd> solve_quadratic_ldi(const LdiSystem& sys);

/// N=2 piecewise quadratic search over the lambda grid (ascending lambda1
/// then lambda2, first verified certificate wins).
std::optional<PwqCertificate> solve_pwq(const LdiSystem& sys,
                                        const std::vector<double>& lambda_grid);

/// Pure eigenvalue check of the certificate constraints; solver-independent.
MarginReport verify_certificate(const PwqCertificate& cert, const LdiSystem& sys, double tol);

/// For fixed (P1, P2), maximizes the verification margin over lambda1 and
/// lambda2 >= 0 (each concave, searched independently: coarse grid then
/// golden-section refinement). Used to check externally supplied P pairs
/// whose lambdas are unknown.
struct LambdaSearchResult {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double margin = 0.0;
};
LambdaSearchResult best_lambda_margin(const Eigen::MatrixXd& P1, const Eigen::MatrixXd& P2,
                                      const LdiSystem& sys, double lambda_max = 1000.0);

}  // namespace roaforge::lmikit
