// Shared fixtures: the two benchmark systems and their published data.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "roaforge/pipeline.hpp"
#include "roaforge/polyalg.hpp"
#include "roaforge/tsmodel.hpp"

namespace fixtures {

using roaforge::polyalg::BoxDomain;
using roaforge::polyalg::Monomial;
using roaforge::polyalg::Poly;
using roaforge::polyalg::PolyMap;
using roaforge::polyalg::Transform;

// x1' = -x1^2 - 2 x2 - 2 x1,  x2' = x2^3 - x2
inline PolyMap cubic_system() {
  Poly f1(2, {Monomial{-1.0, {2, 0}}, Monomial{-2.0, {0, 1}}, Monomial{-2.0, {1, 0}}});
  Poly f2(2, {Monomial{1.0, {0, 3}}, Monomial{-1.0, {0, 1}}});
  return PolyMap(2, {f1, f2});
}

inline BoxDomain cubic_box() {
  return {Eigen::Vector2d(-1.0, -0.5), Eigen::Vector2d(1.0, 0.5)};
}

inline Transform shear_transform() {
  Eigen::Matrix2d T;
  T << 1, 2, 0, 1;
  return Transform(T);
}

inline BoxDomain shear_box() {
  return {Eigen::Vector2d(-0.55, -0.55), Eigen::Vector2d(0.55, 0.55)};
}

inline Eigen::Matrix2d m2(double a, double b, double c, double d) {
  Eigen::Matrix2d M;
  M << a, b, c, d;
  return M;
}

// Published vertex matrices for the cubic system with z1 = x1, z2 = x2^2.
inline std::vector<Eigen::MatrixXd> cubic_vertices() {
  return {m2(-1, -2, 0, -1), m2(-1, -2, 0, -0.75), m2(-3, -2, 0, -1), m2(-3, -2, 0, -0.75)};
}

// Published piecewise quadratic pair for the cubic system.
inline Eigen::MatrixXd cubic_P1() { return m2(0.1071, -0.0829, -0.0829, 0.2836); }
inline Eigen::MatrixXd cubic_P2() { return m2(0.1045, -0.0852, -0.0852, 0.2605); }

// Published vertex matrices for the sheared system (as printed; the (1,2)
// entry of the eighth matrix also has a sign-flipped variant).
inline std::vector<Eigen::MatrixXd> shear_vertices(bool flip_a8_sign = false) {
  std::vector<Eigen::MatrixXd> A = {
      m2(-1.45, -0.3328, 0, -1.1664), m2(-1.45, 0.3328, 0, -0.8336),
      m2(-0.24, -1.5428, 0, -1.1664), m2(-0.24, 0.8773, 0, -0.8336),
      m2(-2.55, -0.3328, 0, -1.1664), m2(-2.55, 0.3328, 0, -0.8336),
      m2(-1.34, -1.5428, 0, -1.1664), m2(-1.34, -0.8773, 0, -0.8336)};
  if (flip_a8_sign) A[7](0, 1) = 0.8773;
  return A;
}

inline Eigen::MatrixXd shear_P1() { return m2(5.0473, -1.1747, -1.1747, 8.4518); }
inline Eigen::MatrixXd shear_P2() { return m2(5.0896, -1.0599, -1.0599, 8.7648); }

// Factorization of the cubic system over (z1, z2) = (x1, x2^2).
inline roaforge::tsmodel::Factorization cubic_factorization() {
  using roaforge::tsmodel::AffineExpr;
  roaforge::tsmodel::Factorization f;
  f.dim = 2;
  f.entries = {{AffineExpr{-2.0, Eigen::Vector2d(-1, 0)}, AffineExpr{-2.0, Eigen::Vector2d(0, 0)}},
               {AffineExpr{0.0, Eigen::Vector2d(0, 0)}, AffineExpr{-1.0, Eigen::Vector2d(0, 1)}}};
  return f;
}

inline std::vector<Poly> cubic_premises() {
  return {Poly::variable(2, 0), Poly(2, {Monomial{1.0, {0, 2}}})};
}

// Factorization of the sheared system over (z1, z2, z3) = (x1, x2, x2^2):
// consistent with the dynamics (the published vertex list is kept separately
// as direct LDI input since its derivation is not recoverable).
inline roaforge::tsmodel::Factorization shear_factorization() {
  using roaforge::tsmodel::AffineExpr;
  roaforge::tsmodel::Factorization f;
  f.dim = 2;
  f.entries = {{AffineExpr{-2.0, Eigen::Vector3d(-1, 0, 0)},
                AffineExpr{0.0, Eigen::Vector3d(4, -4, 2)}},
               {AffineExpr{0.0, Eigen::Vector3d(0, 0, 0)},
                AffineExpr{-1.0, Eigen::Vector3d(0, 0, 1)}}};
  return f;
}

inline std::vector<Poly> shear_premises() {
  return {Poly::variable(2, 0), Poly::variable(2, 1), Poly(2, {Monomial{1.0, {0, 2}}})};
}

inline roaforge::pipeline::CaseSpec cubic_case() {
  return {Transform::identity(2), cubic_box(), cubic_premises(), cubic_factorization()};
}

inline roaforge::pipeline::CaseSpec shear_case() {
  return {shear_transform(), shear_box(), shear_premises(), shear_factorization()};
}

}  // namespace fixtures
