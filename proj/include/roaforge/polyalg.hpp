#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace roaforge::polyalg {

/// One term c * x1^e1 * ... * xn^en of a polynomial.
struct Monomial {
  double coeff = 0.0;
  std::vector<int> powers;  // length = ambient dimension

  int degree() const;
};

/// Polynomial in n variables, kept in canonical merged form: terms sorted
/// graded-lexicographically, no duplicate exponent vectors, coefficients
/// below 1e-12 dropped.
class Poly {
 public:
  Poly() = default;
  Poly(int dim, std::vector<Monomial> terms);

  static Poly zero(int dim);
  static Poly constant(int dim, double c);
  static Poly variable(int dim, int index);  // x_index

  int dim() const { return dim_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }

  double eval(const Eigen::VectorXd& x) const;
  double eval(std::span<const double> x) const;

  Poly operator+(const Poly& other) const;
  Poly operator-(const Poly& other) const;
  Poly operator*(const Poly& other) const;
  Poly operator*(double s) const;

  bool same_canonical_form(const Poly& other, double tol = 1e-12) const;

 private:
  int dim_ = 0;
  std::vector<Monomial> terms_;
};

/// n-dimensional polynomial vector field f(x).
struct PolyMap {
  int dim = 0;
  std::vector<Poly> components;

  PolyMap() = default;
  PolyMap(int dim, std::vector<Poly> components);

  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
  // Allocation-free path for integrator hot loops.
  void eval_into(std::span<const double> x, std::span<double> out) const;
};

/// Axis-aligned box with the origin strictly inside.
struct BoxDomain {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  BoxDomain() = default;
  BoxDomain(Eigen::VectorXd lo, Eigen::VectorXd hi);

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
  double volume() const;
  std::vector<Eigen::VectorXd> corners() const;  // 2^n corners
};

/// Invertible linear change of coordinates xbar = T x.
class Transform {
 public:
  explicit Transform(const Eigen::MatrixXd& T);
  Transform(const Eigen::MatrixXd& T, const Eigen::MatrixXd& T_inv);

  static Transform identity(int n);

  const Eigen::MatrixXd& matrix() const { return T_; }
  const Eigen::MatrixXd& inverse() const { return T_inv_; }
  int dim() const { return static_cast<int>(T_.rows()); }
  bool is_identity(double tol = 1e-14) const;

 private:
  void check() const;
  Eigen::MatrixXd T_;
  Eigen::MatrixXd T_inv_;
};

Eigen::VectorXd eval_field(const PolyMap& f, const Eigen::VectorXd& x);

/// fbar with fbar(Tx) = T f(x); expansion capped at total degree 8.
PolyMap compose_linear(const PolyMap& f, const Transform& T);

/// Image {Tx : x in box} as a corner-listed polytope (2^n vertices).
std::vector<Eigen::VectorXd> map_box(const BoxDomain& box, const Transform& T);

/// Axis-aligned bounding box of map_box; an over-approximation unless T is
/// a signed permutation/scaling.
BoxDomain map_box_bounding(const BoxDomain& box, const Transform& T);

}  // namespace roaforge::polyalg
