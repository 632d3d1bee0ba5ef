#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "paper_systems.hpp"
#include "roaforge/polyalg.hpp"

using namespace roaforge::polyalg;

TEST_CASE("eval_field matches hand evaluation") {
  PolyMap f = fixtures::cubic_system();

  CHECK(eval_field(f, Eigen::Vector2d(0, 0)).norm() == doctest::Approx(0.0));

  Eigen::VectorXd v = eval_field(f, Eigen::Vector2d(1, 0.5));
  CHECK(v[0] == doctest::Approx(-4.0));
  CHECK(v[1] == doctest::Approx(-0.375));

  v = eval_field(f, Eigen::Vector2d(-1, 0));
  CHECK(v[0] == doctest::Approx(1.0));
  CHECK(v[1] == doctest::Approx(0.0));

  CHECK_THROWS_AS(eval_field(f, Eigen::Vector3d(1, 2, 3)), std::invalid_argument);
}

TEST_CASE("poly canonical form merges duplicate exponents") {
  Poly p(2, {Monomial{1.0, {1, 0}}, Monomial{2.0, {1, 0}}, Monomial{0.5, {0, 2}}});
  CHECK(p.terms().size() == 2);
  Poly q(2, {Monomial{0.5, {0, 2}}, Monomial{3.0, {1, 0}}});
  CHECK(p.same_canonical_form(q));

  // Coefficients cancelling below tolerance vanish.
  Poly z = p - p;
  CHECK(z.is_zero());
}

TEST_CASE("compose_linear with identity is the identity") {
  PolyMap f = fixtures::cubic_system();
  PolyMap g = compose_linear(f, Transform::identity(2));
  for (int i = 0; i < 2; ++i)
    CHECK(g.components[i].same_canonical_form(f.components[i]));
}

TEST_CASE("compose_linear reproduces the sheared system") {
  PolyMap f = fixtures::cubic_system();
  PolyMap g = compose_linear(f, fixtures::shear_transform());

  // x1' = -x1^2 + 4 x1 x2 - 2 x1 + 2 x2^3 - 4 x2^2
  Poly want1(2, {Monomial{-1.0, {2, 0}}, Monomial{4.0, {1, 1}}, Monomial{-2.0, {1, 0}},
                 Monomial{2.0, {0, 3}}, Monomial{-4.0, {0, 2}}});
  Poly want2(2, {Monomial{1.0, {0, 3}}, Monomial{-1.0, {0, 1}}});
  CHECK(g.components[0].same_canonical_form(want1, 1e-9));
  CHECK(g.components[1].same_canonical_form(want2, 1e-9));
}

TEST_CASE("compose_linear round trip through the inverse") {
  PolyMap f = fixtures::cubic_system();
  Transform T = fixtures::shear_transform();
  Transform Tinv(T.inverse(), T.matrix());
  PolyMap back = compose_linear(compose_linear(f, T), Tinv);
  for (int i = 0; i < 2; ++i)
    CHECK(back.components[i].same_canonical_form(f.components[i], 1e-9));
}

TEST_CASE("compose_linear conjugation identity at random points") {
  PolyMap f = fixtures::cubic_system();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BoxDomain box = fixtures::cubic_box();

  for (int trial = 0; trial < 5; ++trial) {
    Eigen::Matrix2d M;
    do {
      M << u(rng), u(rng), u(rng), u(rng);
    } while (std::abs(M.determinant()) < 0.1);
    Transform T(M);
    PolyMap fbar = compose_linear(f, T);
    for (int i = 0; i < 200; ++i) {
      Eigen::Vector2d x(u(rng) * 1.0, u(rng) * 0.5);
      Eigen::VectorXd lhs = fbar.eval(T.matrix() * x);
      Eigen::VectorXd rhs = T.matrix() * f.eval(x);
      CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + f.eval(x).norm()));
    }
  }
}

TEST_CASE("compose_linear rejects degree above the expansion cap") {
  Poly high(1, {Monomial{1.0, {9}}});
  PolyMap f(1, {high});
  CHECK_THROWS_AS(compose_linear(f, Transform::identity(1)), std::invalid_argument);
}

TEST_CASE("map_box") {
  BoxDomain box = fixtures::cubic_box();

  SUBCASE("identity keeps corners") {
    auto verts = map_box(box, Transform::identity(2));
    CHECK(verts.size() == 4);
    auto corners = box.corners();
    for (size_t i = 0; i < 4; ++i) CHECK((verts[i] - corners[i]).norm() == doctest::Approx(0));
  }

  SUBCASE("shear maps the box to the expected parallelogram") {
    auto verts = map_box(box, fixtures::shear_transform());
    std::vector<Eigen::Vector2d> expect = {{2, 0.5}, {0, -0.5}, {-2, -0.5}, {0, 0.5}};
    for (const auto& e : expect) {
      bool found = false;
      for (const auto& v : verts) found = found || (v - Eigen::VectorXd(e)).norm() < 1e-12;
      CHECK(found);
    }
  }

  SUBCASE("singular transform is rejected at construction") {
    Eigen::Matrix2d S;
    S << 1, 2, 2, 4;
    CHECK_THROWS_AS(Transform{S}, std::invalid_argument);
  }
}

TEST_CASE("BoxDomain invariants") {
  CHECK_THROWS_AS(BoxDomain(Eigen::Vector2d(0.5, -1), Eigen::Vector2d(1, 1)),
                  std::invalid_argument);  // origin not strictly inside
  CHECK_THROWS_AS(BoxDomain(Eigen::Vector2d(1, -1), Eigen::Vector2d(-1, 1)),
                  std::invalid_argument);  // lower >= upper
}

TEST_CASE("map_box_bounding is the hull of the mapped corners") {
  BoxDomain box = fixtures::cubic_box();
  BoxDomain bb = map_box_bounding(box, fixtures::shear_transform());
  CHECK(bb.lower[0] == doctest::Approx(-2.0));
  CHECK(bb.upper[0] == doctest::Approx(2.0));
  CHECK(bb.lower[1] == doctest::Approx(-0.5));
  CHECK(bb.upper[1] == doctest::Approx(0.5));
}
