#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "riemctl/manifolds.hpp"
#include "support/oracles.hpp"

using namespace riemctl;

TEST_CASE("stereographic chart forward maps") {
  const auto& s2 = sphere2();
  const Point e1 = s2.point(make_vec({1.0, 0.0, 0.0}));
  const Vec xi = s2_chart_forward(S2Chart::plus, e1);
  CHECK(xi[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(xi[1] == doctest::Approx(0.0).epsilon(1e-15));

  const Point n = s2.point(make_vec({0.0, 0.0, 1.0}));
  const Vec at_origin = s2_chart_forward(S2Chart::plus, n);
  CHECK(at_origin.norm() == 0.0);

  CHECK_THROWS_AS((void)s2_chart_forward(S2Chart::minus, n), ChartDomainError);
}

TEST_CASE("stereographic chart inverse maps") {
  const Point n = s2_chart_inverse(S2Chart::plus, make_vec({0.0, 0.0}));
  CHECK((n.rep - make_vec({0.0, 0.0, 1.0})).norm() < 1e-15);

  const Point e1 = s2_chart_inverse(S2Chart::plus, make_vec({1.0, 0.0}));
  CHECK((e1.rep - make_vec({1.0, 0.0, 0.0})).norm() < 1e-15);

  SUBCASE("roundtrip away from the excluded pole") {
    Rng rng(3);
    for (int trial = 0; trial < 300; ++trial) {
      Point x = oracles::random_s2_point(rng);
      if (x.rep[2] <= -0.9) continue;
      const Point back = s2_chart_inverse(S2Chart::plus, s2_chart_forward(S2Chart::plus, x));
      CHECK((back.rep - x.rep).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(back.rep.squaredNorm() - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("sphere control fields") {
  const auto& s2 = sphere2();
  const Point n = s2.point(make_vec({0.0, 0.0, 1.0}));
  const auto fields = s2_vector_fields(n);
  CHECK(fields[0].comp.norm() == 0.0);
  CHECK((fields[1].comp - make_vec({0.0, 1.0, 0.0})).norm() == 0.0);
  CHECK((fields[2].comp - make_vec({-1.0, 0.0, 0.0})).norm() == 0.0);

  SUBCASE("orthogonality to the base point at 1000 random points") {
    Rng rng(13);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Point x = oracles::random_s2_point(rng);
      for (const Tangent& f : s2_vector_fields(x))
        worst = std::max(worst, std::abs(x.rep.dot(f.comp)));
    }
    CHECK(worst <= 1e-10);
  }

  SUBCASE("chart expression of f1 is (xi2, -xi1)") {
    const Point x = s2_chart_inverse(S2Chart::plus, make_vec({1.0, 0.0}));
    const auto fs = s2_vector_fields(x);
    const Vec w = sphere2().tangent_to_chart(0, x.rep, fs[0].comp);
    CHECK(w[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(-1.0).epsilon(1e-14));

    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      Vec xi(2);
      xi[0] = rng.uniform(-2.0, 2.0);
      xi[1] = rng.uniform(-2.0, 2.0);
      const Point p = s2_chart_inverse(S2Chart::plus, xi);
      const auto f = s2_vector_fields(p);
      const Vec w1 = sphere2().tangent_to_chart(0, p.rep, f[0].comp);
      CHECK(w1[0] == doctest::Approx(xi[1]).epsilon(1e-11).scale(1.0));
      CHECK(w1[1] == doctest::Approx(-xi[0]).epsilon(1e-11).scale(1.0));
      const Vec w2 = sphere2().tangent_to_chart(0, p.rep, f[1].comp);
      CHECK(w2[0] == doctest::Approx(xi[0] * xi[1]).epsilon(1e-11).scale(1.0));
      CHECK(w2[1] ==
            doctest::Approx(0.5 * (1.0 - xi[0] * xi[0] + xi[1] * xi[1])).epsilon(1e-11).scale(1.0));
      const Vec w3 = sphere2().tangent_to_chart(0, p.rep, f[2].comp);
      CHECK(w3[0] ==
            doctest::Approx(0.5 * (-1.0 - xi[0] * xi[0] + xi[1] * xi[1])).epsilon(1e-11).scale(1.0));
      CHECK(w3[1] == doctest::Approx(-xi[0] * xi[1]).epsilon(1e-11).scale(1.0));
    }
  }

  SUBCASE("the three fields span the tangent plane: Gram rank exactly 2") {
    Rng rng(19);
    for (int trial = 0; trial < 1000; ++trial) {
      const Point x = oracles::random_s2_point(rng);
      const auto f = s2_vector_fields(x);
      Eigen::Matrix3d gram;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) gram(i, j) = f[i].comp.dot(f[j].comp);
      const Eigen::Vector3d sv = gram.jacobiSvd().singularValues();
      CHECK(sv[1] > 1e-8);
      CHECK(sv[2] <= 1e-8);
    }
  }

  SUBCASE("linear combinations are rigid rotations: sum u_i f_i = omega x x") {
    Rng rng(29);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
      const Point x = oracles::random_s2_point(rng);
      Vec u(3);
      for (int i = 0; i < 3; ++i) u[i] = rng.uniform(-3.0, 3.0);
      const auto f = s2_vector_fields(x);
      const Vec combo = u[0] * f[0].comp + u[1] * f[1].comp + u[2] * f[2].comp;
      const Vec omega = oracles::s2_omega(u);
      Vec cross(3);
      cross[0] = omega[1] * x.rep[2] - omega[2] * x.rep[1];
      cross[1] = omega[2] * x.rep[0] - omega[0] * x.rep[2];
      cross[2] = omega[0] * x.rep[1] - omega[1] * x.rep[0];
      worst = std::max(worst, (combo - cross).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-14);
  }
}

TEST_CASE("hyperbolic control fields") {
  const auto& h3 = hyperbolic3();
  const Point x0 = h3.point(make_vec({0.0, 0.0, 1.0}));
  const auto fields = h3_vector_fields(x0);
  CHECK((fields[0].comp - make_vec({0.0, 0.0, 1.0})).norm() == 0.0);
  CHECK((fields[1].comp - make_vec({0.0, 0.0, 1.0})).norm() == 0.0);
  CHECK(tangent_norm(x0, fields[0]) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tangent_norm(x0, fields[1]) == doctest::Approx(1.0).epsilon(1e-14));

  SUBCASE("closed-form field norms match the metric") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
      const Point x = oracles::random_h3_point(rng);
      const auto f = h3_vector_fields(x);
      CHECK(tangent_norm(x, f[0]) ==
            doctest::Approx(h3_field_norm(x, 1)).epsilon(1e-12));
      CHECK(tangent_norm(x, f[1]) ==
            doctest::Approx(h3_field_norm(x, 2)).epsilon(1e-12));
      CHECK(h3_field_norm(x, 1) >= 1.0);
      CHECK(h3_field_norm(x, 2) >= 1.0);
    }
  }

  SUBCASE("covariant derivative stays bounded over the sample box") {
    // Empirical stand-in for the unquantified analytic constant; the value
    // is logged and the Lipschitz estimator must sit below it.
    Rng rng(37);
    double bound = 0.0;
    for (int trial = 0; trial < 2000; ++trial) {
      Vec x(3);
      x[0] = rng.uniform(-2.0, 2.0);
      x[1] = rng.uniform(-2.0, 2.0);
      x[2] = rng.uniform(0.5, 10.0);
      bound = std::max(bound, oracles::h3_field_covariant_opnorm(x, 1));
      bound = std::max(bound, oracles::h3_field_covariant_opnorm(x, 2));
    }
    CHECK(std::isfinite(bound));
    CHECK(bound > 0.0);
    CHECK(bound < 20.0);
    MESSAGE("empirical sup |nabla f_i|_g over the box: ", bound);
  }
}

TEST_CASE("euclidean backend basics") {
  const auto& e2 = euclidean(2);
  CHECK(e2.dim() == 2);
  const Point x = e2.point(make_vec({1.0, -2.0}));
  const Point y = e2.point(make_vec({4.0, 2.0}));
  CHECK(distance(x, y) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK_THROWS_AS(EuclideanSpace(0), ConfigError);
  CHECK_THROWS_AS(EuclideanSpace(kMaxDim + 1), ConfigError);
}

TEST_CASE("domain predicates") {
  const auto& h3 = hyperbolic3();
  CHECK_THROWS_AS((void)h3.point(make_vec({0.0, 0.0, -1.0})), ContractViolation);
  CHECK_THROWS_AS((void)h3.point(make_vec({0.0, 0.0, 0.0})), ContractViolation);

  const auto& s2 = sphere2();
  const Point p = s2.point(make_vec({0.0, 3.0, 4.0}));  // normalized on construction
  CHECK(p.rep.norm() == doctest::Approx(1.0).epsilon(1e-15));
}
